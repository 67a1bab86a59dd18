#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "specfit/pencil.hpp"

namespace specfit {

struct ModelMeta {
  std::string created_by;
  std::uint64_t seed = 0;
  double train_rmse = 0.0;
  std::string dataset;  // provenance of the training data
};

struct ModelFile {
  Pencil pencil;
  ModelMeta meta;
};

/// JSON model format, format_version "1":
///   { "format_version": "1", "d": .., "m": .., "k": .., "homogeneous": ..,
///     "matrices": [ per slot: [ per block: row-major k*k numbers ] ],
///     "meta": { "created_by": .., "seed": .., "train_rmse": .., "dataset": .. } }
/// Slots are A_1..A_d followed by the offset when not homogeneous. The writer
/// emits exactly symmetric blocks; numbers round-trip losslessly.
void save_model(const std::filesystem::path& path, const Pencil& pencil, const ModelMeta& meta);

/// Rejects unknown versions, mismatched shapes, non-finite entries and blocks
/// asymmetric beyond 1e-9 (accepted blocks are symmetrized exactly).
ModelFile load_model(const std::filesystem::path& path);

}  // namespace specfit
