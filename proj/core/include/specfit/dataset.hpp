#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>

namespace specfit {

struct DatasetMeta {
  std::string source;       // generator tag or file provenance
  std::string detail;       // generator parameters / applied operations
  std::uint64_t seed = 0;
  int dropped_rows = 0;     // rows removed by ingestion transforms
  bool normalized = false;  // covariate rows scaled to the unit sphere
};

/// n covariate/response pairs. Rows of x pair with entries of y.
struct Dataset {
  Eigen::MatrixXd x;  // n x d
  Eigen::VectorXd y;  // n
  DatasetMeta meta;

  int n() const noexcept { return static_cast<int>(x.rows()); }
  int dim() const noexcept { return static_cast<int>(x.cols()); }
};

/// Throws contract_error unless n >= 1, shapes agree, and all entries are finite.
void validate_dataset(const Dataset& data);

/// Disjoint uniform random split. Train size is ceil(n * (1 - test_fraction)),
/// test gets the remainder; deterministic given the seed.
std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction, std::uint64_t seed);

/// Each covariate row replaced by x / ||x||_2 (responses untouched). Errors on
/// a zero row, reporting its index.
Dataset normalize_directions(const Dataset& data);

/// Writes "x1,...,xd,y" with one sample per row, 17-significant-digit numbers.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace specfit
