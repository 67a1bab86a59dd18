#include "specfit/model_io.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <vector>

#include "specfit/errors.hpp"

namespace specfit {

using nlohmann::json;

void save_model(const std::filesystem::path& path, const Pencil& pencil, const ModelMeta& meta) {
  json j;
  j["format_version"] = "1";
  j["d"] = pencil.input_dim();
  j["m"] = pencil.order();
  j["k"] = pencil.block_size();
  j["homogeneous"] = pencil.homogeneous();
  json matrices = json::array();
  const int k = pencil.block_size();
  for (int s = 0; s < pencil.num_slots(); ++s) {
    json blocks = json::array();
    for (int b = 0; b < pencil.slot(s).num_blocks(); ++b) {
      const Eigen::MatrixXd& blk = pencil.slot(s).block(b);
      json flat = json::array();
      for (int i = 0; i < k; ++i) {
        for (int jj = 0; jj < k; ++jj) flat.push_back(blk(i, jj));
      }
      blocks.push_back(std::move(flat));
    }
    matrices.push_back(std::move(blocks));
  }
  j["matrices"] = std::move(matrices);
  j["meta"] = {{"created_by", meta.created_by},
               {"seed", meta.seed},
               {"train_rmse", meta.train_rmse},
               {"dataset", meta.dataset}};

  std::ofstream out(path);
  if (!out) throw data_error("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw data_error("write failed: " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw data_error("model file " + path.string() + ": " + e.what());
  }

  try {
    if (j.at("format_version").get<std::string>() != "1") {
      throw data_error("model file " + path.string() + ": unsupported format_version");
    }
    const int d = j.at("d").get<int>();
    const int m = j.at("m").get<int>();
    const int k = j.at("k").get<int>();
    const bool homogeneous = j.at("homogeneous").get<bool>();
    if (d < 1 || m < 1 || k < 1 || m % k != 0) {
      throw data_error("model file " + path.string() + ": invalid shape (d=" +
                       std::to_string(d) + ", m=" + std::to_string(m) + ", k=" +
                       std::to_string(k) + ")");
    }
    const json& matrices = j.at("matrices");
    const int slots = d + (homogeneous ? 0 : 1);
    if (static_cast<int>(matrices.size()) != slots) {
      throw data_error("model file " + path.string() + ": expected " + std::to_string(slots) +
                       " matrices, found " + std::to_string(matrices.size()));
    }
    const int nb = m / k;
    auto parse_slot = [&](const json& blocks_j) {
      if (static_cast<int>(blocks_j.size()) != nb) {
        throw data_error("model file " + path.string() + ": expected " + std::to_string(nb) +
                         " blocks per matrix");
      }
      std::vector<Eigen::MatrixXd> blocks;
      blocks.reserve(static_cast<std::size_t>(nb));
      for (const json& flat : blocks_j) {
        if (static_cast<int>(flat.size()) != k * k) {
          throw data_error("model file " + path.string() + ": block must hold " +
                           std::to_string(k * k) + " numbers");
        }
        Eigen::MatrixXd blk(k, k);
        int idx = 0;
        for (int i = 0; i < k; ++i) {
          for (int jj = 0; jj < k; ++jj) blk(i, jj) = flat[idx++].get<double>();
        }
        if (!blk.allFinite()) {
          throw data_error("model file " + path.string() + ": non-finite entry");
        }
        const double asym = (blk - blk.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-9) {
          throw data_error("model file " + path.string() + ": block asymmetric by " +
                           std::to_string(asym));
        }
        blocks.push_back(std::move(blk));
      }
      return BlockSymMatrix(m, k, std::move(blocks));
    };

    std::vector<BlockSymMatrix> coeffs;
    coeffs.reserve(static_cast<std::size_t>(d));
    for (int s = 0; s < d; ++s) coeffs.push_back(parse_slot(matrices.at(s)));
    std::optional<BlockSymMatrix> offset;
    if (!homogeneous) offset = parse_slot(matrices.at(d));

    ModelFile out;
    out.pencil = Pencil(std::move(coeffs), std::move(offset));
    if (j.contains("meta")) {
      const json& meta = j["meta"];
      out.meta.created_by = meta.value("created_by", "");
      out.meta.seed = meta.value("seed", std::uint64_t{0});
      out.meta.train_rmse = meta.value("train_rmse", 0.0);
      out.meta.dataset = meta.value("dataset", "");
    }
    return out;
  } catch (const json::exception& e) {
    throw data_error("model file " + path.string() + ": " + e.what());
  }
}

}  // namespace specfit
