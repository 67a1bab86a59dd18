#include "specfit/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <vector>

#include "specfit/errors.hpp"
#include "specfit/rng.hpp"

namespace specfit {

void validate_dataset(const Dataset& data) {
  if (data.n() < 1) throw contract_error("dataset: at least one sample required");
  if (data.y.size() != data.x.rows()) {
    throw contract_error("dataset: covariate row count " + std::to_string(data.x.rows()) +
                         " != response length " + std::to_string(data.y.size()));
  }
  if (!data.x.allFinite() || !data.y.allFinite()) {
    throw contract_error("dataset: non-finite entry");
  }
}

std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction,
                                  std::uint64_t seed) {
  validate_dataset(data);
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw contract_error("split: test_fraction must lie in (0, 1)");
  }
  const int n = data.n();
  if (n < 2) throw contract_error("split: need at least 2 samples");
  const int n_train = static_cast<int>(std::ceil(static_cast<double>(n) * (1.0 - test_fraction)));
  const int n_test = n - n_train;
  if (n_train < 1 || n_test < 1) {
    throw contract_error("split: degenerate sizes (" + std::to_string(n_train) + ", " +
                         std::to_string(n_test) + ")");
  }

  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  std::sort(idx.begin(), idx.begin() + n_train);
  std::sort(idx.begin() + n_train, idx.end());

  auto take = [&](int offset, int count, const char* tag) {
    Dataset out;
    out.x.resize(count, data.dim());
    out.y.resize(count);
    for (int i = 0; i < count; ++i) {
      const int src = idx[static_cast<std::size_t>(offset + i)];
      out.x.row(i) = data.x.row(src);
      out.y[i] = data.y[src];
    }
    out.meta = data.meta;
    out.meta.detail += std::string(out.meta.detail.empty() ? "" : "; ") + tag +
                       " split, seed " + std::to_string(seed);
    return out;
  };
  return {take(0, n_train, "train"), take(n_train, n_test, "test")};
}

Dataset normalize_directions(const Dataset& data) {
  validate_dataset(data);
  Dataset out = data;
  for (int i = 0; i < out.n(); ++i) {
    const double nrm = out.x.row(i).norm();
    if (nrm == 0.0) {
      throw contract_error("normalize_directions: zero covariate row at index " +
                           std::to_string(i));
    }
    out.x.row(i) /= nrm;
  }
  out.meta.normalized = true;
  out.meta.detail += std::string(out.meta.detail.empty() ? "" : "; ") + "sphere-normalized";
  return out;
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  validate_dataset(data);
  std::ofstream out(path);
  if (!out) throw data_error("cannot open for writing: " + path.string());
  for (int j = 0; j < data.dim(); ++j) out << "x" << (j + 1) << ",";
  out << "y\n";
  char buf[64];
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.dim(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.x(i, j));
      out << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", data.y[i]);
    out << buf << "\n";
  }
  if (!out) throw data_error("write failed: " + path.string());
}

}  // namespace specfit
