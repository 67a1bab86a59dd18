#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "specfit/dataset.hpp"

namespace specfit {

/// Per-column ingestion map: identity, log, c^x (exp_base), or a*x + b.
struct ColumnTransform {
  enum class Kind { identity, log, exp_base, affine };
  Kind kind = Kind::identity;
  double a = 1.0;  // base for exp_base; slope for affine
  double b = 0.0;  // intercept for affine

  double apply(double x) const;
};

/// Parses the flag mini-grammar, e.g.
///   "education=expbase:1.2,wage=log,exper=affine:2:1"
/// into a column -> transform map. Accepted transform specs: "identity",
/// "log", "expbase:C", "affine:A:B".
std::map<std::string, ColumnTransform> parse_transforms(const std::string& text);

/// Loads a headered CSV: the named x-columns (transformed) become covariates
/// in the given order, the y-column the response. Rows that are non-finite
/// after transformation are dropped and counted in meta.dropped_rows.
Dataset load_csv(const std::filesystem::path& path, const std::vector<std::string>& x_columns,
                 const std::string& y_column,
                 const std::map<std::string, ColumnTransform>& transforms = {});

/// Column names of a headered CSV.
std::vector<std::string> csv_header(const std::filesystem::path& path);

/// The named columns of a headered CSV as a matrix, transforms applied.
/// Unlike load_csv this keeps every row and errors on non-finite values.
Eigen::MatrixXd load_csv_columns(const std::filesystem::path& path,
                                 const std::vector<std::string>& columns,
                                 const std::map<std::string, ColumnTransform>& transforms = {});

}  // namespace specfit
