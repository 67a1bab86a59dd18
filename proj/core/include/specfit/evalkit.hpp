#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "specfit/altmin.hpp"
#include "specfit/csv.hpp"
#include "specfit/dataset.hpp"
#include "specfit/pencil.hpp"

namespace specfit {

/// Root-mean-squared prediction error of the pencil on the dataset.
double rmse(const Pencil& p, const Dataset& data);

/// Free parameters per coefficient matrix: (m/k) * k*(k+1)/2.
int dof_per_dim(int m, int k);

struct BenchmarkRow {
  std::string model;       // dataset tag
  int dof = 0;             // dof_per_dim(m, k)
  std::string estimator;   // "spectrahedral" or "polyhedral"
  int m = 0;
  int k = 0;
  double train_rmse = 0.0;
  double test_rmse = 0.0;
  double wall_time_s = 0.0;
  int restarts = 0;
  std::uint64_t seed = 0;
};

struct BenchmarkResult {
  std::string format_version = "1";
  std::vector<BenchmarkRow> rows;
};

/// Fixed column order: model,dof,estimator,m,k,train_rmse,test_rmse,wall_time_s,seed.
/// Numeric fields are deterministic for a fixed seed; wall_time_s is not, and
/// can be suppressed (written as 0) for byte-comparable output.
std::string benchmark_to_csv(const BenchmarkResult& result, bool include_wall_time = true);

/// JSON mirror of the type, format_version "1".
std::string benchmark_to_json(const BenchmarkResult& result);

struct HoldoutSelection {
  std::pair<int, int> best;       // (m, k) with the smallest test RMSE
  BenchmarkResult table;
  std::vector<std::string> failures;  // candidates whose fit threw, with reasons
};

/// Splits once, fits every (m, k) candidate on the train part, scores on the
/// held-out part, and picks the test-RMSE argmin (ties: smaller dof, then
/// smaller k). Candidates that fail are recorded and skipped.
HoldoutSelection holdout_select(const Dataset& data,
                                const std::vector<std::pair<int, int>>& candidates,
                                const FitConfig& config, double test_fraction,
                                std::uint64_t seed);

enum class BenchmarkSuite { synthetic, circuit, csv };

BenchmarkSuite parse_suite(const std::string& name);

struct BenchmarkSpec {
  BenchmarkSuite suite = BenchmarkSuite::synthetic;
  std::vector<int> dof_levels{3, 6, 10};
  FitConfig config;             // m, k are overridden per cell
  int n = 200;                  // samples per synthetic dataset
  double sigma = 0.1;           // train noise for the synthetic suite
  double test_fraction = 0.2;   // hold-out fraction for circuit / csv suites
  std::string csv_path;         // csv suite inputs
  std::vector<std::string> x_columns;
  std::string y_column;
  std::map<std::string, ColumnTransform> transforms;
};

/// For each dof level v, pairs the (m, m)-spectrahedral estimator with
/// m(m+1)/2 = v against the (v, 1)-polyhedral estimator. The synthetic suite
/// fits both models (l2norm, expmodel) on n noisy train points and scores on
/// n fresh noiseless test points; circuit and csv score on a hold-out split.
/// Deterministic given config.seed.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec);

/// The m with m*(m+1)/2 == dof; throws if no integer solution exists.
int spectrahedral_order_for_dof(int dof);

}  // namespace specfit
