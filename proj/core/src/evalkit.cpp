#include "specfit/evalkit.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "specfit/errors.hpp"
#include "specfit/generators.hpp"
#include "specfit/rng.hpp"

namespace specfit {

double rmse(const Pencil& p, const Dataset& data) {
  return std::sqrt(train_mse(p, data));
}

int dof_per_dim(int m, int k) { return vech_length(m, k); }

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string benchmark_to_csv(const BenchmarkResult& result, bool include_wall_time) {
  std::ostringstream out;
  out << "model,dof,estimator,m,k,train_rmse,test_rmse,wall_time_s,seed\n";
  for (const BenchmarkRow& r : result.rows) {
    out << r.model << "," << r.dof << "," << r.estimator << "," << r.m << "," << r.k << ","
        << fmt17(r.train_rmse) << "," << fmt17(r.test_rmse) << ","
        << fmt17(include_wall_time ? r.wall_time_s : 0.0) << "," << r.seed << "\n";
  }
  return out.str();
}

std::string benchmark_to_json(const BenchmarkResult& result) {
  nlohmann::json j;
  j["format_version"] = result.format_version;
  j["rows"] = nlohmann::json::array();
  for (const BenchmarkRow& r : result.rows) {
    j["rows"].push_back({{"model", r.model},
                         {"dof", r.dof},
                         {"estimator", r.estimator},
                         {"m", r.m},
                         {"k", r.k},
                         {"train_rmse", r.train_rmse},
                         {"test_rmse", r.test_rmse},
                         {"wall_time_s", r.wall_time_s},
                         {"restarts", r.restarts},
                         {"seed", r.seed}});
  }
  return j.dump(2);
}

namespace {

BenchmarkRow fit_cell(const Dataset& train, const Dataset& test, const std::string& model_tag,
                      int m, int k, const FitConfig& base, std::uint64_t cell_seed) {
  FitConfig cfg = base;
  cfg.m = m;
  cfg.k = k;
  cfg.seed = cell_seed;
  const auto t0 = std::chrono::steady_clock::now();
  const FitReport rep = fit(train, cfg);
  const auto t1 = std::chrono::steady_clock::now();
  BenchmarkRow row;
  row.model = model_tag;
  row.dof = dof_per_dim(m, k);
  row.estimator = k == 1 ? "polyhedral" : "spectrahedral";
  row.m = m;
  row.k = k;
  row.train_rmse = rmse(rep.best_pencil, train);
  row.test_rmse = rmse(rep.best_pencil, test);
  row.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  row.restarts = cfg.restarts;
  row.seed = cell_seed;
  return row;
}

}  // namespace

HoldoutSelection holdout_select(const Dataset& data,
                                const std::vector<std::pair<int, int>>& candidates,
                                const FitConfig& config, double test_fraction,
                                std::uint64_t seed) {
  if (candidates.empty()) throw contract_error("holdout_select: at least one candidate");
  const auto [train, test] = split(data, test_fraction, seed);
  HoldoutSelection out;
  int best_idx = -1;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto [m, k] = candidates[c];
    try {
      out.table.rows.push_back(fit_cell(train, test, data.meta.source, m, k, config,
                                        mix_seed(seed ^ mix_seed(c + 1))));
    } catch (const std::exception& e) {
      out.failures.push_back("(m=" + std::to_string(m) + ",k=" + std::to_string(k) +
                             "): " + e.what());
      continue;
    }
    const BenchmarkRow& row = out.table.rows.back();
    if (best_idx < 0) {
      best_idx = static_cast<int>(out.table.rows.size()) - 1;
    } else {
      const BenchmarkRow& cur = out.table.rows[static_cast<std::size_t>(best_idx)];
      const auto key = [](const BenchmarkRow& r) {
        return std::make_tuple(r.test_rmse, r.dof, r.k);
      };
      if (key(row) < key(cur)) best_idx = static_cast<int>(out.table.rows.size()) - 1;
    }
  }
  if (best_idx < 0) {
    throw numerical_error("holdout_select: every candidate failed (" +
                          std::to_string(out.failures.size()) + " failures)");
  }
  const BenchmarkRow& best = out.table.rows[static_cast<std::size_t>(best_idx)];
  out.best = {best.m, best.k};
  return out;
}

BenchmarkSuite parse_suite(const std::string& name) {
  if (name == "synthetic") return BenchmarkSuite::synthetic;
  if (name == "circuit") return BenchmarkSuite::circuit;
  if (name == "csv") return BenchmarkSuite::csv;
  throw contract_error("unknown benchmark suite '" + name + "'");
}

int spectrahedral_order_for_dof(int dof) {
  // solve m(m+1)/2 == dof over the integers
  for (int m = 1; m * (m + 1) / 2 <= dof; ++m) {
    if (m * (m + 1) / 2 == dof) return m;
  }
  throw contract_error("dof level " + std::to_string(dof) +
                       " is not of the form m(m+1)/2 for integer m");
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec) {
  if (spec.dof_levels.empty()) throw contract_error("run_benchmark: no dof levels");
  std::vector<int> spectr_orders;
  spectr_orders.reserve(spec.dof_levels.size());
  for (int v : spec.dof_levels) spectr_orders.push_back(spectrahedral_order_for_dof(v));

  const std::uint64_t master = spec.config.seed;
  BenchmarkResult result;
  std::uint64_t cell = 0;
  auto next_seed = [&] { return mix_seed(master ^ mix_seed(++cell)); };

  auto run_pairings = [&](const Dataset& train, const Dataset& test,
                          const std::string& model_tag) {
    for (std::size_t li = 0; li < spec.dof_levels.size(); ++li) {
      const int v = spec.dof_levels[li];
      const int ms = spectr_orders[li];
      result.rows.push_back(fit_cell(train, test, model_tag, ms, ms, spec.config, next_seed()));
      result.rows.push_back(fit_cell(train, test, model_tag, v, 1, spec.config, next_seed()));
    }
  };

  switch (spec.suite) {
    case BenchmarkSuite::synthetic: {
      for (GenModel model : {GenModel::l2norm, GenModel::expmodel}) {
        GenSpec gen;
        gen.model = model;
        gen.n = spec.n;
        gen.sigma = spec.sigma;
        gen.seed = next_seed();
        const Dataset train = generate(gen);
        gen.sigma = 0.0;  // test points carry the true function values
        gen.seed = next_seed();
        const Dataset test = generate(gen);
        run_pairings(train, test, to_string(model));
      }
      break;
    }
    case BenchmarkSuite::circuit: {
      GenSpec gen;
      gen.model = GenModel::circuit;
      gen.n = spec.n;
      gen.sigma = 0.0;
      gen.seed = next_seed();
      const Dataset data = generate(gen);
      const auto [train, test] = split(data, spec.test_fraction, next_seed());
      run_pairings(train, test, "circuit");
      break;
    }
    case BenchmarkSuite::csv: {
      if (spec.csv_path.empty()) throw contract_error("csv suite: path required");
      const Dataset data =
          load_csv(spec.csv_path, spec.x_columns, spec.y_column, spec.transforms);
      const auto [train, test] = split(data, spec.test_fraction, next_seed());
      run_pairings(train, test, data.meta.source);
      break;
    }
  }
  return result;
}

}  // namespace specfit
