// specfit: fit, evaluate, and benchmark spectrahedral regression models from
// the command line. Exit codes: 0 success, 2 usage error, 3 data error,
// 4 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specfit/specfit.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> split_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  for (const std::string& tok : split_list(text)) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw specfit::contract_error(std::string(what) + ": bad integer '" + tok + "'");
    }
  }
  return out;
}

std::vector<double> split_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const std::string& tok : split_list(text)) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw specfit::contract_error(std::string(what) + ": bad number '" + tok + "'");
    }
  }
  return out;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct SynthOpts {
  std::string model = "l2norm";
  int n = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  double exp_slope = 1.1394;
  std::string pencil_path;
};

void cmd_synth(const SynthOpts& o) {
  specfit::GenSpec spec;
  spec.model = specfit::parse_gen_model(o.model);
  spec.n = o.n;
  spec.sigma = o.sigma;
  spec.seed = o.seed;
  spec.exp_slope = o.exp_slope;
  if (spec.model == specfit::GenModel::custom_pencil) {
    if (o.pencil_path.empty()) {
      throw specfit::contract_error("synth: --pencil MODEL.json required for custom_pencil");
    }
    spec.pencil = specfit::load_model(o.pencil_path).pencil;
  }
  const specfit::Dataset data = specfit::generate(spec);
  specfit::write_dataset_csv(data, o.out);
  std::cout << data.n() << " rows -> " << o.out << "\n";
}

struct FitOpts {
  std::string data;
  std::string x_cols;
  std::string y_col;
  int m = 0;
  int k = 1;
  int restarts = 50;
  int max_iters = 200;
  std::uint64_t seed = 0;
  bool homogeneous = false;
  double ridge = 0.0;
  double init_scale = 1.0;
  std::string transforms;
  std::string out_model;
};

specfit::Dataset load_fit_dataset(const std::string& path, const std::string& x_cols,
                                  const std::string& y_col, const std::string& transforms) {
  std::vector<std::string> xs = split_list(x_cols);
  std::string y = y_col;
  if (xs.empty() || y.empty()) {
    const std::vector<std::string> header = specfit::csv_header(path);
    if (header.size() < 2) {
      throw specfit::data_error("dataset needs at least one x column and a y column");
    }
    if (y.empty()) y = header.back();
    if (xs.empty()) {
      for (const auto& name : header) {
        if (name != y) xs.push_back(name);
      }
    }
  }
  return specfit::load_csv(path, xs, y, specfit::parse_transforms(transforms));
}

void cmd_fit(const FitOpts& o) {
  const specfit::Dataset data = load_fit_dataset(o.data, o.x_cols, o.y_col, o.transforms);
  specfit::FitConfig cfg;
  cfg.m = o.m;
  cfg.k = o.k;
  cfg.restarts = o.restarts;
  cfg.max_iters = o.max_iters;
  cfg.seed = o.seed;
  cfg.homogeneous = o.homogeneous;
  cfg.ridge = o.ridge;
  cfg.init_scale = o.init_scale;
  const specfit::FitReport rep = specfit::fit(data, cfg);
  const double train = specfit::rmse(rep.best_pencil, data);

  if (!o.out_model.empty()) {
    specfit::ModelMeta meta;
    meta.created_by = std::string("specfit ") + kVersion;
    meta.seed = o.seed;
    meta.train_rmse = train;
    meta.dataset = o.data;
    specfit::save_model(o.out_model, rep.best_pencil, meta);
  }

  nlohmann::json restarts = nlohmann::json::array();
  for (std::size_t r = 0; r < rep.per_restart.size(); ++r) {
    const specfit::RestartTrace& tr = rep.per_restart[r];
    restarts.push_back({{"restart", r},
                        {"iters", tr.iters_used},
                        {"final_mse", tr.final_mse},
                        {"stop_reason", specfit::to_string(tr.stop_reason)}});
  }
  const nlohmann::json report = {
      {"train_rmse", train},
      {"restarts_summary",
       {{"count", rep.per_restart.size()},
        {"best_restart", rep.best_restart},
        {"best_train_mse", rep.best_train_mse},
        {"restarts", restarts}}}};
  std::cout << report.dump(2) << "\n";
}

// Feature columns of a data file for a d-dimensional model: all columns when
// the file has exactly d, the first d when it has d+1 (trailing response).
std::vector<std::string> feature_columns(const std::string& path, int d) {
  const std::vector<std::string> header = specfit::csv_header(path);
  if (static_cast<int>(header.size()) == d) return header;
  if (static_cast<int>(header.size()) == d + 1) {
    return std::vector<std::string>(header.begin(), header.end() - 1);
  }
  throw specfit::data_error("model expects d=" + std::to_string(d) +
                            " feature columns; data file has " +
                            std::to_string(header.size()) + " columns");
}

struct PredictOpts {
  std::string model;
  std::string data;
  std::string out;
};

void cmd_predict(const PredictOpts& o) {
  const specfit::Pencil pencil = specfit::load_model(o.model).pencil;
  const std::vector<std::string> header = specfit::csv_header(o.data);
  feature_columns(o.data, pencil.input_dim());  // shape check, names both dimensions
  const Eigen::MatrixXd all = specfit::load_csv_columns(o.data, header);

  std::ofstream out(o.out);
  if (!out) throw specfit::data_error("cannot open for writing: " + o.out);
  for (const auto& name : header) out << name << ",";
  out << "yhat\n";
  for (int i = 0; i < all.rows(); ++i) {
    const Eigen::VectorXd x = all.row(i).head(pencil.input_dim()).transpose();
    for (int j = 0; j < all.cols(); ++j) out << fmt17(all(i, j)) << ",";
    out << fmt17(specfit::eval(pencil, x)) << "\n";
  }
  if (!out) throw specfit::data_error("write failed: " + o.out);
  std::cout << all.rows() << " predictions -> " << o.out << "\n";
}

struct EvalOpts {
  std::string model;
  std::string data;
};

void cmd_eval(const EvalOpts& o) {
  const specfit::Pencil pencil = specfit::load_model(o.model).pencil;
  const int d = pencil.input_dim();
  const std::vector<std::string> header = specfit::csv_header(o.data);
  if (static_cast<int>(header.size()) != d + 1) {
    throw specfit::data_error("model expects d=" + std::to_string(d) +
                              " features plus a response; data file has " +
                              std::to_string(header.size()) + " columns");
  }
  specfit::Dataset data = specfit::load_csv(
      o.data, std::vector<std::string>(header.begin(), header.end() - 1), header.back());
  const double mse = specfit::train_mse(pencil, data);
  const nlohmann::json report = {
      {"n", data.n()}, {"rmse", std::sqrt(mse)}, {"mse", mse}};
  std::cout << report.dump(2) << "\n";
}

struct GridOpts {
  std::string model;
  std::string mins;
  std::string maxs;
  std::string steps;
  std::string out;
};

void cmd_grid(const GridOpts& o) {
  const specfit::Pencil pencil = specfit::load_model(o.model).pencil;
  const int d = pencil.input_dim();
  if (d > 3) {
    throw specfit::contract_error(
        "grid: only d <= 3 is supported; fix the remaining inputs and evaluate a "
        "lower-dimensional slice model instead");
  }
  auto broadcast = [&](std::vector<double> v, const char* what) {
    if (v.size() == 1) v.assign(static_cast<std::size_t>(d), v[0]);
    if (static_cast<int>(v.size()) != d) {
      throw specfit::contract_error(std::string(what) + ": expected " + std::to_string(d) +
                                    " values");
    }
    return v;
  };
  const std::vector<double> mins = broadcast(split_double_list(o.mins, "--mins"), "--mins");
  const std::vector<double> maxs = broadcast(split_double_list(o.maxs, "--maxs"), "--maxs");
  std::vector<int> steps = split_int_list(o.steps, "--steps");
  if (steps.size() == 1) steps.assign(static_cast<std::size_t>(d), steps[0]);
  if (static_cast<int>(steps.size()) != d) {
    throw specfit::contract_error("--steps: expected " + std::to_string(d) + " values");
  }
  long total = 1;
  for (int j = 0; j < d; ++j) {
    if (steps[static_cast<std::size_t>(j)] < 2) {
      throw specfit::contract_error("grid: steps must be >= 2 per axis");
    }
    if (!(mins[static_cast<std::size_t>(j)] < maxs[static_cast<std::size_t>(j)])) {
      throw specfit::contract_error("grid: mins must be < maxs per axis");
    }
    total *= steps[static_cast<std::size_t>(j)];
  }

  std::ofstream out(o.out);
  if (!out) throw specfit::data_error("cannot open for writing: " + o.out);
  for (int j = 0; j < d; ++j) out << "x" << (j + 1) << ",";
  out << "value\n";
  Eigen::VectorXd x(d);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int j = d - 1; j >= 0; --j) {  // row-major: last axis fastest
      const int s = steps[static_cast<std::size_t>(j)];
      const int t = static_cast<int>(rem % s);
      rem /= s;
      x[j] = mins[static_cast<std::size_t>(j)] +
             (maxs[static_cast<std::size_t>(j)] - mins[static_cast<std::size_t>(j)]) *
                 static_cast<double>(t) / static_cast<double>(s - 1);
    }
    for (int j = 0; j < d; ++j) out << fmt17(x[j]) << ",";
    out << fmt17(specfit::eval(pencil, x)) << "\n";
  }
  if (!out) throw specfit::data_error("write failed: " + o.out);
  std::cout << total << " grid points -> " << o.out << "\n";
}

struct BenchOpts {
  std::string suite = "synthetic";
  std::string dof_levels = "3,6,10";
  int restarts = 50;
  int max_iters = 200;
  std::uint64_t seed = 0;
  std::string out;
  int n = 200;
  double sigma = 0.1;
  double test_fraction = 0.2;
  std::string data;
  std::string x_cols;
  std::string y_col;
  std::string transforms;
};

void cmd_benchmark(const BenchOpts& o) {
  specfit::BenchmarkSpec spec;
  spec.suite = specfit::parse_suite(o.suite);
  spec.dof_levels = split_int_list(o.dof_levels, "--dof-levels");
  spec.config.restarts = o.restarts;
  spec.config.max_iters = o.max_iters;
  spec.config.seed = o.seed;
  spec.config.m = 1;  // per-cell values are set by the harness
  spec.config.k = 1;
  spec.n = o.n;
  spec.sigma = o.sigma;
  spec.test_fraction = o.test_fraction;
  if (spec.suite == specfit::BenchmarkSuite::csv) {
    if (o.data.empty() || o.y_col.empty()) {
      throw specfit::contract_error("benchmark: csv suite requires --data and --y-col");
    }
    spec.csv_path = o.data;
    spec.x_columns = split_list(o.x_cols);
    if (spec.x_columns.empty()) {
      for (const auto& name : specfit::csv_header(o.data)) {
        if (name != o.y_col) spec.x_columns.push_back(name);
      }
    }
    spec.y_column = o.y_col;
    spec.transforms = specfit::parse_transforms(o.transforms);
  }
  const specfit::BenchmarkResult result = specfit::run_benchmark(spec);

  const std::string csv_path = o.out + ".csv";
  const std::string json_path = o.out + ".json";
  {
    std::ofstream out(csv_path);
    if (!out) throw specfit::data_error("cannot open for writing: " + csv_path);
    out << specfit::benchmark_to_csv(result);
  }
  {
    std::ofstream out(json_path);
    if (!out) throw specfit::data_error("cannot open for writing: " + json_path);
    out << specfit::benchmark_to_json(result) << "\n";
  }
  std::cout << result.rows.size() << " cells -> " << csv_path << ", " << json_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectrahedral and max-affine convex regression toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SynthOpts synth;
  CLI::App* s = app.add_subcommand("synth", "generate a synthetic dataset CSV");
  s->add_option("--model", synth.model, "l2norm | expmodel | circuit | custom_pencil");
  s->add_option("--n", synth.n, "sample count")->required();
  s->add_option("--sigma", synth.sigma, "noise std dev");
  s->add_option("--seed", synth.seed, "RNG seed");
  s->add_option("--out", synth.out, "output CSV path")->required();
  s->add_option("--b", synth.exp_slope, "slope for expmodel");
  s->add_option("--pencil", synth.pencil_path, "model file for custom_pencil");
  s->callback([&] { cmd_synth(synth); });

  FitOpts fit;
  CLI::App* f = app.add_subcommand("fit", "fit an (m,k)-spectrahedral model");
  f->add_option("--data", fit.data, "training CSV")->required();
  f->add_option("--x-cols", fit.x_cols, "comma-separated covariate columns");
  f->add_option("--y-col", fit.y_col, "response column");
  f->add_option("--m", fit.m, "matrix order")->required();
  f->add_option("--k", fit.k, "block size (k divides m; 1 = max-affine)");
  f->add_option("--restarts", fit.restarts, "random restarts");
  f->add_option("--max-iters", fit.max_iters, "iteration cap per restart");
  f->add_option("--seed", fit.seed, "RNG seed");
  f->add_flag("--homogeneous", fit.homogeneous, "drop the offset (support-function mode)");
  f->add_option("--ridge", fit.ridge, "Tikhonov weight for the least-squares step");
  f->add_option("--init-scale", fit.init_scale, "std dev of random initial entries");
  f->add_option("--transforms", fit.transforms, "e.g. 'educ=expbase:1.2,wage=log'");
  f->add_option("--out-model", fit.out_model, "output model JSON path");
  f->callback([&] { cmd_fit(fit); });

  PredictOpts predict;
  CLI::App* p = app.add_subcommand("predict", "append a yhat column to a CSV");
  p->add_option("--model", predict.model, "model JSON")->required();
  p->add_option("--data", predict.data, "input CSV")->required();
  p->add_option("--out", predict.out, "output CSV path")->required();
  p->callback([&] { cmd_predict(predict); });

  EvalOpts evalo;
  CLI::App* e = app.add_subcommand("eval", "RMSE of a model on a dataset");
  e->add_option("--model", evalo.model, "model JSON")->required();
  e->add_option("--data", evalo.data, "CSV with features plus trailing response")->required();
  e->callback([&] { cmd_eval(evalo); });

  GridOpts grid;
  CLI::App* g = app.add_subcommand("grid", "evaluate a model on a box lattice");
  g->add_option("--model", grid.model, "model JSON")->required();
  g->add_option("--mins", grid.mins, "per-axis lower bounds")->required();
  g->add_option("--maxs", grid.maxs, "per-axis upper bounds")->required();
  g->add_option("--steps", grid.steps, "per-axis point counts (>= 2)")->required();
  g->add_option("--out", grid.out, "output CSV path")->required();
  g->callback([&] { cmd_grid(grid); });

  BenchOpts bench;
  CLI::App* b = app.add_subcommand("benchmark", "spectrahedral vs polyhedral RMSE tables");
  b->add_option("--suite", bench.suite, "synthetic | circuit | csv");
  b->add_option("--dof-levels", bench.dof_levels, "comma list, each of the form m(m+1)/2");
  b->add_option("--restarts", bench.restarts, "random restarts per cell");
  b->add_option("--max-iters", bench.max_iters, "iteration cap per restart");
  b->add_option("--seed", bench.seed, "RNG seed");
  b->add_option("--out", bench.out, "output path prefix (.csv/.json appended)")->required();
  b->add_option("--n", bench.n, "samples per synthetic dataset");
  b->add_option("--sigma", bench.sigma, "train noise for the synthetic suite");
  b->add_option("--test-fraction", bench.test_fraction, "hold-out fraction");
  b->add_option("--data", bench.data, "CSV path (csv suite)");
  b->add_option("--x-cols", bench.x_cols, "covariate columns (csv suite)");
  b->add_option("--y-col", bench.y_col, "response column (csv suite)");
  b->add_option("--transforms", bench.transforms, "column transforms (csv suite)");
  b->callback([&] { cmd_benchmark(bench); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  } catch (const specfit::contract_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const specfit::data_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  } catch (const specfit::numerical_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 4;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
