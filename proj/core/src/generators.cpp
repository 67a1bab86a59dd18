#include "specfit/generators.hpp"

#include <cmath>

#include "specfit/errors.hpp"
#include "specfit/rng.hpp"

namespace specfit {

GenModel parse_gen_model(const std::string& name) {
  if (name == "l2norm") return GenModel::l2norm;
  if (name == "expmodel") return GenModel::expmodel;
  if (name == "circuit") return GenModel::circuit;
  if (name == "custom_pencil") return GenModel::custom_pencil;
  throw contract_error("unknown generator model '" + name + "'");
}

std::string to_string(GenModel model) {
  switch (model) {
    case GenModel::l2norm: return "l2norm";
    case GenModel::expmodel: return "expmodel";
    case GenModel::circuit: return "circuit";
    case GenModel::custom_pencil: return "custom_pencil";
  }
  return "?";
}

double circuit_power(double vdd, double vth) {
  return vdd * vdd + 30.0 * vdd * std::exp(-(vth - 0.06 * vdd) / 0.039);
}

Dataset generate(const GenSpec& spec) {
  if (spec.n < 1) throw contract_error("generate: n must be positive");
  if (spec.sigma < 0.0) throw contract_error("generate: sigma must be non-negative");
  Rng rng(spec.seed);
  Dataset out;
  out.meta.source = to_string(spec.model);
  out.meta.seed = spec.seed;
  out.meta.detail = "n=" + std::to_string(spec.n) + " sigma=" + std::to_string(spec.sigma);

  switch (spec.model) {
    case GenModel::l2norm: {
      out.x.resize(spec.n, 2);
      out.y.resize(spec.n);
      for (int i = 0; i < spec.n; ++i) {
        out.x(i, 0) = rng.uniform(-1.0, 1.0);
        out.x(i, 1) = rng.uniform(-1.0, 1.0);
        out.y[i] = out.x.row(i).norm();
        if (spec.sigma > 0.0) out.y[i] += rng.normal(0.0, spec.sigma);
      }
      break;
    }
    case GenModel::expmodel: {
      out.x.resize(spec.n, 1);
      out.y.resize(spec.n);
      for (int i = 0; i < spec.n; ++i) {
        out.x(i, 0) = rng.normal();
        out.y[i] = std::exp(spec.exp_slope * out.x(i, 0));
        if (spec.sigma > 0.0) out.y[i] += rng.normal(0.0, spec.sigma);
      }
      out.meta.detail += " b=" + std::to_string(spec.exp_slope);
      break;
    }
    case GenModel::circuit: {
      out.x.resize(spec.n, 2);
      out.y.resize(spec.n);
      for (int i = 0; i < spec.n; ++i) {
        const double vdd = rng.uniform(spec.vdd_range[0], spec.vdd_range[1]);
        const double vth = rng.uniform(spec.vth_range[0], spec.vth_range[1]);
        out.x(i, 0) = std::log(vdd);
        out.x(i, 1) = std::log(vth);
        out.y[i] = std::log(circuit_power(vdd, vth));
        if (spec.sigma > 0.0) out.y[i] += rng.normal(0.0, spec.sigma);
      }
      break;
    }
    case GenModel::custom_pencil: {
      if (!spec.pencil) throw contract_error("generate: custom_pencil requires a pencil");
      const int d = spec.pencil->input_dim();
      out.x.resize(spec.n, d);
      out.y.resize(spec.n);
      Eigen::VectorXd xi(d);
      for (int i = 0; i < spec.n; ++i) {
        for (int j = 0; j < d; ++j) xi[j] = rng.normal();
        out.x.row(i) = xi;
        out.y[i] = eval(*spec.pencil, xi);
        if (spec.sigma > 0.0) out.y[i] += rng.normal(0.0, spec.sigma);
      }
      break;
    }
  }
  validate_dataset(out);
  return out;
}

}  // namespace specfit
