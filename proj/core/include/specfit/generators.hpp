#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "specfit/dataset.hpp"
#include "specfit/pencil.hpp"

namespace specfit {

enum class GenModel { l2norm, expmodel, circuit, custom_pencil };

GenModel parse_gen_model(const std::string& name);
std::string to_string(GenModel model);

/// Synthetic-data request. Model-specific fields beyond (n, sigma, seed):
/// exp_slope for expmodel, the voltage boxes for circuit, and a pencil for
/// custom_pencil.
struct GenSpec {
  GenModel model = GenModel::l2norm;
  int n = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  double exp_slope = 1.1394;
  std::array<double, 2> vdd_range{1.0, 2.0};
  std::array<double, 2> vth_range{0.2, 0.4};
  std::optional<Pencil> pencil;
};

/// Power dissipated at gate supply vdd and threshold voltage vth.
double circuit_power(double vdd, double vth);

/// Draws the requested dataset:
///   l2norm        x uniform on [-1,1]^2,      y = ||x||_2 + noise
///   expmodel      x standard normal scalar,   y = exp(exp_slope * x) + noise
///   circuit       (vdd, vth) uniform on the boxes, x = log(vdd, vth),
///                 y = log circuit_power (+ noise only when sigma > 0)
///   custom_pencil x standard normal in R^d,   y = eval(pencil, x) + noise
/// Noise is N(0, sigma^2). Deterministic given the spec.
Dataset generate(const GenSpec& spec);

}  // namespace specfit
