#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specfit/dataset.hpp"
#include "specfit/pencil.hpp"

namespace specfit {

struct FitConfig {
  int m = 0;                    // model order (required)
  int k = 0;                    // block size (required, k | m)
  int restarts = 50;
  int max_iters = 200;
  double param_tol = 1e-8;      // relative Frobenius change of the parameter tuple
  double objective_tol = 1e-10; // relative train-MSE improvement over a 2-iteration window
  double ridge = 0.0;           // Tikhonov weight on the least-squares step
  double init_scale = 1.0;      // std dev of random initial entries
  std::uint64_t seed = 0;
  bool homogeneous = false;     // drop the offset matrix (support-function mode)
};

void validate_config(const FitConfig& cfg);

enum class StopReason { param_tol, objective_tol, max_iters, cycle_detected, error };

std::string to_string(StopReason r);

struct RestartTrace {
  int iters_used = 0;
  std::vector<double> mse_trajectory;   // train MSE after each iteration
  std::vector<double> ref_distance;     // distance-mod-similarity to the reference, if given
  double final_mse = 0.0;               // best train MSE seen during the run
  StopReason stop_reason = StopReason::max_iters;
  std::string error_message;
};

struct FitReport {
  Pencil best_pencil;
  double best_train_mse = 0.0;
  int best_restart = -1;
  std::vector<RestartTrace> per_restart;
  std::uint64_t seed = 0;
};

/// Step 1 of the alternation: the top eigenpair of the assembled pencil at
/// every sample. Certificate i satisfies <u u^T, assemble(p, x_i)> = eval(p, x_i).
std::vector<ActiveCertificate> assign_certificates(const Pencil& p, const Dataset& data);

struct PencilShape {
  int d = 0;
  int m = 0;
  int k = 0;
};

/// Step 2: with certificates frozen, the minimizer over block-symmetric
/// parameters of (1/n) sum_i (y_i - <U_i, A[xi_i]>)^2 + ridge * ||A||_F^2,
/// where xi_i = (x_i, 1), or xi_i = x_i with the offset slot dropped in
/// homogeneous mode. With ridge = 0 a rank-deficient design yields the
/// minimum-Frobenius-norm minimizer.
Pencil lls_update(const std::vector<ActiveCertificate>& certs, const Dataset& data,
                  const PencilShape& shape, bool homogeneous, double ridge);

/// Mean squared residual of eval(p, .) on the dataset.
double train_mse(const Pencil& p, const Dataset& data);

/// Multi-restart alternating minimization. Each restart draws an i.i.d.
/// normal(0, init_scale^2) symmetrized initialization from its own seed
/// stream and alternates assign_certificates / lls_update until a stopping
/// rule fires. The reported pencil is the best iterate (by train MSE) of the
/// best restart; a restart that throws is recorded and skipped, and fit fails
/// only if every restart fails.
FitReport fit(const Dataset& data, const FitConfig& cfg);

/// Single run (no restarts) from the given initialization. When reference is
/// non-null the per-iteration parameter distance (modulo similarity) to it is
/// recorded in the trace.
FitReport fit_with_init(const Dataset& data, const FitConfig& cfg, const Pencil& init,
                        const Pencil* reference = nullptr);

/// Heuristic upper bound on the Frobenius distance between parameter tuples
/// modulo orthogonal similarity: the minimum over a probe set of structure-
/// preserving conjugations (identity, block permutations, and per-block
/// eigenbasis alignments computed from the offset or the first coefficient,
/// with sign enumeration). Not the exact minimum over the orthogonal group.
double param_distance_mod_similarity(const Pencil& a, const Pencil& b, int n_probes = 24);

}  // namespace specfit
