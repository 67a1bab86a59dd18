#include "specfit/altmin.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "specfit/errors.hpp"
#include "specfit/rng.hpp"

namespace specfit {

void validate_config(const FitConfig& cfg) {
  if (cfg.m < 1 || cfg.k < 1) throw contract_error("fit config: m and k must be positive");
  if (cfg.m % cfg.k != 0) {
    throw contract_error("fit config: k=" + std::to_string(cfg.k) + " must divide m=" +
                         std::to_string(cfg.m));
  }
  if (cfg.restarts < 1) throw contract_error("fit config: restarts must be >= 1");
  if (cfg.max_iters < 1) throw contract_error("fit config: max_iters must be >= 1");
  if (!(cfg.param_tol > 0.0) || !(cfg.objective_tol > 0.0)) {
    throw contract_error("fit config: tolerances must be positive");
  }
  if (cfg.ridge < 0.0) throw contract_error("fit config: ridge must be non-negative");
  if (!(cfg.init_scale > 0.0)) throw contract_error("fit config: init_scale must be positive");
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::param_tol: return "param_tol";
    case StopReason::objective_tol: return "objective_tol";
    case StopReason::max_iters: return "max_iters";
    case StopReason::cycle_detected: return "cycle_detected";
    case StopReason::error: return "error";
  }
  return "?";
}

std::vector<ActiveCertificate> assign_certificates(const Pencil& p, const Dataset& data) {
  if (data.dim() != p.input_dim()) {
    throw contract_error("assign_certificates: dataset dimension " + std::to_string(data.dim()) +
                         " != pencil dimension " + std::to_string(p.input_dim()));
  }
  std::vector<ActiveCertificate> certs;
  certs.reserve(static_cast<std::size_t>(data.n()));
  for (int i = 0; i < data.n(); ++i) {
    try {
      certs.push_back(top_eigenpair(assemble(p, data.x.row(i).transpose())));
    } catch (const numerical_error& e) {
      throw numerical_error("sample " + std::to_string(i) + ": " + e.what());
    }
  }
  return certs;
}

Pencil lls_update(const std::vector<ActiveCertificate>& certs, const Dataset& data,
                  const PencilShape& shape, bool homogeneous, double ridge) {
  const int n = data.n();
  if (n < 1) throw contract_error("lls_update: empty dataset");
  if (static_cast<int>(certs.size()) != n) {
    throw contract_error("lls_update: need one certificate per sample, got " +
                         std::to_string(certs.size()) + " for n=" + std::to_string(n));
  }
  if (shape.d != data.dim()) {
    throw contract_error("lls_update: shape.d != dataset dimension");
  }
  if (ridge < 0.0) throw contract_error("lls_update: ridge must be non-negative");
  const int m = shape.m;
  const int k = shape.k;
  const int p_per = vech_length(m, k);  // validates m, k
  const int bs = k * (k + 1) / 2;
  const int slots = shape.d + (homogeneous ? 0 : 1);
  const int p_total = slots * p_per;
  const double sqrt2 = std::sqrt(2.0);

  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n, p_total);
  Eigen::VectorXd w(bs);
  for (int i = 0; i < n; ++i) {
    const ActiveCertificate& c = certs[i];
    if (c.u.size() != m || c.block_index < 0 || c.block_index >= m / k) {
      throw contract_error("lls_update: certificate " + std::to_string(i) +
                           " does not match shape");
    }
    const auto ub = c.u.segment(c.block_index * k, k);
    int idx = 0;
    for (int r = 0; r < k; ++r) {
      for (int s = r; s < k; ++s) {
        w[idx++] = (r == s) ? ub[r] * ub[r] : sqrt2 * ub[r] * ub[s];
      }
    }
    for (int j = 0; j < slots; ++j) {
      const double xi = j < shape.d ? data.x(i, j) : 1.0;
      if (xi == 0.0) continue;
      design.block(i, j * p_per + c.block_index * bs, 1, bs) = xi * w.transpose();
    }
  }

  Eigen::VectorXd sol;
  if (ridge > 0.0) {
    Eigen::MatrixXd gram = design.transpose() * design / static_cast<double>(n);
    gram.diagonal().array() += ridge;
    sol = gram.ldlt().solve(design.transpose() * data.y / static_cast<double>(n));
  } else {
    // minimum-norm least squares; also the fallback for singular designs
    sol = design.completeOrthogonalDecomposition().solve(data.y);
  }

  std::vector<BlockSymMatrix> coeffs;
  coeffs.reserve(static_cast<std::size_t>(shape.d));
  for (int j = 0; j < shape.d; ++j) {
    coeffs.push_back(unvech_scaled(m, k, sol.segment(j * p_per, p_per)));
  }
  std::optional<BlockSymMatrix> offset;
  if (!homogeneous) offset = unvech_scaled(m, k, sol.segment(shape.d * p_per, p_per));
  return Pencil(std::move(coeffs), std::move(offset));
}

double train_mse(const Pencil& p, const Dataset& data) {
  double s = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    const double r = data.y[i] - eval(p, data.x.row(i).transpose());
    s += r * r;
  }
  return s / static_cast<double>(data.n());
}

namespace {

// FNV-1a over the exact bits of every certificate. Since the least-squares
// step is a deterministic function of (certificates, data), a repeated
// assignment implies the iteration has entered an exact cycle.
std::uint64_t hash_certificates(const std::vector<ActiveCertificate>& certs, int k) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (const ActiveCertificate& c : certs) {
    mix(static_cast<std::uint64_t>(c.block_index));
    for (int i = 0; i < k; ++i) {
      std::uint64_t bits;
      const double x = c.u[c.block_index * k + i];
      std::memcpy(&bits, &x, sizeof(bits));
      mix(bits);
    }
  }
  return h;
}

Pencil random_pencil(int d, const FitConfig& cfg, Rng& rng) {
  std::vector<BlockSymMatrix> coeffs;
  coeffs.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    coeffs.push_back(BlockSymMatrix::random_gaussian(cfg.m, cfg.k, cfg.init_scale, rng));
  }
  std::optional<BlockSymMatrix> offset;
  if (!cfg.homogeneous) {
    offset = BlockSymMatrix::random_gaussian(cfg.m, cfg.k, cfg.init_scale, rng);
  }
  return Pencil(std::move(coeffs), std::move(offset));
}

struct SingleRun {
  RestartTrace trace;
  Pencil best;
};

SingleRun run_single(const Dataset& data, const FitConfig& cfg, Pencil current,
                     const Pencil* reference) {
  SingleRun out;
  RestartTrace& tr = out.trace;
  const PencilShape shape{data.dim(), cfg.m, cfg.k};
  double best_mse = std::numeric_limits<double>::infinity();
  std::unordered_map<std::uint64_t, int> seen;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    std::vector<ActiveCertificate> certs = assign_certificates(current, data);
    const std::uint64_t h = hash_certificates(certs, cfg.k);
    const auto [it, inserted] = seen.try_emplace(h, t);
    if (!inserted) {
      if (it->second < t - 1) {
        // seen two or more iterations ago: genuine oscillation
        tr.stop_reason = StopReason::cycle_detected;
        break;
      }
      // identical to the previous assignment: a fixed point in the making;
      // let the parameter rule below report convergence
      it->second = t;
    }

    Pencil next = lls_update(certs, data, shape, cfg.homogeneous, cfg.ridge);
    const double mse = train_mse(next, data);
    if (!std::isfinite(mse)) {
      throw numerical_error("fit: non-finite training objective at iteration " +
                            std::to_string(t));
    }
    tr.mse_trajectory.push_back(mse);
    if (reference != nullptr) {
      tr.ref_distance.push_back(param_distance_mod_similarity(next, *reference));
    }
    tr.iters_used = t;
    if (mse < best_mse) {
      best_mse = mse;
      out.best = next;
    }

    const double rel_change =
        pencil_distance(next, current) / std::max(pencil_norm(current), 1e-300);
    current = std::move(next);
    if (rel_change < cfg.param_tol) {
      tr.stop_reason = StopReason::param_tol;
      break;
    }
    if (tr.mse_trajectory.size() >= 3) {
      // the true MSE is not monotone, so stall detection compares across a
      // window of 2 iterations and looks at the magnitude of the change
      const double window_ago = tr.mse_trajectory[tr.mse_trajectory.size() - 3];
      const double change = std::abs(window_ago - mse) / std::max(window_ago, 1e-300);
      if (change < cfg.objective_tol) {
        tr.stop_reason = StopReason::objective_tol;
        break;
      }
    }
    if (t == cfg.max_iters) tr.stop_reason = StopReason::max_iters;
  }
  tr.final_mse = best_mse;
  return out;
}

}  // namespace

FitReport fit(const Dataset& data, const FitConfig& cfg) {
  validate_config(cfg);
  validate_dataset(data);
  FitReport rep;
  rep.seed = cfg.seed;
  rep.best_train_mse = std::numeric_limits<double>::infinity();
  Rng master(cfg.seed);
  std::string last_error;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng = master.substream(static_cast<std::uint64_t>(r));
    try {
      SingleRun run = run_single(data, cfg, random_pencil(data.dim(), cfg, rng), nullptr);
      if (run.trace.final_mse < rep.best_train_mse) {
        rep.best_train_mse = run.trace.final_mse;
        rep.best_pencil = std::move(run.best);
        rep.best_restart = r;
      }
      rep.per_restart.push_back(std::move(run.trace));
    } catch (const std::exception& e) {
      RestartTrace tr;
      tr.stop_reason = StopReason::error;
      tr.error_message = e.what();
      tr.final_mse = std::numeric_limits<double>::infinity();
      rep.per_restart.push_back(std::move(tr));
      last_error = e.what();
    }
  }
  if (rep.best_restart < 0) {
    throw numerical_error("fit: all " + std::to_string(cfg.restarts) +
                          " restarts failed; last error: " + last_error);
  }
  return rep;
}

FitReport fit_with_init(const Dataset& data, const FitConfig& cfg, const Pencil& init,
                        const Pencil* reference) {
  validate_config(cfg);
  validate_dataset(data);
  if (init.input_dim() != data.dim() || init.order() != cfg.m || init.block_size() != cfg.k ||
      init.homogeneous() != cfg.homogeneous) {
    throw contract_error("fit_with_init: initialization does not match the configuration");
  }
  FitReport rep;
  rep.seed = cfg.seed;
  SingleRun run = run_single(data, cfg, init, reference);
  rep.best_train_mse = run.trace.final_mse;
  rep.best_pencil = std::move(run.best);
  rep.best_restart = 0;
  rep.per_restart.push_back(std::move(run.trace));
  return rep;
}

namespace {

double block_cost(const Pencil& a, const Pencil& b, int target, int source,
                  const Eigen::MatrixXd* rotation) {
  double s = 0.0;
  for (int i = 0; i < a.num_slots(); ++i) {
    const Eigen::MatrixXd& lhs = a.slot(i).block(target);
    const Eigen::MatrixXd& rhs = b.slot(i).block(source);
    const double d = rotation == nullptr
                         ? (lhs - rhs).norm()
                         : (lhs - (*rotation) * rhs * rotation->transpose()).norm();
    s += d * d;
  }
  return s;
}

}  // namespace

double param_distance_mod_similarity(const Pencil& a, const Pencil& b, int n_probes) {
  if (a.input_dim() != b.input_dim() || a.order() != b.order() ||
      a.block_size() != b.block_size() || a.homogeneous() != b.homogeneous()) {
    throw contract_error("param_distance_mod_similarity: shape mismatch");
  }
  if (n_probes < 1) throw contract_error("param_distance_mod_similarity: n_probes must be >= 1");
  const int k = a.block_size();
  const int nb = a.order() / k;

  // anchor matrices whose eigenbases supply alignment candidates
  std::vector<std::pair<const BlockSymMatrix*, const BlockSymMatrix*>> anchors;
  if (!a.homogeneous()) anchors.emplace_back(&a.offset(), &b.offset());
  anchors.emplace_back(&a.coeff(0), &b.coeff(0));

  const int n_signs = k <= 8 ? (1 << k) : 1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es1, es2;

  auto best_block_cost = [&](int target, int source) {
    double best = block_cost(a, b, target, source, nullptr);  // identity rotation
    if (k == 1) return best;
    for (const auto& [anchor_a, anchor_b] : anchors) {
      es1.compute(anchor_a->block(target));
      es2.compute(anchor_b->block(source));
      if (es1.info() != Eigen::Success || es2.info() != Eigen::Success) continue;
      const Eigen::MatrixXd& q1 = es1.eigenvectors();
      const Eigen::MatrixXd& q2 = es2.eigenvectors();
      for (int s = 0; s < n_signs; ++s) {
        Eigen::MatrixXd q1s = q1;
        for (int c = 0; c < k; ++c) {
          if ((s >> c) & 1) q1s.col(c) = -q1s.col(c);
        }
        const Eigen::MatrixXd rot = q1s * q2.transpose();
        best = std::min(best, block_cost(a, b, target, source, &rot));
      }
    }
    return best;
  };

  std::vector<int> perm(static_cast<std::size_t>(nb));
  std::iota(perm.begin(), perm.end(), 0);
  double best_total = std::numeric_limits<double>::infinity();
  int probes = 0;
  do {
    double total = 0.0;
    for (int t = 0; t < nb; ++t) {
      total += best_block_cost(t, perm[static_cast<std::size_t>(t)]);
    }
    best_total = std::min(best_total, total);
    ++probes;
  } while (probes < n_probes && std::next_permutation(perm.begin(), perm.end()));

  return std::sqrt(best_total);
}

}  // namespace specfit
