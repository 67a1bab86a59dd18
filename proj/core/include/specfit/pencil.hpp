#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "specfit/block_sym_matrix.hpp"

namespace specfit {

/// Parameters of a spectrahedral function f(x) = lambda_max(sum_i x_i A_i + B):
/// d coefficient matrices plus an optional offset. The offset is absent exactly
/// in homogeneous (support-function) mode. Immutable after construction.
class Pencil {
 public:
  Pencil() = default;  // empty placeholder (input_dim 0)

  Pencil(std::vector<BlockSymMatrix> coeffs, std::optional<BlockSymMatrix> offset);

  int input_dim() const noexcept { return static_cast<int>(coeffs_.size()); }
  int order() const noexcept { return coeffs_.empty() ? 0 : coeffs_[0].order(); }
  int block_size() const noexcept { return coeffs_.empty() ? 0 : coeffs_[0].block_size(); }
  bool homogeneous() const noexcept { return !offset_.has_value(); }

  const BlockSymMatrix& coeff(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  const std::vector<BlockSymMatrix>& coeffs() const noexcept { return coeffs_; }
  const BlockSymMatrix& offset() const;

  /// Number of parameter slots: d, plus one for the offset when present.
  int num_slots() const noexcept { return input_dim() + (homogeneous() ? 0 : 1); }
  /// Slot accessor: slots 0..d-1 are the coefficients, slot d the offset.
  const BlockSymMatrix& slot(int i) const;

 private:
  std::vector<BlockSymMatrix> coeffs_;
  std::optional<BlockSymMatrix> offset_;
};

/// sum_i x_i A_i + B (offset omitted in homogeneous mode).
BlockSymMatrix assemble(const Pencil& p, const Eigen::VectorXd& x);

/// lambda_max(assemble(p, x)); convex in x by construction.
double eval(const Pencil& p, const Eigen::VectorXd& x);

/// Sampled estimate of the spectral-gap constant: the minimum over n_dirs
/// uniform unit directions u of lambda_1 - lambda_2 of the homogeneous part
/// sum_i u_i A_i (the offset, if any, is ignored). A diagnostic lower-bound
/// probe, not a certified infimum.
double eigengap_inf(const Pencil& p, int n_dirs, std::uint64_t seed);

/// Conjugates every matrix of the pencil by the orthogonal matrix o, which
/// must preserve the block structure: viewed as a grid of k x k sub-blocks, o
/// must have exactly one orthogonal sub-block per block row/column (a block
/// permutation composed with per-block rotations; block-diagonal o is the
/// common case). Leaves eval unchanged at every x.
Pencil apply_similarity(const Pencil& p, const Eigen::MatrixXd& o);

/// sqrt of the summed squared Frobenius distances over all slots.
double pencil_distance(const Pencil& a, const Pencil& b);

/// sqrt of the summed squared Frobenius norms over all slots.
double pencil_norm(const Pencil& p);

}  // namespace specfit
