#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specfit/rng.hpp"

namespace specfit {

/// An m x m real symmetric matrix that is block diagonal with k x k blocks,
/// k dividing m. Block b occupies rows/columns [b*k, (b+1)*k). Immutable
/// after construction; construction symmetrizes each block exactly and
/// rejects non-finite entries.
class BlockSymMatrix {
 public:
  BlockSymMatrix() = default;  // empty (order 0) placeholder

  /// Zero matrix of the given shape.
  BlockSymMatrix(int m, int k);

  /// From explicit blocks (each k x k). Blocks are symmetrized as (B+B^T)/2.
  BlockSymMatrix(int m, int k, std::vector<Eigen::MatrixXd> blocks);

  /// i.i.d. normal(0, scale^2) entries per block, then symmetrized.
  static BlockSymMatrix random_gaussian(int m, int k, double scale, Rng& rng);

  int order() const noexcept { return m_; }
  int block_size() const noexcept { return k_; }
  int num_blocks() const noexcept { return k_ > 0 ? m_ / k_ : 0; }

  const Eigen::MatrixXd& block(int b) const { return blocks_[static_cast<std::size_t>(b)]; }
  const std::vector<Eigen::MatrixXd>& blocks() const noexcept { return blocks_; }

  /// Full-matrix entry; zero outside the block-diagonal pattern.
  double entry(int i, int j) const;

  Eigen::MatrixXd dense() const;

  double frobenius_norm() const;

  BlockSymMatrix& operator+=(const BlockSymMatrix& rhs);
  BlockSymMatrix& operator-=(const BlockSymMatrix& rhs);
  BlockSymMatrix& operator*=(double s);

  friend BlockSymMatrix operator+(BlockSymMatrix a, const BlockSymMatrix& b) { return a += b; }
  friend BlockSymMatrix operator-(BlockSymMatrix a, const BlockSymMatrix& b) { return a -= b; }
  friend BlockSymMatrix operator*(double s, BlockSymMatrix a) { return a *= s; }

 private:
  void check_same_shape(const BlockSymMatrix& rhs) const;

  int m_ = 0;
  int k_ = 0;
  std::vector<Eigen::MatrixXd> blocks_;
};

double frobenius_inner(const BlockSymMatrix& a, const BlockSymMatrix& b);

/// Length of the scaled half-vectorization: (m/k) * k*(k+1)/2.
int vech_length(int m, int k);

/// Isometric coordinates: per block, the upper triangle in row-major order,
/// diagonal entries as-is and off-diagonal entries scaled by sqrt(2), so that
/// <vech_scaled(M), vech_scaled(N)> equals the Frobenius inner product <M, N>.
Eigen::VectorXd vech_scaled(const BlockSymMatrix& m);

/// Inverse of vech_scaled.
BlockSymMatrix unvech_scaled(int m, int k, const Eigen::VectorXd& v);

/// Top eigenpair of a block-diagonal symmetric matrix. lambda is the maximum
/// over per-block top eigenvalues; u is a corresponding unit eigenvector
/// embedded in R^m (zero outside the winning block). Ties across blocks go to
/// the lowest block index; the first coordinate of u with magnitude > 1e-10
/// is made positive.
struct ActiveCertificate {
  double lambda = 0.0;
  Eigen::VectorXd u;
  int block_index = 0;
};

ActiveCertificate top_eigenpair(const BlockSymMatrix& m);

/// All m eigenvalues pooled across blocks, sorted descending.
Eigen::VectorXd all_eigenvalues_sorted(const BlockSymMatrix& m);

}  // namespace specfit
