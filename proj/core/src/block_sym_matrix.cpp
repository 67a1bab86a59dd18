#include "specfit/block_sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specfit/errors.hpp"

namespace specfit {

namespace {

void check_shape_args(int m, int k) {
  if (m < 1 || k < 1) {
    throw contract_error("BlockSymMatrix: order and block size must be positive, got m=" +
                         std::to_string(m) + " k=" + std::to_string(k));
  }
  if (m % k != 0) {
    throw contract_error("BlockSymMatrix: block size k=" + std::to_string(k) +
                         " must divide order m=" + std::to_string(m));
  }
}

}  // namespace

BlockSymMatrix::BlockSymMatrix(int m, int k) : m_(m), k_(k) {
  check_shape_args(m, k);
  blocks_.assign(static_cast<std::size_t>(m / k), Eigen::MatrixXd::Zero(k, k));
}

BlockSymMatrix::BlockSymMatrix(int m, int k, std::vector<Eigen::MatrixXd> blocks)
    : m_(m), k_(k), blocks_(std::move(blocks)) {
  check_shape_args(m, k);
  if (static_cast<int>(blocks_.size()) != m / k) {
    throw contract_error("BlockSymMatrix: expected " + std::to_string(m / k) + " blocks, got " +
                         std::to_string(blocks_.size()));
  }
  for (auto& b : blocks_) {
    if (b.rows() != k || b.cols() != k) {
      throw contract_error("BlockSymMatrix: every block must be " + std::to_string(k) + "x" +
                           std::to_string(k));
    }
    b = ((b + b.transpose()) * 0.5).eval();
    if (!b.allFinite()) {
      throw contract_error("BlockSymMatrix: non-finite entry");
    }
  }
}

BlockSymMatrix BlockSymMatrix::random_gaussian(int m, int k, double scale, Rng& rng) {
  check_shape_args(m, k);
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(static_cast<std::size_t>(m / k));
  for (int b = 0; b < m / k; ++b) {
    Eigen::MatrixXd g(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        g(i, j) = rng.normal(0.0, scale);
      }
    }
    blocks.push_back(std::move(g));
  }
  return BlockSymMatrix(m, k, std::move(blocks));
}

double BlockSymMatrix::entry(int i, int j) const {
  if (i < 0 || j < 0 || i >= m_ || j >= m_) {
    throw contract_error("BlockSymMatrix::entry: index out of range");
  }
  if (i / k_ != j / k_) return 0.0;
  return blocks_[static_cast<std::size_t>(i / k_)](i % k_, j % k_);
}

Eigen::MatrixXd BlockSymMatrix::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m_, m_);
  for (int b = 0; b < num_blocks(); ++b) {
    out.block(b * k_, b * k_, k_, k_) = blocks_[static_cast<std::size_t>(b)];
  }
  return out;
}

double BlockSymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b.squaredNorm();
  return std::sqrt(s);
}

void BlockSymMatrix::check_same_shape(const BlockSymMatrix& rhs) const {
  if (m_ != rhs.m_ || k_ != rhs.k_) {
    throw contract_error("BlockSymMatrix: shape mismatch (" + std::to_string(m_) + "," +
                         std::to_string(k_) + ") vs (" + std::to_string(rhs.m_) + "," +
                         std::to_string(rhs.k_) + ")");
  }
}

BlockSymMatrix& BlockSymMatrix::operator+=(const BlockSymMatrix& rhs) {
  check_same_shape(rhs);
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] += rhs.blocks_[b];
  return *this;
}

BlockSymMatrix& BlockSymMatrix::operator-=(const BlockSymMatrix& rhs) {
  check_same_shape(rhs);
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] -= rhs.blocks_[b];
  return *this;
}

BlockSymMatrix& BlockSymMatrix::operator*=(double s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

double frobenius_inner(const BlockSymMatrix& a, const BlockSymMatrix& b) {
  if (a.order() != b.order() || a.block_size() != b.block_size()) {
    throw contract_error("frobenius_inner: shape mismatch");
  }
  double s = 0.0;
  for (int i = 0; i < a.num_blocks(); ++i) {
    s += a.block(i).cwiseProduct(b.block(i)).sum();
  }
  return s;
}

int vech_length(int m, int k) {
  check_shape_args(m, k);
  return (m / k) * (k * (k + 1)) / 2;
}

Eigen::VectorXd vech_scaled(const BlockSymMatrix& m) {
  const int k = m.block_size();
  const double sqrt2 = std::sqrt(2.0);
  Eigen::VectorXd out(vech_length(m.order(), k));
  int idx = 0;
  for (int b = 0; b < m.num_blocks(); ++b) {
    const Eigen::MatrixXd& blk = m.block(b);
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        out[idx++] = (i == j) ? blk(i, j) : sqrt2 * blk(i, j);
      }
    }
  }
  return out;
}

BlockSymMatrix unvech_scaled(int m, int k, const Eigen::VectorXd& v) {
  if (v.size() != vech_length(m, k)) {
    throw contract_error("unvech_scaled: expected length " + std::to_string(vech_length(m, k)) +
                         ", got " + std::to_string(v.size()));
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(static_cast<std::size_t>(m / k));
  int idx = 0;
  for (int b = 0; b < m / k; ++b) {
    Eigen::MatrixXd blk(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        const double x = v[idx++];
        blk(i, j) = (i == j) ? x : inv_sqrt2 * x;
        blk(j, i) = blk(i, j);
      }
    }
    blocks.push_back(std::move(blk));
  }
  return BlockSymMatrix(m, k, std::move(blocks));
}

namespace {

// Deterministic eigenvector choice when the top eigenvalue of a block is
// (numerically) repeated: project the standard basis vectors onto the top
// eigenspace and take the first projection of non-negligible norm.
Eigen::VectorXd canonical_top_vector(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es,
                                     int k) {
  const Eigen::VectorXd& evals = es.eigenvalues();
  const double top = evals[k - 1];
  const double tol = 1e-12 * std::max(1.0, std::abs(top));
  int first = k - 1;
  while (first > 0 && top - evals[first - 1] <= tol) --first;
  if (first == k - 1) return es.eigenvectors().col(k - 1);
  const auto basis = es.eigenvectors().rightCols(k - first);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd proj = basis * (basis.transpose() * Eigen::VectorXd::Unit(k, i));
    const double nrm = proj.norm();
    if (nrm > 1e-8) return proj / nrm;
  }
  return es.eigenvectors().col(k - 1);  // unreachable for an orthonormal basis
}

}  // namespace

ActiveCertificate top_eigenpair(const BlockSymMatrix& m) {
  if (m.order() == 0) throw contract_error("top_eigenpair: empty matrix");
  const int k = m.block_size();
  int best_block = -1;
  double best_lambda = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_vec;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (int b = 0; b < m.num_blocks(); ++b) {
    double lambda;
    Eigen::VectorXd vec;
    if (k == 1) {
      lambda = m.block(b)(0, 0);
      vec = Eigen::VectorXd::Ones(1);
    } else {
      es.compute(m.block(b));
      if (es.info() != Eigen::Success) {
        throw numerical_error("top_eigenpair: eigensolver failed on block " + std::to_string(b));
      }
      lambda = es.eigenvalues()[k - 1];
      vec = canonical_top_vector(es, k);
    }
    if (lambda > best_lambda) {
      best_lambda = lambda;
      best_block = b;
      best_vec = std::move(vec);
    }
  }
  ActiveCertificate cert;
  cert.lambda = best_lambda;
  cert.block_index = best_block;
  cert.u = Eigen::VectorXd::Zero(m.order());
  cert.u.segment(best_block * k, k) = best_vec;
  for (int i = 0; i < m.order(); ++i) {
    if (std::abs(cert.u[i]) > 1e-10) {
      if (cert.u[i] < 0) cert.u = -cert.u;
      break;
    }
  }
  return cert;
}

Eigen::VectorXd all_eigenvalues_sorted(const BlockSymMatrix& m) {
  const int k = m.block_size();
  Eigen::VectorXd out(m.order());
  int idx = 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (int b = 0; b < m.num_blocks(); ++b) {
    if (k == 1) {
      out[idx++] = m.block(b)(0, 0);
    } else {
      es.compute(m.block(b), Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success) {
        throw numerical_error("all_eigenvalues_sorted: eigensolver failed on block " +
                              std::to_string(b));
      }
      for (int i = 0; i < k; ++i) out[idx++] = es.eigenvalues()[i];
    }
  }
  std::sort(out.data(), out.data() + out.size(), std::greater<double>());
  return out;
}

}  // namespace specfit
