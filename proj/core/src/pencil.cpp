#include "specfit/pencil.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "specfit/errors.hpp"
#include "specfit/rng.hpp"

namespace specfit {

Pencil::Pencil(std::vector<BlockSymMatrix> coeffs, std::optional<BlockSymMatrix> offset)
    : coeffs_(std::move(coeffs)), offset_(std::move(offset)) {
  if (coeffs_.empty()) {
    throw contract_error("Pencil: at least one coefficient matrix required");
  }
  const int m = coeffs_[0].order();
  const int k = coeffs_[0].block_size();
  for (const auto& a : coeffs_) {
    if (a.order() != m || a.block_size() != k) {
      throw contract_error("Pencil: all coefficient matrices must share (m, k)");
    }
  }
  if (offset_ && (offset_->order() != m || offset_->block_size() != k)) {
    throw contract_error("Pencil: offset matrix must share (m, k) with the coefficients");
  }
}

const BlockSymMatrix& Pencil::offset() const {
  if (!offset_) throw contract_error("Pencil: homogeneous pencil has no offset matrix");
  return *offset_;
}

const BlockSymMatrix& Pencil::slot(int i) const {
  if (i < 0 || i >= num_slots()) throw contract_error("Pencil::slot: index out of range");
  return i < input_dim() ? coeffs_[static_cast<std::size_t>(i)] : *offset_;
}

BlockSymMatrix assemble(const Pencil& p, const Eigen::VectorXd& x) {
  if (x.size() != p.input_dim()) {
    throw contract_error("assemble: input has dimension " + std::to_string(x.size()) +
                         ", pencil expects " + std::to_string(p.input_dim()));
  }
  if (!x.allFinite()) throw contract_error("assemble: non-finite input entry");
  const int m = p.order();
  const int k = p.block_size();
  std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(m / k),
                                      Eigen::MatrixXd::Zero(k, k));
  for (int i = 0; i < p.input_dim(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (int b = 0; b < m / k; ++b) {
      blocks[static_cast<std::size_t>(b)].noalias() += xi * p.coeff(i).block(b);
    }
  }
  if (!p.homogeneous()) {
    for (int b = 0; b < m / k; ++b) {
      blocks[static_cast<std::size_t>(b)] += p.offset().block(b);
    }
  }
  return BlockSymMatrix(m, k, std::move(blocks));
}

double eval(const Pencil& p, const Eigen::VectorXd& x) {
  const BlockSymMatrix m = assemble(p, x);
  const int k = m.block_size();
  double best = -std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (int b = 0; b < m.num_blocks(); ++b) {
    double lambda;
    if (k == 1) {
      lambda = m.block(b)(0, 0);
    } else {
      es.compute(m.block(b), Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success) {
        throw numerical_error("eval: eigensolver failed on block " + std::to_string(b));
      }
      lambda = es.eigenvalues()[k - 1];
    }
    best = std::max(best, lambda);
  }
  return best;
}

double eigengap_inf(const Pencil& p, int n_dirs, std::uint64_t seed) {
  if (p.order() < 2) {
    throw contract_error("eigengap_inf: gap undefined for order m = " +
                         std::to_string(p.order()));
  }
  if (n_dirs < 1) throw contract_error("eigengap_inf: n_dirs must be positive");
  const int d = p.input_dim();
  Rng rng(seed);
  double min_gap = std::numeric_limits<double>::infinity();
  Eigen::VectorXd u(d);
  for (int t = 0; t < n_dirs; ++t) {
    double nrm = 0.0;
    do {
      for (int i = 0; i < d; ++i) u[i] = rng.normal();
      nrm = u.norm();
    } while (nrm < 1e-12);
    u /= nrm;
    // homogeneous part only: the offset does not enter the gap condition
    const int m = p.order();
    const int k = p.block_size();
    std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(m / k),
                                        Eigen::MatrixXd::Zero(k, k));
    for (int i = 0; i < d; ++i) {
      for (int b = 0; b < m / k; ++b) {
        blocks[static_cast<std::size_t>(b)].noalias() += u[i] * p.coeff(i).block(b);
      }
    }
    const Eigen::VectorXd ev =
        all_eigenvalues_sorted(BlockSymMatrix(m, k, std::move(blocks)));
    min_gap = std::min(min_gap, ev[0] - ev[1]);
  }
  return min_gap;
}

namespace {

struct BlockMonomial {
  std::vector<int> target_block;           // block column c maps to block row target[c]
  std::vector<Eigen::MatrixXd> rotation;   // the orthogonal k x k sub-block per column
};

BlockMonomial decompose_structure_preserving(const Eigen::MatrixXd& o, int m, int k,
                                             double tol) {
  if (o.rows() != m || o.cols() != m) {
    throw contract_error("apply_similarity: O must be " + std::to_string(m) + "x" +
                         std::to_string(m));
  }
  const int nb = m / k;
  BlockMonomial out;
  out.target_block.assign(static_cast<std::size_t>(nb), -1);
  out.rotation.resize(static_cast<std::size_t>(nb));
  std::vector<bool> row_used(static_cast<std::size_t>(nb), false);
  for (int c = 0; c < nb; ++c) {
    int found = -1;
    for (int r = 0; r < nb; ++r) {
      const Eigen::MatrixXd sub = o.block(r * k, c * k, k, k);
      if (sub.cwiseAbs().maxCoeff() > tol) {
        if (found >= 0) {
          throw contract_error(
              "apply_similarity: O does not preserve the block structure "
              "(two non-zero sub-blocks in one block column)");
        }
        found = r;
        out.rotation[static_cast<std::size_t>(c)] = sub;
      }
    }
    if (found < 0 || row_used[static_cast<std::size_t>(found)]) {
      throw contract_error("apply_similarity: O does not induce a block permutation");
    }
    row_used[static_cast<std::size_t>(found)] = true;
    out.target_block[static_cast<std::size_t>(c)] = found;
    const Eigen::MatrixXd& q = out.rotation[static_cast<std::size_t>(c)];
    const double ortho_err =
        (q.transpose() * q - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (ortho_err > tol) {
      throw contract_error("apply_similarity: sub-block of O is not orthogonal (error " +
                           std::to_string(ortho_err) + ")");
    }
  }
  return out;
}

BlockSymMatrix conjugate(const BlockSymMatrix& a, const BlockMonomial& bm) {
  const int m = a.order();
  const int k = a.block_size();
  std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(m / k));
  for (int c = 0; c < m / k; ++c) {
    const Eigen::MatrixXd& q = bm.rotation[static_cast<std::size_t>(c)];
    blocks[static_cast<std::size_t>(bm.target_block[static_cast<std::size_t>(c)])] =
        q * a.block(c) * q.transpose();
  }
  return BlockSymMatrix(m, k, std::move(blocks));
}

}  // namespace

Pencil apply_similarity(const Pencil& p, const Eigen::MatrixXd& o) {
  const BlockMonomial bm = decompose_structure_preserving(o, p.order(), p.block_size(), 1e-10);
  std::vector<BlockSymMatrix> coeffs;
  coeffs.reserve(static_cast<std::size_t>(p.input_dim()));
  for (int i = 0; i < p.input_dim(); ++i) coeffs.push_back(conjugate(p.coeff(i), bm));
  std::optional<BlockSymMatrix> offset;
  if (!p.homogeneous()) offset = conjugate(p.offset(), bm);
  return Pencil(std::move(coeffs), std::move(offset));
}

double pencil_distance(const Pencil& a, const Pencil& b) {
  if (a.input_dim() != b.input_dim() || a.order() != b.order() ||
      a.block_size() != b.block_size() || a.homogeneous() != b.homogeneous()) {
    throw contract_error("pencil_distance: shape mismatch");
  }
  double s = 0.0;
  for (int i = 0; i < a.num_slots(); ++i) {
    const double d = (a.slot(i) - b.slot(i)).frobenius_norm();
    s += d * d;
  }
  return std::sqrt(s);
}

double pencil_norm(const Pencil& p) {
  double s = 0.0;
  for (int i = 0; i < p.num_slots(); ++i) {
    const double n = p.slot(i).frobenius_norm();
    s += n * n;
  }
  return std::sqrt(s);
}

}  // namespace specfit
