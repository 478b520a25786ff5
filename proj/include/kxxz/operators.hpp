#pragma once
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kxxz/basis.hpp"
#include "kxxz/model.hpp"

namespace kxxz {

/// Real sparse operator on the full 2^L product basis (row compressed).
struct SparseOp {
  int L = 0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> M;
};

/// Open-boundary XXZ chain:
///   H = sum_{j<L} J (sx_j sx_{j+1} + sy_j sy_{j+1}) + V sz_j sz_{j+1}.
/// Off-diagonal elements are 2J between states differing by one antiparallel
/// neighbor exchange; the diagonal is V times the signed bond sum.
SparseOp build_xxz(const ModelParams& p);

/// XXZ with every exchange element that changes the wall count removed
/// (diagonal unchanged). Commutes exactly with the wall count and the charge.
SparseOp build_projected_xxz(const ModelParams& p);

/// Diagonal of the charge operator Q = |sum_j sz_j|, one entry per basis state.
Eigen::VectorXd q_diagonal(int L);
/// Diagonal of the wall-count operator P_dw = sum_{j<L} (1 - sz_j sz_{j+1})/2.
Eigen::VectorXd wall_diagonal(int L);
/// Diagonal of the interaction energy sum_{j<L} sz_j sz_{j+1} (used by U2).
Eigen::VectorXd zz_bond_diagonal(int L);

SparseOp diagonal_op(const Eigen::VectorXd& d, int L);
Eigen::MatrixXd to_dense(const SparseOp& op);

/// Largest |entry| of A B - B A.
double commutator_norm(const SparseOp& A, const SparseOp& B);
/// Same for a dense complex operator against a diagonal one; entry (i,j) of the
/// commutator is U(i,j) (d_j - d_i).
double commutator_norm(const Eigen::MatrixXcd& U, const Eigen::VectorXd& diag);

/// Coordinate-list dump "row col value" preceded by '#' header lines.
void dump_operator(const SparseOp& op, const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& header);

/// Full eigendecomposition of a symmetric matrix; A's columns become the
/// eigenvectors, w the ascending eigenvalues. Dispatches to a linear-workspace
/// solver for large matrices.
void symmetric_eig_inplace(Eigen::MatrixXd& A, Eigen::VectorXd& w);

/// Matrix-free y = H x for the XXZ chain; caches the diagonal once.
class XxzMatvec {
 public:
  explicit XxzMatvec(const ModelParams& p);
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  /// Upper bound on the spectral spread, used for Krylov substepping.
  double spread_bound() const;
  int L() const { return p_.L; }

 private:
  ModelParams p_;
  Eigen::VectorXd diag_;
};

}  // namespace kxxz
