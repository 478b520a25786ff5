#include "kxxz/operators.hpp"

#include <lapacke.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace kxxz {
namespace {

using Trip = Eigen::Triplet<double>;

SparseOp build_chain(const ModelParams& p, bool wall_preserving_only) {
  p.validate();
  const int L = p.L;
  const basis_index dim = basis_dim(L);
  std::vector<Trip> trips;
  trips.reserve(static_cast<size_t>(dim) * L);
  const Eigen::VectorXd zz = zz_bond_diagonal(L);
  for (basis_index b = 0; b < dim; ++b) {
    const double d = p.V * zz[static_cast<Eigen::Index>(b)];
    if (d != 0.0) trips.emplace_back(b, b, d);
    if (p.J == 0.0) continue;
    for (int j = 1; j < L; ++j) {
      const basis_index pair = (basis_index{3}) << (j - 1);
      const basis_index bits = b & pair;
      if (bits == 0 || bits == pair) continue;  // parallel neighbors
      const basis_index b2 = b ^ pair;
      if (wall_preserving_only &&
          domain_wall_count(b2, L) != domain_wall_count(b, L))
        continue;
      trips.emplace_back(b, b2, 2.0 * p.J);
    }
  }
  SparseOp op;
  op.L = L;
  op.M.resize(dim, dim);
  op.M.setFromTriplets(trips.begin(), trips.end());
  op.M.makeCompressed();
  return op;
}

}  // namespace

void symmetric_eig_inplace(Eigen::MatrixXd& A, Eigen::VectorXd& w) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  w.resize(n);
  if (n == 0) return;
  lapack_int info;
  if (n <= 4096) {
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, A.data(), n, w.data());
  } else {
    Eigen::MatrixXd Z(n, n);
    std::vector<lapack_int> isuppz(2 * static_cast<size_t>(n));
    lapack_int found = 0;
    info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, A.data(), n, 0.0,
                          0.0, 0, 0, 0.0, &found, w.data(), Z.data(), n,
                          isuppz.data());
    A.swap(Z);
  }
  if (info != 0) throw NumericalError("symmetric eigensolver failed");
}

SparseOp build_xxz(const ModelParams& p) { return build_chain(p, false); }

SparseOp build_projected_xxz(const ModelParams& p) {
  return build_chain(p, true);
}

Eigen::VectorXd q_diagonal(int L) {
  check_sites(L);
  const basis_index dim = basis_dim(L);
  Eigen::VectorXd d(dim);
  for (basis_index b = 0; b < dim; ++b)
    d[static_cast<Eigen::Index>(b)] = magnetization_q(b, L);
  return d;
}

Eigen::VectorXd wall_diagonal(int L) {
  check_sites(L);
  const basis_index dim = basis_dim(L);
  Eigen::VectorXd d(dim);
  for (basis_index b = 0; b < dim; ++b)
    d[static_cast<Eigen::Index>(b)] = domain_wall_count(b, L);
  return d;
}

Eigen::VectorXd zz_bond_diagonal(int L) {
  check_sites(L);
  const basis_index dim = basis_dim(L);
  Eigen::VectorXd d(dim);
  for (basis_index b = 0; b < dim; ++b)
    d[static_cast<Eigen::Index>(b)] =
        (L - 1) - 2.0 * domain_wall_count(b, L);
  return d;
}

SparseOp diagonal_op(const Eigen::VectorXd& d, int L) {
  check_sites(L);
  if (d.size() != static_cast<Eigen::Index>(basis_dim(L)))
    throw ConfigError("diagonal length does not match 2^L");
  std::vector<Trip> trips;
  trips.reserve(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d[i] != 0.0) trips.emplace_back(i, i, d[i]);
  SparseOp op;
  op.L = L;
  op.M.resize(d.size(), d.size());
  op.M.setFromTriplets(trips.begin(), trips.end());
  op.M.makeCompressed();
  return op;
}

Eigen::MatrixXd to_dense(const SparseOp& op) {
  return Eigen::MatrixXd(op.M);
}

double commutator_norm(const SparseOp& A, const SparseOp& B) {
  if (A.L != B.L) throw ConfigError("commutator operands differ in L");
  Eigen::SparseMatrix<double, Eigen::RowMajor> AB = A.M * B.M;
  Eigen::SparseMatrix<double, Eigen::RowMajor> BA = B.M * A.M;
  Eigen::SparseMatrix<double, Eigen::RowMajor> C = AB - BA;
  double best = 0.0;
  for (int k = 0; k < C.outerSize(); ++k)
    for (decltype(C)::InnerIterator it(C, k); it; ++it)
      best = std::max(best, std::abs(it.value()));
  return best;
}

double commutator_norm(const Eigen::MatrixXcd& U, const Eigen::VectorXd& diag) {
  if (U.rows() != U.cols() || U.rows() != diag.size())
    throw ConfigError("commutator operands differ in dimension");
  double best = 0.0;
  for (Eigen::Index j = 0; j < U.cols(); ++j)
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
      const double v = std::abs(U(i, j)) * std::abs(diag[j] - diag[i]);
      best = std::max(best, v);
    }
  return best;
}

void dump_operator(const SparseOp& op, const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& header) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  for (const auto& [k, v] : header) std::fprintf(f, "# %s = %s\n", k.c_str(), v.c_str());
  for (int k = 0; k < op.M.outerSize(); ++k)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(op.M, k);
         it; ++it)
      std::fprintf(f, "%ld %ld %.12g\n", static_cast<long>(it.row()),
                   static_cast<long>(it.col()), it.value());
  std::fclose(f);
}

XxzMatvec::XxzMatvec(const ModelParams& p) : p_(p) {
  p_.validate();
  diag_ = p_.V * zz_bond_diagonal(p_.L);
}

void XxzMatvec::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const int L = p_.L;
  const basis_index dim = basis_dim(L);
  if (x.size() != static_cast<Eigen::Index>(dim))
    throw ConfigError("matvec input length does not match 2^L");
  y.resize(x.size());
  y.array() = diag_.array() * x.array();
  if (p_.J == 0.0) return;
  const cx twoJ(2.0 * p_.J, 0.0);
  for (int j = 1; j < L; ++j) {
    const basis_index pair = (basis_index{3}) << (j - 1);
    for (basis_index b = 0; b < dim; ++b) {
      const basis_index bits = b & pair;
      if (bits == 0 || bits == pair) continue;
      y[static_cast<Eigen::Index>(b)] +=
          twoJ * x[static_cast<Eigen::Index>(b ^ pair)];
    }
  }
}

double XxzMatvec::spread_bound() const {
  // Row-sum bound: |diag| <= |V|(L-1), off-diagonal sum <= 2|J|(L-1).
  return 2.0 * (std::abs(p_.V) + 2.0 * std::abs(p_.J)) * (p_.L - 1);
}

}  // namespace kxxz
