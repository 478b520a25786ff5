#include <algorithm>
#include <cmath>

#include "kxxz/propagator.hpp"

namespace kxxz {
namespace {

// One restart interval. Returns false when the residual estimate exceeds tol,
// leaving psi untouched.
bool lanczos_substep(const XxzMatvec& H, double dt, Eigen::VectorXcd& psi,
                     int m, double tol) {
  const double beta0 = psi.norm();
  if (beta0 == 0.0) return true;
  const Eigen::Index dim = psi.size();
  Eigen::MatrixXcd V(dim, m + 1);
  Eigen::VectorXd alpha(m), beta(m);
  V.col(0) = psi / beta0;
  const double breakdown = 1e-12 * std::max(1.0, H.spread_bound());
  int j = 0;
  bool happy = false;
  Eigen::VectorXcd vj(dim), w(dim);
  for (; j < m; ++j) {
    vj = V.col(j);
    H.apply(vj, w);
    if (j > 0) w -= beta[j - 1] * V.col(j - 1);
    alpha[j] = V.col(j).dot(w).real();
    w -= alpha[j] * V.col(j);
    for (int k = 0; k <= j; ++k) w -= V.col(k).dot(w) * V.col(k);
    beta[j] = w.norm();
    if (beta[j] < breakdown) {
      happy = true;
      ++j;
      break;
    }
    V.col(j + 1) = w / beta[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(alpha.head(j), beta.head(j - 1),
                            Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericalError("tridiagonal eigensolver failed");
  const Eigen::VectorXd theta = es.eigenvalues();
  const Eigen::MatrixXd& S = es.eigenvectors();
  Eigen::VectorXcd phase(j);
  for (int i = 0; i < j; ++i)
    phase[i] = cx(std::cos(dt * theta[i]), -std::sin(dt * theta[i]));
  const Eigen::VectorXd e1 = S.row(0).transpose();
  Eigen::VectorXcd u = S.cast<cx>() * phase.cwiseProduct(e1.cast<cx>()) * beta0;
  if (!happy) {
    const double est = std::abs(dt) * beta[j - 1] * std::abs(u[j - 1]) / beta0;
    if (est > tol) return false;
  }
  psi.noalias() = V.leftCols(j) * u;
  return true;
}

}  // namespace

void krylov_expmi(const XxzMatvec& H, double t, Eigen::VectorXcd& psi, int m,
                  double tol) {
  if (t == 0.0 || psi.size() == 0) return;
  const Eigen::Index dim = psi.size();
  // Cap the stored basis so V stays under ~2 GB at large L.
  const Eigen::Index vec_budget =
      std::max<Eigen::Index>(5, static_cast<Eigen::Index>(2.0e9 / (16.0 * dim)));
  const int m_eff = static_cast<int>(std::min<Eigen::Index>(m, vec_budget));
  const Eigen::VectorXcd saved = psi;
  for (long nsub = 1; nsub <= (1L << 20); nsub *= 2) {
    psi = saved;
    const double dt = t / static_cast<double>(nsub);
    const double tol_sub = tol / static_cast<double>(nsub);
    bool ok = true;
    for (long s = 0; s < nsub && ok; ++s)
      ok = lanczos_substep(H, dt, psi, m_eff, tol_sub);
    if (ok) return;
  }
  throw NumericalError("Krylov evolution failed to reach tolerance");
}

}  // namespace kxxz
