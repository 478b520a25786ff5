#include "kxxz/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace kxxz {
namespace {

void site_magnetizations(const Eigen::VectorXcd& psi, int L,
                         Eigen::RowVectorXd& out) {
  out.setZero(L);
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    const double w = std::norm(psi[b]);
    if (w == 0.0) continue;
    for (int j = 1; j <= L; ++j)
      out[j - 1] += w * spin_sign(static_cast<basis_index>(b), j);
  }
}

void parity_autocorr(const Eigen::RowVectorXd& now, const Eigen::RowVectorXd& at0,
                     int L, double& even, double& odd) {
  even = odd = 0.0;
  for (int j = 1; j <= L; ++j) {
    const double c = now[j - 1] * at0[j - 1];
    if (j % 2 == 0)
      even += c;
    else
      odd += c;
  }
  even /= L / 2;
  odd /= L / 2;
}

}  // namespace

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) throw ConfigError("fidelity states differ in dimension");
  return std::abs(a.dot(b));
}

Trajectory run_trajectory(const ModelParams& p, basis_index initial, int steps,
                          EvolveMode mode) {
  return run_trajectory(*make_propagator(p, mode), initial, steps);
}

Trajectory run_trajectory(const Propagator& prop, basis_index initial, int steps) {
  const ModelParams& p = prop.params();
  if (steps < 1) throw ConfigError("trajectory needs at least one step");
  if (initial >= basis_dim(p.L)) throw ConfigError("initial state out of range");
  Trajectory traj;
  traj.params = p;
  traj.initial = initial;
  traj.steps = steps;
  traj.t.resize(steps + 1);
  traj.F.resize(steps + 1);
  traj.sz.resize(steps + 1, p.L);
  Eigen::VectorXcd psi = product_state(initial, p.L);
  const Eigen::Index b0 = static_cast<Eigen::Index>(initial);
  Eigen::RowVectorXd row(p.L);
  traj.t[0] = 0.0;
  traj.F[0] = 1.0;
  site_magnetizations(psi, p.L, row);
  traj.sz.row(0) = row;
  for (int n = 1; n <= steps; ++n) {
    prop.step(psi);
    traj.t[n] = n * p.T;
    traj.F[n] = std::abs(psi[b0]);
    site_magnetizations(psi, p.L, row);
    traj.sz.row(n) = row;
  }
  if (p.L % 2 == 0) {
    auto [ce, co] = autocorrelation(traj);
    traj.C_even = std::move(ce);
    traj.C_odd = std::move(co);
  }
  return traj;
}

FourierSpectrum fourier(const Trajectory& traj) {
  const int N = traj.steps;
  if (N < 2) throw ConfigError("spectrum needs at least 2 periods");
  if (N % 2 != 0)
    throw ConfigError("spectrum needs an even number of periods for the 1/(2T) bin");
  if (traj.F.size() < N) throw ConfigError("trajectory is shorter than its step count");
  FourierSpectrum fs;
  fs.nu.resize(N);
  fs.amplitude.resize(N);
  const double T = traj.params.T;
  for (int k = 0; k < N; ++k) {
    cx acc(0.0, 0.0);
    const double w = -2.0 * M_PI * k / N;
    for (int n = 0; n < N; ++n)
      acc += traj.F[n] * cx(std::cos(w * n), std::sin(w * n));
    fs.nu[k] = k / (N * T);
    fs.amplitude[k] = std::abs(acc) / N;
  }
  fs.h = fs.amplitude[N / 2];
  return fs;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> autocorrelation(const Trajectory& traj) {
  const int L = traj.params.L;
  if (L % 2 != 0) throw ConfigError("parity autocorrelation needs even L");
  const Eigen::Index n = traj.sz.rows();
  Eigen::VectorXd even(n), odd(n);
  const Eigen::RowVectorXd at0 = traj.sz.row(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::RowVectorXd now = traj.sz.row(i);
    parity_autocorr(now, at0, L, even[i], odd[i]);
  }
  return {even, odd};
}

double lifetime(const Eigen::VectorXd& e1, const Eigen::VectorXd& e2, double T,
                double touch_tol) {
  if (e1.size() != e2.size()) throw ConfigError("envelope series differ in length");
  if (!(touch_tol > 0.0)) throw ConfigError("touch tolerance must be positive");
  for (Eigen::Index i = 0; i < e1.size(); ++i)
    if (std::abs(e1[i] - e2[i]) < touch_tol) return (i + 1) * T;
  return std::numeric_limits<double>::infinity();
}

double run_lifetime(const ModelParams& p, basis_index initial, double touch_tol,
                    long max_steps, EvolveMode mode) {
  return run_lifetime(*make_propagator(p, mode), initial, touch_tol, max_steps);
}

double run_lifetime(const Propagator& prop, basis_index initial, double touch_tol,
                    long max_steps) {
  const ModelParams& p = prop.params();
  if (p.L % 2 != 0) throw ConfigError("lifetime scan needs even L");
  if (initial >= basis_dim(p.L)) throw ConfigError("initial state out of range");
  if (!(touch_tol > 0.0)) throw ConfigError("touch tolerance must be positive");
  if (max_steps < 1) throw ConfigError("lifetime scan needs at least one step");

  Eigen::VectorXcd psi = product_state(initial, p.L);
  Eigen::RowVectorXd at0(p.L), now(p.L);
  site_magnetizations(psi, p.L, at0);
  Eigen::VectorXd e1(1), e2(1);
  for (long n = 1; n <= max_steps; ++n) {
    prop.step(psi);
    site_magnetizations(psi, p.L, now);
    double even, odd;
    parity_autocorr(now, at0, p.L, even, odd);
    const double c = std::abs(0.5 * (even + odd));
    e1[0] = c;
    e2[0] = -c;
    if (std::isfinite(lifetime(e1, e2, p.T, touch_tol))) return n * p.T;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace kxxz
