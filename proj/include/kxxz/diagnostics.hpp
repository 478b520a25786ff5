#pragma once
#include <utility>

#include <Eigen/Dense>

#include "kxxz/basis.hpp"
#include "kxxz/model.hpp"
#include "kxxz/propagator.hpp"

namespace kxxz {

/// Stroboscopic record over steps periods: row n of sz holds <sz_j(nT)> for
/// sites 1..L, F the return amplitude magnitude |<psi(0)|psi(nT)>|. The
/// parity-resolved autocorrelations are filled for even L.
struct Trajectory {
  ModelParams params;
  basis_index initial = 0;
  int steps = 0;
  Eigen::VectorXd t;
  Eigen::VectorXd F;
  Eigen::MatrixXd sz;
  Eigen::VectorXd C_even, C_odd;
};

/// |<a|b>| for normalized states of equal dimension.
double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

Trajectory run_trajectory(const ModelParams& p, basis_index initial, int steps,
                          EvolveMode mode = EvolveMode::Auto);
Trajectory run_trajectory(const Propagator& prop, basis_index initial, int steps);

/// Amplitude spectrum of the return series: the first steps samples enter an
/// N-point transform f_k = (1/N) sum_n F(nT) exp(-2 pi i k n / N), so the
/// grid nu_k = k/(NT) lands exactly on 1/(2T) at k = N/2. h is the amplitude
/// there. steps must be even and at least 2.
struct FourierSpectrum {
  Eigen::VectorXd nu;
  Eigen::VectorXd amplitude;
  double h = 0.0;
};

FourierSpectrum fourier(const Trajectory& traj);

/// Site-averaged magnetization autocorrelations split by parity class,
/// C(nT) = (2/L) sum_j <sz_j(nT)> <sz_j(0)>; even L only.
std::pair<Eigen::VectorXd, Eigen::VectorXd> autocorrelation(const Trajectory& traj);

/// First touch of two envelope series: entry i speaks for time (i+1) T, and
/// tau is the smallest such time with |e1 - e2| < touch_tol, +infinity when
/// the series never meet.
double lifetime(const Eigen::VectorXd& e1, const Eigen::VectorXd& e2, double T,
                double touch_tol);

/// Evolves the state until the staggered order melts. The subharmonic
/// autocorrelation swings between +|C| and -|C| with C = (C_even + C_odd)/2,
/// so those branches feed the touch comparator and tau is the first period
/// with 2|C(nT)| < touch_tol. Stops early on touch; +infinity at max_steps.
double run_lifetime(const ModelParams& p, basis_index initial, double touch_tol,
                    long max_steps = 100000, EvolveMode mode = EvolveMode::Auto);
double run_lifetime(const Propagator& prop, basis_index initial, double touch_tol,
                    long max_steps = 100000);

}  // namespace kxxz
