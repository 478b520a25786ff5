#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "kxxz/diagnostics.hpp"
#include "kxxz/floquet.hpp"

using namespace kxxz;

namespace {

ModelParams params(int L, double J, double V, double T, double eps) {
  ModelParams p;
  p.L = L;
  p.J = J;
  p.V = V;
  p.T = T;
  p.epsilon = eps;
  return p;
}

Trajectory fake_series(const Eigen::VectorXd& F, int steps, double T) {
  Trajectory traj;
  traj.params = params(2, 1.0, 1.0, T, 0.0);
  traj.steps = steps;
  traj.F = F;
  return traj;
}

}  // namespace

TEST_CASE("state overlap magnitude") {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(4), b = Eigen::VectorXcd::Zero(4);
  a[1] = 1.0;
  b[2] = 1.0;
  CHECK(fidelity(a, a) == doctest::Approx(1.0));
  CHECK(fidelity(a, b) == doctest::Approx(0.0));
  CHECK(fidelity(a, a * cx(0.0, 1.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fidelity(a, Eigen::VectorXcd::Zero(8)), ConfigError);
}

TEST_CASE("pure flips revive the return amplitude every second period") {
  const Trajectory traj =
      run_trajectory(params(4, 0.0, 1.3, 1.0, 0.0), neel_state(4), 8);
  for (int n = 0; n <= 8; ++n) {
    if (n % 2 == 0)
      CHECK(traj.F[n] == doctest::Approx(1.0).epsilon(1e-12));
    else
      CHECK(traj.F[n] < 1e-12);
  }
  CHECK(traj.t[5] == doctest::Approx(5.0));
}

TEST_CASE("subharmonic bin of an alternating series is exactly half") {
  const int N = 500;
  Eigen::VectorXd F(N + 1);
  for (int n = 0; n <= N; ++n) F[n] = (n % 2 == 0) ? 1.0 : 0.0;
  const FourierSpectrum fs = fourier(fake_series(F, N, 1.0));
  CHECK(fs.h == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(fs.amplitude[0] == doctest::Approx(0.5).epsilon(1e-14));

  const FourierSpectrum flat = fourier(fake_series(Eigen::VectorXd::Ones(N + 1), N, 1.0));
  CHECK(flat.h < 1e-14);
  CHECK(flat.amplitude[0] == doctest::Approx(1.0));
}

TEST_CASE("frequency grid hits the half-period bin") {
  const int N = 8;
  Eigen::VectorXd F = Eigen::VectorXd::Ones(N + 1);
  const FourierSpectrum fs = fourier(fake_series(F, N, 0.5));
  CHECK(fs.nu[N / 2] == doctest::Approx(1.0));  // 1/(2T) with T = 1/2
  CHECK(fs.nu[1] == doctest::Approx(1.0 / (N * 0.5)));

  CHECK_THROWS_AS(fourier(fake_series(F, 7, 1.0)), ConfigError);
  CHECK_THROWS_AS(fourier(fake_series(F, 1, 1.0)), ConfigError);
}

TEST_CASE("transform preserves power") {
  const int N = 64;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd F(N + 1);
  for (int n = 0; n <= N; ++n) F[n] = u(rng);
  const FourierSpectrum fs = fourier(fake_series(F, N, 1.0));
  const double lhs = fs.amplitude.squaredNorm();
  const double rhs = F.head(N).squaredNorm() / N;
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("parity autocorrelations start at one and flip with the drive") {
  const Trajectory traj =
      run_trajectory(params(6, 0.0, 2.0, 1.0, 0.0), neel_state(6), 4);
  auto [even, odd] = autocorrelation(traj);
  CHECK(even[0] == doctest::Approx(1.0));
  CHECK(odd[0] == doctest::Approx(1.0));
  for (int n = 1; n <= 4; ++n) {
    const double want = (n % 2 == 0) ? 1.0 : -1.0;
    CHECK(even[n] == doctest::Approx(want).epsilon(1e-10));
    CHECK(odd[n] == doctest::Approx(want).epsilon(1e-10));
  }

  const Trajectory odd_traj =
      run_trajectory(params(5, 1.0, 1.0, 1.0, 0.1), all_up_state(5), 2);
  CHECK_THROWS_AS(autocorrelation(odd_traj), ConfigError);
  CHECK(odd_traj.C_even.size() == 0);
}

TEST_CASE("touch comparator on explicit envelopes") {
  Eigen::VectorXd same = Eigen::VectorXd::Constant(5, 0.7);
  CHECK(lifetime(same, same, 2.0, 0.05) == doctest::Approx(2.0));

  Eigen::VectorXd up = Eigen::VectorXd::Ones(50);
  Eigen::VectorXd down = -up;
  CHECK(std::isinf(lifetime(up, down, 1.0, 0.05)));

  Eigen::VectorXd e1(3), e2(3);
  e1 << 0.9, 0.5, 0.01;
  e2 = -e1;
  CHECK(lifetime(e1, e2, 2.0, 0.05) == doctest::Approx(6.0));
  CHECK_THROWS_AS(lifetime(e1, Eigen::VectorXd::Zero(2), 1.0, 0.05), ConfigError);
  CHECK_THROWS_AS(lifetime(e1, e2, 1.0, 0.0), ConfigError);
}

TEST_CASE("melting time of a wall state is finite and reproducible") {
  const ModelParams p = params(8, 1.0, 5.0, 1.0, 0.0);
  const double tau = run_lifetime(p, domain_wall_state(8), 0.05, 5000);
  CHECK(tau == 7.0 * p.T);
  CHECK(run_lifetime(p, domain_wall_state(8), 0.05, 5000) == tau);
  const ModelParams stiff = params(8, 1.0, 20.0, 1.0, 0.0);
  CHECK(run_lifetime(stiff, domain_wall_state(8), 0.05, 5000) == 86.0 * p.T);
}

TEST_CASE("stronger interactions hold the order longer") {
  const basis_index dw = domain_wall_state(10);
  ModelParams weak = params(10, 1.0, 10.0, 1.0, 0.0);
  ModelParams strong = params(10, 1.0, 30.0, 1.0, 0.0);
  const double tau_weak = run_lifetime(weak, dw, 0.05, 20000);
  const double tau_strong = run_lifetime(strong, dw, 0.05, 20000);
  CHECK(std::isfinite(tau_weak));
  CHECK(std::isfinite(tau_strong));
  CHECK(tau_strong > 10.0 * tau_weak);
}

TEST_CASE("kick detuning shortens the lifetime") {
  const basis_index dw = domain_wall_state(8);
  double prev = std::numeric_limits<double>::infinity();
  for (const double eps : {0.0, 0.01, 0.02}) {
    const ModelParams p = params(8, 1.0, 20.0, 1.0, eps);
    const double tau = run_lifetime(p, dw, 0.05, 5000);
    CHECK(std::isfinite(tau));
    CHECK(tau <= prev);
    prev = tau;
  }
}

TEST_CASE("spectral reconstruction matches the trajectory magnitudes") {
  const ModelParams p = params(8, 1.0, 5.0, 1.0, 0.1);
  const Trajectory traj = run_trajectory(p, neel_state(8), 100);
  const FloquetSpectrum fs = floquet_spectrum(p);
  const Eigen::VectorXd P =
      eigenstate_overlaps(fs, product_state(neel_state(8), 8));
  Eigen::VectorXcd coef = P.cast<cx>();
  for (int n = 1; n <= 100; ++n) {
    coef.array() *= fs.eigvals.array();
    CHECK(std::abs(std::abs(coef.sum()) - traj.F[n]) < 1e-8);
  }
}

TEST_CASE("reference and iterative engines tell the same story") {
  const ModelParams p = params(8, 1.0, 5.0, 1.0, 0.05);
  const Trajectory a = run_trajectory(p, neel_state(8), 200, EvolveMode::Dense);
  const Trajectory b = run_trajectory(p, neel_state(8), 200, EvolveMode::Krylov);
  CHECK((a.F - b.F).cwiseAbs().maxCoeff() < 1e-6);
}
