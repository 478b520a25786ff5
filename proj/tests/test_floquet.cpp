#include <doctest.h>

#include <random>

#include "kxxz/floquet.hpp"
#include "kxxz/propagator.hpp"

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

Eigen::VectorXcd random_state(int L, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd psi(basis_dim(L));
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = cx(g(rng), g(rng));
  psi /= psi.norm();
  return psi;
}

// Multisets of eigenvalue angles agree after sorting.
void check_same_phases(Eigen::VectorXcd a, Eigen::VectorXcd b, double tol) {
  REQUIRE(a.size() == b.size());
  std::vector<double> pa(a.size()), pb(b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    pa[i] = std::arg(a[i]);
    pb[i] = std::arg(b[i]);
  }
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  for (size_t i = 0; i < pa.size(); ++i) {
    double d = std::abs(wrap_angle(pa[i] - pb[i]));
    // neighbors around the branch cut may swap; accept either side
    if (d > tol && i + 1 < pa.size())
      d = std::min(d, std::abs(wrap_angle(pa[i + 1] - pb[i])));
    if (d > tol && i > 0) d = std::min(d, std::abs(wrap_angle(pa[i - 1] - pb[i])));
    CHECK(d < tol);
  }
}

}  // namespace

TEST_CASE("perfect kick with no interaction is a global flip") {
  const Eigen::MatrixXcd U = floquet_matrix(params(2, 0.0, 0.0, 1.0, 0.0));
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(4, 4);
  want(0, 3) = want(1, 2) = want(2, 1) = want(3, 0) = cx(-1.0, 0.0);
  CHECK((U - want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("dense one-period matrix acts like one propagator step") {
  const ModelParams p = params(5, 1.0, 3.0, 1.2, 0.07);
  const Eigen::MatrixXcd U = floquet_matrix(p);
  SectorPropagator prop(p);
  for (unsigned seed : {1u, 2u}) {
    Eigen::VectorXcd psi = random_state(5, seed);
    const Eigen::VectorXcd want = U * psi;
    prop.step(psi);
    CHECK((psi - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("spectrum matches a general complex eigensolver") {
  for (const ModelParams& p :
       {params(4, 1.0, 3.0, 1.1, 0.08), params(6, 1.0, 5.0, 0.8, 0.2)}) {
    const Eigen::MatrixXcd U = floquet_matrix(p);
    const FloquetSpectrum fs = floquet_spectrum(p);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(U);
    REQUIRE(ces.info() == Eigen::Success);
    check_same_phases(fs.eigvals, ces.eigenvalues(), 1e-9);

    CHECK((fs.eigvals.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    const Eigen::Index n = fs.eigvals.size();
    CHECK((fs.eigvecs.adjoint() * fs.eigvecs - Eigen::MatrixXcd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    double resid = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      resid = std::max(resid, (U * fs.eigvecs.col(i) -
                               fs.eigvals[i] * fs.eigvecs.col(i))
                                  .norm());
    CHECK(resid < 1e-9);
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(fs.quasienergies[i] > -M_PI / p.T - 1e-12);
      CHECK(fs.quasienergies[i] <= M_PI / p.T + 1e-12);
      if (i) CHECK(fs.quasienergies[i] >= fs.quasienergies[i - 1]);
    }
  }
}

TEST_CASE("heavily degenerate interaction still resolves cleanly") {
  const ModelParams p = params(6, 0.0, 1.0, 1.0, 0.3);
  const FloquetSpectrum fs = floquet_spectrum(p);
  const Eigen::MatrixXcd U = floquet_matrix(p);
  double resid = 0.0;
  for (Eigen::Index i = 0; i < fs.eigvals.size(); ++i)
    resid = std::max(
        resid,
        (U * fs.eigvecs.col(i) - fs.eigvals[i] * fs.eigvecs.col(i)).norm());
  CHECK(resid < 1e-9);
}

TEST_CASE("spectral reconstruction reproduces the propagator") {
  const ModelParams p = params(6, 1.0, 5.0, 1.0, 0.03);
  const FloquetSpectrum fs = floquet_spectrum(p);
  const Eigen::VectorXcd psi0 = product_state(neel_state(6), 6);
  const Eigen::VectorXcd amp0 = fs.eigvecs.adjoint() * psi0;
  SectorPropagator prop(p);
  Eigen::VectorXcd psi = psi0;
  Eigen::VectorXcd coef = amp0;
  for (int n = 1; n <= 25; ++n) {
    prop.step(psi);
    coef.array() *= fs.eigvals.array();
    const cx direct = psi0.dot(psi);
    const cx spectral = amp0.dot(coef);
    CHECK(std::abs(direct - spectral) < 1e-8);
  }
}

TEST_CASE("overlaps are a probability distribution") {
  const ModelParams p = params(5, 1.0, 2.0, 1.0, 0.1);
  const FloquetSpectrum fs = floquet_spectrum(p);
  const Eigen::VectorXd P = eigenstate_overlaps(fs, random_state(5, 9));
  CHECK(P.minCoeff() >= 0.0);
  CHECK(std::abs(P.sum() - 1.0) < 1e-10);
  const Eigen::VectorXd Pe = eigenstate_overlaps(fs, fs.eigvecs.col(3));
  CHECK(Pe.maxCoeff() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("per-charge blocks reproduce the perfect-kick spectrum") {
  const ModelParams p = params(6, 1.0, 3.0, 0.9, 0.0);
  const auto blocks = floquet_spectrum_blocked(p);
  const FloquetSpectrum full = floquet_spectrum(p);
  const Eigen::MatrixXcd U = floquet_matrix(p);

  Eigen::Index total = 0;
  std::vector<cx> all;
  double resid = 0.0;
  for (const auto& blk : blocks) {
    const Eigen::Index n = blk.eigvals.size();
    total += n;
    for (Eigen::Index i = 0; i < n; ++i) {
      all.push_back(blk.eigvals[i]);
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis_dim(p.L));
      for (size_t k = 0; k < blk.states.size(); ++k)
        v[static_cast<Eigen::Index>(blk.states[k])] = blk.eigvecs(k, i);
      resid = std::max(resid, (U * v - blk.eigvals[i] * v).norm());
      CHECK(magnetization_q(blk.states[0], p.L) == blk.q);
    }
  }
  CHECK(total == static_cast<Eigen::Index>(basis_dim(p.L)));
  CHECK(resid < 1e-8);
  Eigen::VectorXcd flat(total);
  for (Eigen::Index i = 0; i < total; ++i) flat[i] = all[i];
  check_same_phases(flat, full.eigvals, 1e-9);

  CHECK_THROWS_AS(floquet_spectrum_blocked(params(4, 1.0, 1.0, 1.0, 0.1)),
                  ConfigError);
}

TEST_CASE("pair detection on a synthetic spectrum") {
  FloquetSpectrum fs;
  fs.params = params(2, 1.0, 1.0, 1.0, 0.0);
  fs.quasienergies.resize(6);
  fs.quasienergies << 0.0, M_PI - 0.01, 0.3, 0.3 - M_PI + 0.02, -3.0, 2.0;
  Eigen::VectorXd P(6);
  P << 0.4, 0.3, 0.2, 0.1, 0.0005, 0.12;

  const auto pairs = detect_pi_pairs(fs, P, 0.1, 0.05);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].a == 0);
  CHECK(pairs[0].b == 1);
  CHECK(pairs[0].weight == doctest::Approx(0.7));
  CHECK(pairs[0].offset == doctest::Approx(0.01));
  CHECK(pairs[1].a == 2);
  CHECK(pairs[1].b == 3);
  CHECK(pairs[1].weight == doctest::Approx(0.3));
  CHECK(pairs[1].offset == doctest::Approx(0.02));

  CHECK(detect_pi_pairs(fs, P, 0.1, 1e-4).size() == 0);
  CHECK(detect_pi_pairs(fs, Eigen::VectorXd::Zero(6), 0.1, 0.05).empty());
}

TEST_CASE("beat aliases around the half-frequency") {
  // Two pairs offset by pi/5 modulate the fidelity at 1/10 of the drive
  // frequency and its aliases.
  FloquetSpectrum fs;
  fs.params = params(2, 1.0, 1.0, 1.0, 0.0);
  fs.quasienergies.resize(4);
  fs.quasienergies << 0.0, M_PI, M_PI / 5.0, M_PI / 5.0 - M_PI;
  PiPair p0, p1;
  p0.a = 0;
  p0.b = 1;
  p1.a = 2;
  p1.b = 3;

  const auto beats = beat_frequencies(fs, {p0, p1});
  REQUIRE(beats.size() == 1);
  CHECK(beats[0].first == 0);
  CHECK(beats[0].second == 1);
  CHECK(beats[0].delta == doctest::Approx(M_PI / 5.0).epsilon(1e-12));
  CHECK(beats[0].nu == doctest::Approx(0.1).epsilon(1e-12));
  REQUIRE(beats[0].predicted.size() == 4);
  CHECK(beats[0].predicted[0] == doctest::Approx(0.1));
  CHECK(beats[0].predicted[1] == doctest::Approx(0.4));
  CHECK(beats[0].predicted[2] == doctest::Approx(0.6));
  CHECK(beats[0].predicted[3] == doctest::Approx(0.9));

  // A lone pair has nothing to beat against.
  CHECK(beat_frequencies(fs, {p0}).empty());

  // Coincident pairs: zero offset, so only the aliases at 0 and 1/2 remain.
  const auto degenerate = beat_frequencies(fs, {p0, p0});
  REQUIRE(degenerate.size() == 1);
  CHECK(degenerate[0].delta == doctest::Approx(0.0));
  REQUIRE(degenerate[0].predicted.size() == 2);
  CHECK(degenerate[0].predicted[0] == doctest::Approx(0.0));
  CHECK(degenerate[0].predicted[1] == doctest::Approx(0.5));

  // Three pairs produce one prediction per unordered combination.
  PiPair p2;
  p2.a = 0;
  p2.b = 2;
  const auto trio = beat_frequencies(fs, {p0, p1, p2});
  REQUIRE(trio.size() == 3);
  CHECK(trio[2].first == 1);
  CHECK(trio[2].second == 2);
}

TEST_CASE("ordered initial states select subharmonic pairs") {
  const ModelParams neel = params(8, 1.0, 20.0, 1.0, 0.005);
  const FloquetSpectrum fs = floquet_spectrum(neel);
  const Eigen::VectorXd P =
      eigenstate_overlaps(fs, product_state(neel_state(8), 8));
  const auto pairs = detect_pi_pairs(fs, P, 0.1, 0.05);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].weight > 0.9);
  CHECK(pairs[0].offset < 0.01);

  const ModelParams dw = params(8, 1.0, 100.0, 1.0, 0.005);
  const FloquetSpectrum fsd = floquet_spectrum(dw);
  const Eigen::VectorXd Pd =
      eigenstate_overlaps(fsd, product_state(domain_wall_state(8), 8));
  const auto dpairs = detect_pi_pairs(fsd, Pd, 0.1, 0.05);
  CHECK(dpairs.size() == 3);
  double wsum = 0.0;
  for (const auto& pp : dpairs) wsum += pp.weight;
  CHECK(wsum > 0.9);
}

TEST_CASE("size guards") {
  CHECK_THROWS_AS(floquet_spectrum(params(15, 1.0, 1.0, 1.0, 0.1)), ConfigError);
  CHECK_THROWS_AS(floquet_matrix(params(14, 1.0, 1.0, 1.0, 0.1)), ConfigError);
}
