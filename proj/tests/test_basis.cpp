#include <doctest.h>

#include "kxxz/basis.hpp"

using namespace kxxz;

TEST_CASE("bit and site conventions") {
  // "udud" = up,down,up,down on sites 1..4; site 1 is bit 0.
  CHECK(from_bitstring("udud") == 5);
  CHECK(to_bitstring(5, 4) == "udud");
  CHECK(spin_sign(5, 1) == 1);
  CHECK(spin_sign(5, 2) == -1);
  CHECK(spin_bit(5, 3) == 1);
  CHECK(flip_all(5, 4) == 10);
}

TEST_CASE("bitstring round trip is a bijection") {
  for (int L : {1, 3, 6, 12}) {
    for (basis_index b = 0; b < basis_dim(L); ++b) {
      CHECK(from_bitstring(to_bitstring(b, L)) == b);
    }
  }
}

TEST_CASE("bitstring validation") {
  CHECK_THROWS_AS(from_bitstring("udx"), ConfigError);
  CHECK_THROWS_AS(from_bitstring(""), ConfigError);
  CHECK_THROWS_AS(from_bitstring(std::string(25, 'u')), ConfigError);
  CHECK_THROWS_AS(named_state("uud", 4), ConfigError);
  CHECK_THROWS_AS(named_state("bogus", 4), ConfigError);
}

TEST_CASE("magnetization charge") {
  CHECK(magnetization_q(from_bitstring("udud"), 4) == 0);
  CHECK(magnetization_q(from_bitstring("uuuu"), 4) == 4);
  CHECK(magnetization_q(from_bitstring("uudu"), 4) == 2);
  CHECK(magnetization_m(from_bitstring("dddd"), 4) == -4);
  // parity: q has the parity of L
  for (int L : {2, 5, 8}) {
    for (basis_index b = 0; b < basis_dim(L); ++b) {
      CHECK(magnetization_q(b, L) % 2 == L % 2);
      CHECK(magnetization_q(b, L) == magnetization_q(flip_all(b, L), L));
    }
  }
}

TEST_CASE("domain wall count") {
  CHECK(domain_wall_count(from_bitstring("udud"), 4) == 3);
  CHECK(domain_wall_count(from_bitstring("uuuu"), 4) == 0);
  CHECK(domain_wall_count(from_bitstring("uudd"), 4) == 1);
  CHECK(domain_wall_count(0, 1) == 0);
  // global flip preserves wall count
  for (basis_index b = 0; b < basis_dim(6); ++b)
    CHECK(domain_wall_count(b, 6) == domain_wall_count(flip_all(b, 6), 6));
}

TEST_CASE("named states") {
  CHECK(neel_state(4) == from_bitstring("udud"));
  CHECK(to_bitstring(neel_state(12), 12) == "udududududud");
  CHECK(all_up_state(2) == from_bitstring("uu"));
  CHECK(named_state("neel", 4) == 5);
  CHECK(named_state("uddu", 4) == from_bitstring("uddu"));
}

TEST_CASE("domain wall template") {
  // canonical 12-site pattern: alternating with one defect pair at the center
  CHECK(to_bitstring(domain_wall_state(12), 12) == "udududdududu");
  CHECK(domain_wall_state(12) == 2709);
  CHECK(domain_wall_count(domain_wall_state(12), 12) == 10);
  CHECK(magnetization_q(domain_wall_state(12), 12) == 0);
  // truncations keep the same leading pattern
  CHECK(to_bitstring(domain_wall_state(8), 8) == "udududdu");
  CHECK(domain_wall_count(domain_wall_state(8), 8) == 6);
  CHECK(magnetization_q(domain_wall_state(8), 8) == 0);
  CHECK(to_bitstring(domain_wall_state(10), 10) == "udududdudu");
  // multiples of 12 tile with a seam defect, keeping 10 walls per block
  CHECK(domain_wall_count(domain_wall_state(24), 24) == 20);
}

TEST_CASE("sz expectation") {
  // one-hot states reproduce the classical pattern
  basis_index b = from_bitstring("uddu");
  auto psi = product_state(b, 4);
  for (int j = 1; j <= 4; ++j)
    CHECK(sz_expectation(psi, 4, j) == doctest::Approx(spin_sign(b, j)));
  // equal superposition of uu and du has zero sz on site 1, +1 on site 2
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v[3] = v[2] = 1.0 / std::sqrt(2.0);
  CHECK(sz_expectation(v, 2, 1) == doctest::Approx(0.0));
  CHECK(sz_expectation(v, 2, 2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sz_expectation(v, 2, 3), ConfigError);
}

TEST_CASE("parameter validation") {
  ModelParams p;
  p.L = 4;
  CHECK_NOTHROW(p.validate());
  p.T = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.T = 2.0;
  CHECK(p.omega() == doctest::Approx(std::numbers::pi));
  p.epsilon = 0.03;
  CHECK(p.kick_angle() == doctest::Approx(std::numbers::pi / 2 - 0.03));
  p.L = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
