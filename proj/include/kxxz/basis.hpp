#pragma once
#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "kxxz/model.hpp"

namespace kxxz {

using basis_index = std::uint64_t;
using cx = std::complex<double>;

// Site and bit conventions, used everywhere:
//  - sites are 1-based, 1..L, left to right;
//  - site j lives in bit (j-1) of the basis index, so site 1 is the least
//    significant bit;
//  - bit 1 = spin up (sz = +1), bit 0 = spin down;
//  - bitstrings serialize site 1 first with 'u'/'d', e.g. "udud" is
//    up,down,up,down on sites 1..4.

inline constexpr int max_sites = 24;

/// Throws ConfigError unless 1 <= L <= max_sites.
void check_sites(int L);

inline std::uint64_t basis_dim(int L) { return std::uint64_t{1} << L; }
inline basis_index basis_mask(int L) { return basis_dim(L) - 1; }

inline int spin_bit(basis_index b, int site) {
  return int((b >> (site - 1)) & 1u);
}
/// sz eigenvalue of one site, +1 or -1.
inline int spin_sign(basis_index b, int site) {
  return spin_bit(b, site) ? 1 : -1;
}
/// Global spin flip of all L sites.
inline basis_index flip_all(basis_index b, int L) { return ~b & basis_mask(L); }

/// Signed magnetization m = sum_j sz_j (ranges -L..L in steps of 2).
int magnetization_m(basis_index b, int L);
/// Unsigned charge q = |sum_j sz_j|; conserved by the epsilon = 0 drive.
int magnetization_q(basis_index b, int L);
/// Number of antiparallel nearest-neighbor bonds ("walls"), 0..L-1.
int domain_wall_count(basis_index b, int L);

std::string to_bitstring(basis_index b, int L);
/// Inverse of to_bitstring; throws ConfigError on anything but [ud]{1,24}.
basis_index from_bitstring(const std::string& s);

/// Up on odd sites: "udud...".
basis_index neel_state(int L);
basis_index all_up_state(int L);
/// Periodic repetition of the 12-site template "ududud"+"dududu" (alternating
/// background with one adjacent defect pair at the center bond), truncated to
/// L sites. Keeps the wall density near 10 walls per 12 sites at every length;
/// at L = 12 this is exactly the canonical defect-at-center pattern.
basis_index domain_wall_state(int L);
/// Resolves "neel" / "domain_wall" / "all_up" / an explicit [ud]+ bitstring.
basis_index named_state(const std::string& name, int L);

/// <psi| sz_site |psi> for a normalized state over the full 2^L basis.
double sz_expectation(const Eigen::VectorXcd& psi, int L, int site);

/// One-hot state vector for a basis index.
Eigen::VectorXcd product_state(basis_index b, int L);

}  // namespace kxxz
