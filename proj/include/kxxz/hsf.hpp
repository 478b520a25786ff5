#pragma once

#include <cstdint>
#include <vector>

#include "kxxz/basis.hpp"
#include "kxxz/floquet.hpp"
#include "kxxz/operators.hpp"

namespace kxxz {

// Binomial coefficient; 0 outside the valid range, 1 for k == 0 (any n).
std::uint64_t binomial(int n, int k);

// Charge values |m| compatible with L sites: L mod 2, L mod 2 + 2, ..., L.
std::vector<int> charge_values(int L);

// Charge |m| of a basis state.
int charge_of(basis_index state, int L);

// Dimension of the charge sector: all states with |m| = q.
std::uint64_t dim_q(int L, int q);

// Dimension of the (charge, wall count) class within the sector.
std::uint64_t dim_qp(int L, int q, int p);

// Largest (q,p) class dimension over the sector dimension.
double ratio_q_combinatorial(int L, int q);

struct QpClass {
  int q = 0;
  int p = 0;
  std::vector<basis_index> states;
};

// Every basis state grouped by (charge, wall count), ascending in (q, p).
struct SectorTable {
  int L = 0;
  std::vector<QpClass> classes;

  // Member states of one charge sector, ascending.
  std::vector<basis_index> sector_states(int q) const;
};

SectorTable build_sector_table(int L);

// Overlap threshold used when none is given: min(2 J^2/V, 0.5/sqrt(dim)).
// The dimension term keeps the graph meaningful at weak interaction, where
// a coupling-based cut exceeds every amplitude of a delocalized
// eigenstate; the factor 2 lifts the strong-interaction cut off the
// first-order hybridization tails, which reach J^2/V at the chain edges.
double default_overlap_threshold(const ModelParams& p, std::uint64_t sector_dim);

// Exact closure partition of one charge sector under wall-count-preserving
// neighbor exchanges plus the global spin flip, sorted by size descending.
// This is the fragmentation of the projected dynamics, independent of any
// spectrum or threshold; the thresholded detection below coarsens it.
std::vector<std::vector<basis_index>> closure_fragments(int L, int q);

// Connected fragments of one charge sector: eigenstates and basis states
// are linked when |<basis|eigenstate>| > threshold, components are
// projected onto basis states. Untouched states remain singletons.
// Eigenstates with numerically identical eigenvalues are treated as one
// degenerate multiplet whose supports merge, since the split into
// individual vectors is basis-dependent there. Fragments are sorted by
// size descending and partition the sector.
std::vector<std::vector<basis_index>> sector_fragments(
    const FloquetSpectrum& spec, int q, double threshold);
std::vector<std::vector<basis_index>> sector_fragments(
    const SectorSpectrum& spec, double threshold);

// Largest fragment dimension over sector dimension.
double ratio_q_numerical(const FloquetSpectrum& spec, int q, double threshold);
double ratio_q_numerical(const SectorSpectrum& spec, double threshold);

// Thresholded boolean overlap pattern between eigenstates (rows) and basis
// states (columns), with both sides permuted to expose the block structure:
// basis states ordered by (q, p, fragment, state), eigenstates by the first
// basis column they touch.
struct OverlapPattern {
  std::vector<basis_index> basis_order;
  std::vector<std::uint32_t> eig_order;
  // (row, col) positions in the permuted matrix, row-major sorted.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
};

OverlapPattern overlap_matrix(const FloquetSpectrum& spec, double threshold);

struct FrozenReport {
  bool frozen = false;
  std::uint64_t fragment_size = 0;
};

// Closure of a product state under the off-diagonal elements of the
// projected Hamiltonian plus the global spin flip; frozen when the closure
// holds at most the state and its flipped partner.
FrozenReport classify_frozen(basis_index state, const SparseOp& hprime);

}  // namespace kxxz
