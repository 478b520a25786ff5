#include "kxxz/hsf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace kxxz {

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

void check_charge(int L, int q) {
  if (q < 0 || q > L || (q % 2) != (L % 2))
    throw ConfigError("charge q must satisfy 0 <= q <= L with q = L mod 2");
}

// Eigenvalue phases clustered into degenerate multiplets: consecutive
// sorted phases closer than 1e-8 rad share a group. Exact symmetry
// degeneracies sit at machine precision, accidental gaps far above.
std::vector<std::vector<std::size_t>> degenerate_multiplets(
    const Eigen::VectorXcd& eigvals) {
  const std::size_t n = (std::size_t)eigvals.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::arg(eigvals[(Eigen::Index)a]) < std::arg(eigvals[(Eigen::Index)b]);
  });
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < n; ++k) {
    const double ph = std::arg(eigvals[(Eigen::Index)order[k]]);
    if (k == 0 ||
        ph - std::arg(eigvals[(Eigen::Index)order[k - 1]]) > 1e-8)
      groups.emplace_back();
    groups.back().push_back(order[k]);
  }
  // The circle closes: a multiplet can straddle the +pi/-pi seam.
  if (groups.size() > 1) {
    const double lo = std::arg(eigvals[(Eigen::Index)groups.front().front()]);
    const double hi = std::arg(eigvals[(Eigen::Index)groups.back().back()]);
    if (lo + 2.0 * M_PI - hi < 1e-8) {
      for (const std::size_t a : groups.back()) groups.front().push_back(a);
      groups.pop_back();
    }
  }
  return groups;
}

// Fragments from thresholded eigenstate support sets over a fixed list of
// sector basis states. amp(i, alpha) is the overlap magnitude between
// sector state i and eigenstate alpha; supports are pooled over each
// degenerate multiplet before linking.
template <typename Amp>
std::vector<std::vector<basis_index>> fragments_from_support(
    const std::vector<basis_index>& states, const Eigen::VectorXcd& eigvals,
    Amp amp, double threshold) {
  const std::size_t n = states.size();
  UnionFind uf(n);
  std::vector<std::uint32_t> support;
  for (const auto& multiplet : degenerate_multiplets(eigvals)) {
    support.clear();
    for (const std::size_t alpha : multiplet)
      for (std::size_t i = 0; i < n; ++i)
        if (amp(i, alpha) > threshold) support.push_back((std::uint32_t)i);
    for (std::size_t k = 1; k < support.size(); ++k)
      uf.unite(support[0], support[k]);
  }
  std::map<std::uint32_t, std::vector<basis_index>> groups;
  for (std::size_t i = 0; i < n; ++i)
    groups[uf.find((std::uint32_t)i)].push_back(states[i]);
  std::vector<std::vector<basis_index>> frags;
  frags.reserve(groups.size());
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    frags.push_back(std::move(members));
  }
  std::stable_sort(frags.begin(), frags.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return frags;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0) return 0;
  if (k == 0) return 1;
  if (n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (std::uint64_t)(n - k + i) / (std::uint64_t)i;
  return r;
}

std::vector<int> charge_values(int L) {
  std::vector<int> qs;
  for (int q = L % 2; q <= L; q += 2) qs.push_back(q);
  return qs;
}

int charge_of(basis_index state, int L) {
  return std::abs(magnetization_m(state, L));
}

std::uint64_t dim_q(int L, int q) {
  check_charge(L, q);
  const std::uint64_t c = binomial(L, (L + q) / 2);
  return q == 0 ? c : 2 * c;
}

std::uint64_t dim_qp(int L, int q, int p) {
  check_charge(L, q);
  if (p < 0 || p >= L) throw ConfigError("wall count p must satisfy 0 <= p < L");
  const int nu = (L + q) / 2, nd = (L - q) / 2;
  const int su = (p + 2) / 2, sd = (p + 1) / 2;
  const std::uint64_t aq = q == 0 ? 1 : 2;
  return aq * (binomial(nu - 1, nu - su) * binomial(nd - 1, nd - sd) +
               binomial(nu - 1, nu - sd) * binomial(nd - 1, nd - su));
}

double ratio_q_combinatorial(int L, int q) {
  std::uint64_t best = 0;
  for (int p = 0; p < L; ++p) best = std::max(best, dim_qp(L, q, p));
  return (double)best / (double)dim_q(L, q);
}

std::vector<basis_index> SectorTable::sector_states(int q) const {
  std::vector<basis_index> out;
  for (const auto& c : classes)
    if (c.q == q) out.insert(out.end(), c.states.begin(), c.states.end());
  std::sort(out.begin(), out.end());
  return out;
}

SectorTable build_sector_table(int L) {
  if (L < 1 || L > 28) throw ConfigError("sector table requires 1 <= L <= 28");
  std::map<std::pair<int, int>, std::vector<basis_index>> groups;
  const basis_index dim = basis_index{1} << L;
  for (basis_index s = 0; s < dim; ++s)
    groups[{charge_of(s, L), domain_wall_count(s, L)}].push_back(s);
  SectorTable table;
  table.L = L;
  for (auto& [key, states] : groups)
    table.classes.push_back({key.first, key.second, std::move(states)});
  return table;
}

double default_overlap_threshold(const ModelParams& p, std::uint64_t sector_dim) {
  // First-order hybridization tails reach J * (2J/(2V)) = J^2/V exactly
  // (edge bonds shift the wall count by one), so a bare J^2/V cut sits on
  // its own noise floor; the factor 2 clears it while staying far below
  // the >= 1/sqrt(dim) amplitudes inside a genuine fragment.
  const double from_coupling = 2.0 * p.J * p.J / p.V;
  const double from_dim = 0.5 / std::sqrt((double)sector_dim);
  return std::min(from_coupling, from_dim);
}

std::vector<std::vector<basis_index>> closure_fragments(int L, int q) {
  check_charge(L, q);
  if (L > 24) throw ConfigError("closure enumeration requires L <= 24");
  std::vector<basis_index> sector;
  const basis_index dim = basis_index{1} << L;
  for (basis_index s = 0; s < dim; ++s)
    if (charge_of(s, L) == q) sector.push_back(s);
  std::set<basis_index> left(sector.begin(), sector.end());
  std::vector<std::vector<basis_index>> frags;
  while (!left.empty()) {
    std::vector<basis_index> members;
    std::unordered_set<basis_index> seen{*left.begin()};
    std::queue<basis_index> todo;
    todo.push(*left.begin());
    while (!todo.empty()) {
      const basis_index s = todo.front();
      todo.pop();
      members.push_back(s);
      const auto visit = [&](basis_index t) {
        if (seen.insert(t).second) todo.push(t);
      };
      visit(flip_all(s, L));
      const int walls = domain_wall_count(s, L);
      for (int j = 1; j < L; ++j) {
        if (spin_bit(s, j) == spin_bit(s, j + 1)) continue;
        const basis_index t = s ^ ((basis_index{3}) << (j - 1));
        if (domain_wall_count(t, L) == walls) visit(t);
      }
    }
    std::sort(members.begin(), members.end());
    for (const basis_index s : members) left.erase(s);
    frags.push_back(std::move(members));
  }
  std::stable_sort(frags.begin(), frags.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return frags;
}

std::vector<std::vector<basis_index>> sector_fragments(
    const FloquetSpectrum& spec, int q, double threshold) {
  const int L = spec.params.L;
  check_charge(L, q);
  std::vector<basis_index> states;
  const basis_index dim = basis_index{1} << L;
  for (basis_index s = 0; s < dim; ++s)
    if (charge_of(s, L) == q) states.push_back(s);
  const auto& V = spec.eigvecs;
  return fragments_from_support(
      states, spec.eigvals,
      [&](std::size_t i, std::size_t alpha) {
        return std::abs(V((Eigen::Index)states[i], (Eigen::Index)alpha));
      },
      threshold);
}

std::vector<std::vector<basis_index>> sector_fragments(
    const SectorSpectrum& spec, double threshold) {
  const auto& V = spec.eigvecs;
  return fragments_from_support(
      spec.states, spec.eigvals,
      [&](std::size_t i, std::size_t alpha) {
        return std::abs(V((Eigen::Index)i, (Eigen::Index)alpha));
      },
      threshold);
}

double ratio_q_numerical(const FloquetSpectrum& spec, int q, double threshold) {
  const auto frags = sector_fragments(spec, q, threshold);
  return (double)frags.front().size() / (double)dim_q(spec.params.L, q);
}

double ratio_q_numerical(const SectorSpectrum& spec, double threshold) {
  const auto frags = sector_fragments(spec, threshold);
  return (double)frags.front().size() / (double)spec.states.size();
}

OverlapPattern overlap_matrix(const FloquetSpectrum& spec, double threshold) {
  const int L = spec.params.L;
  const basis_index dim = basis_index{1} << L;
  const auto n = (std::size_t)dim;

  // Basis order: charge, wall count, fragment id within the charge sector,
  // then state value.
  std::vector<std::uint32_t> frag_id(n, 0);
  for (int q : charge_values(L)) {
    const auto frags = sector_fragments(spec, q, threshold);
    for (std::uint32_t f = 0; f < frags.size(); ++f)
      for (basis_index s : frags[f]) frag_id[(std::size_t)s] = f;
  }
  OverlapPattern pat;
  pat.basis_order.resize(n);
  std::iota(pat.basis_order.begin(), pat.basis_order.end(), basis_index{0});
  std::stable_sort(pat.basis_order.begin(), pat.basis_order.end(),
                   [&](basis_index a, basis_index b) {
                     const auto ka = std::make_tuple(charge_of(a, L), domain_wall_count(a, L),
                                                     frag_id[(std::size_t)a], a);
                     const auto kb = std::make_tuple(charge_of(b, L), domain_wall_count(b, L),
                                                     frag_id[(std::size_t)b], b);
                     return ka < kb;
                   });
  std::vector<std::uint32_t> col_of(n);
  for (std::uint32_t c = 0; c < n; ++c) col_of[(std::size_t)pat.basis_order[c]] = c;

  // Eigenstate order: first permuted column touched, ties by index.
  const auto& V = spec.eigvecs;
  std::vector<std::uint32_t> first_col(n, (std::uint32_t)n);
  std::vector<std::vector<std::uint32_t>> cols((std::size_t)V.cols());
  for (std::uint32_t alpha = 0; alpha < (std::uint32_t)V.cols(); ++alpha) {
    for (std::size_t b = 0; b < n; ++b)
      if (std::abs(V((Eigen::Index)b, alpha)) > threshold) {
        cols[alpha].push_back(col_of[b]);
        first_col[alpha] = std::min(first_col[alpha], col_of[b]);
      }
    std::sort(cols[alpha].begin(), cols[alpha].end());
  }
  pat.eig_order.resize((std::size_t)V.cols());
  std::iota(pat.eig_order.begin(), pat.eig_order.end(), 0u);
  std::stable_sort(pat.eig_order.begin(), pat.eig_order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return first_col[a] < first_col[b]; });

  for (std::uint32_t r = 0; r < pat.eig_order.size(); ++r)
    for (std::uint32_t c : cols[pat.eig_order[r]]) pat.entries.emplace_back(r, c);
  return pat;
}

FrozenReport classify_frozen(basis_index state, const SparseOp& hprime) {
  const int L = hprime.L;
  if (state >= (basis_index{1} << L)) throw ConfigError("state outside the basis");
  std::unordered_set<basis_index> seen{state};
  std::queue<basis_index> todo;
  todo.push(state);
  while (!todo.empty()) {
    const basis_index s = todo.front();
    todo.pop();
    const auto visit = [&](basis_index t) {
      if (seen.insert(t).second) todo.push(t);
    };
    visit(flip_all(s, L));
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
             hprime.M, (Eigen::Index)s);
         it; ++it)
      if ((basis_index)it.col() != s && it.value() != 0.0) visit((basis_index)it.col());
  }
  return {seen.size() <= 2, seen.size()};
}

}  // namespace kxxz
