#include "kxxz/basis.hpp"

#include <bit>

namespace kxxz {

void check_sites(int L) {
  if (L < 1 || L > max_sites) throw ConfigError("L must be in [1, 24]");
}

int magnetization_m(basis_index b, int L) {
  check_sites(L);
  int ups = std::popcount(b & basis_mask(L));
  return 2 * ups - L;
}

int magnetization_q(basis_index b, int L) {
  int m = magnetization_m(b, L);
  return m < 0 ? -m : m;
}

int domain_wall_count(basis_index b, int L) {
  check_sites(L);
  if (L == 1) return 0;
  basis_index diff = (b ^ (b >> 1)) & basis_mask(L - 1);
  return std::popcount(diff);
}

std::string to_bitstring(basis_index b, int L) {
  check_sites(L);
  std::string s(L, 'd');
  for (int j = 1; j <= L; ++j)
    if (spin_bit(b, j)) s[j - 1] = 'u';
  return s;
}

basis_index from_bitstring(const std::string& s) {
  int L = int(s.size());
  check_sites(L);
  basis_index b = 0;
  for (int j = 1; j <= L; ++j) {
    char c = s[j - 1];
    if (c == 'u')
      b |= basis_index{1} << (j - 1);
    else if (c != 'd')
      throw ConfigError("bitstring may contain only 'u' and 'd': " + s);
  }
  return b;
}

basis_index neel_state(int L) {
  check_sites(L);
  basis_index b = 0;
  for (int j = 1; j <= L; j += 2) b |= basis_index{1} << (j - 1);
  return b;
}

basis_index all_up_state(int L) {
  check_sites(L);
  return basis_mask(L);
}

basis_index domain_wall_state(int L) {
  check_sites(L);
  static const std::string tmpl = "ududud" "dududu";
  std::string s(L, 'd');
  for (int j = 0; j < L; ++j) s[j] = tmpl[j % 12];
  return from_bitstring(s);
}

basis_index named_state(const std::string& name, int L) {
  if (name == "neel") return neel_state(L);
  if (name == "domain_wall" || name == "domainwall") return domain_wall_state(L);
  if (name == "all_up") return all_up_state(L);
  if (!name.empty() && name.find_first_not_of("ud") == std::string::npos) {
    if (int(name.size()) != L)
      throw ConfigError("bitstring length does not match L");
    return from_bitstring(name);
  }
  throw ConfigError("unknown initial state: " + name);
}

double sz_expectation(const Eigen::VectorXcd& psi, int L, int site) {
  check_sites(L);
  if (site < 1 || site > L) throw ConfigError("site out of range");
  const basis_index bit = basis_index{1} << (site - 1);
  double acc = 0.0;
  const std::uint64_t D = basis_dim(L);
  for (std::uint64_t b = 0; b < D; ++b) {
    double w = std::norm(psi[long(b)]);
    acc += (b & bit) ? w : -w;
  }
  return acc;
}

Eigen::VectorXcd product_state(basis_index b, int L) {
  check_sites(L);
  if (b >= basis_dim(L)) throw ConfigError("basis index out of range");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(long(basis_dim(L)));
  psi[long(b)] = 1.0;
  return psi;
}

}  // namespace kxxz
