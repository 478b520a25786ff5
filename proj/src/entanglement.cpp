#include "kxxz/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace kxxz {

Eigen::MatrixXcd reduced_density(const Eigen::VectorXcd& psi, int L,
                                 const std::vector<int>& sites) {
  check_sites(L);
  if (sites.empty() || sites.size() > 2)
    throw ConfigError("reduced_density keeps one or two sites");
  std::vector<int> kept(sites);
  std::sort(kept.begin(), kept.end());
  for (int s : kept)
    if (s < 1 || s > L) throw ConfigError("site outside the chain");
  if (kept.size() == 2 && kept[0] == kept[1])
    throw ConfigError("duplicate site in reduced_density");
  const basis_index dim = basis_dim(L);
  if (psi.size() != (Eigen::Index)dim)
    throw ConfigError("state length does not match L");

  const int k = (int)kept.size();
  const int sub = 1 << k;
  basis_index mask = 0;
  for (int s : kept) mask |= basis_index{1} << (s - 1);

  // Basis index of each subsystem pattern, environment bits zeroed.
  basis_index pattern[4] = {0, 0, 0, 0};
  for (int a = 0; a < sub; ++a)
    for (int t = 0; t < k; ++t)
      if ((a >> t) & 1) pattern[a] |= basis_index{1} << (kept[t] - 1);

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(sub, sub);
  Eigen::Vector4cd amp;
  for (basis_index rest = 0; rest < dim; ++rest) {
    if (rest & mask) continue;
    for (int a = 0; a < sub; ++a) amp(a) = psi((Eigen::Index)(rest | pattern[a]));
    for (int a = 0; a < sub; ++a)
      for (int b = 0; b < sub; ++b) rho(a, b) += amp(a) * std::conj(amp(b));
  }
  return rho;
}

double entropy_vn(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                     Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p >= 1e-14) s -= p * std::log(p);
  }
  return s;
}

MutualInfoResult floquet_avg_mutual_info(const FloquetSpectrum& spec) {
  spec.params.validate();
  if (spec.params.L < 2)
    throw ConfigError("edge mutual information needs L >= 2");
  const Eigen::Index dim = (Eigen::Index)basis_dim(spec.params.L);
  if (spec.eigvecs.rows() != dim || spec.eigvecs.cols() != dim)
    throw ConfigError("mutual information needs the full eigensystem");

  MutualInfoResult out;
  out.params = spec.params;
  out.m_alpha.resize((size_t)dim);
  const std::vector<int> edges{1, spec.params.L};
  for (Eigen::Index a = 0; a < dim; ++a) {
    const Eigen::MatrixXcd pair =
        reduced_density(spec.eigvecs.col(a), spec.params.L, edges);
    // Single-site matrices follow by tracing the 4x4: subsystem bit 0 is
    // site 1, bit 1 is site L.
    Eigen::MatrixXcd left(2, 2), right(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        left(i, j) = pair(i, j) + pair(i + 2, j + 2);
        right(i, j) = pair(2 * i, 2 * j) + pair(2 * i + 1, 2 * j + 1);
      }
    const double sl = entropy_vn(left);
    const double sr = entropy_vn(right);
    const double sp = entropy_vn(pair);
    out.m_alpha[(size_t)a] = sl + sr - sp;
    out.s_bar_left += sl;
    out.s_bar_right += sr;
    out.s_bar_pair += sp;
  }
  out.s_bar_left /= (double)dim;
  out.s_bar_right /= (double)dim;
  out.s_bar_pair /= (double)dim;
  out.m_bar = out.s_bar_left + out.s_bar_right - out.s_bar_pair;
  return out;
}

}  // namespace kxxz
