#pragma once
#include <vector>

#include <Eigen/Dense>

#include "kxxz/basis.hpp"
#include "kxxz/floquet.hpp"
#include "kxxz/model.hpp"

namespace kxxz {

/// Partial trace of |psi><psi| onto one or two sites. Subsystem rows and
/// columns are indexed by the bit pattern of the kept sites in ascending site
/// order, so bit 0 is the lower-numbered site and bit value 1 means spin up.
Eigen::MatrixXcd reduced_density(const Eigen::VectorXcd& psi, int L,
                                 const std::vector<int>& sites);

/// Von Neumann entropy -Tr rho ln rho in natural log. Eigenvalues below
/// 1e-14 contribute zero.
double entropy_vn(const Eigen::MatrixXcd& rho);

/// Edge-spin mutual information averaged over a full Floquet eigensystem.
/// Entropies use the natural log, so m_bar lies in [0, 2 ln 2].
struct MutualInfoResult {
  ModelParams params;
  double m_bar = 0.0;           // s_bar_left + s_bar_right - s_bar_pair
  double s_bar_left = 0.0;      // mean entropy of site 1
  double s_bar_right = 0.0;     // mean entropy of site L
  double s_bar_pair = 0.0;      // mean entropy of sites {1, L}
  std::vector<double> m_alpha;  // per-eigenstate mutual information
};

/// Averages each edge entropy over all eigenstates, then combines the means.
/// Throws ConfigError when the spectrum does not carry all 2^L eigenvectors.
MutualInfoResult floquet_avg_mutual_info(const FloquetSpectrum& spec);

}  // namespace kxxz
