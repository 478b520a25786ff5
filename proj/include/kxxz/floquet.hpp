#pragma once
#include <vector>

#include <Eigen/Dense>

#include "kxxz/basis.hpp"
#include "kxxz/model.hpp"

namespace kxxz {

/// Eigensystem of the one-period operator U_F = U2 U1. Entries are sorted by
/// quasienergy; eigenvectors are orthonormal columns.
struct FloquetSpectrum {
  ModelParams params;
  Eigen::VectorXcd eigvals;
  Eigen::VectorXd quasienergies;  // -arg(lambda)/T folded to (-pi/T, pi/T]
  Eigen::MatrixXcd eigvecs;
};

/// One charge block of the perfect-kick operator. States lists the basis
/// configurations spanning the block (magnetization +q then -q); eigenvectors
/// are real in this frame.
struct SectorSpectrum {
  int q = 0;
  std::vector<basis_index> states;
  Eigen::VectorXcd eigvals;
  Eigen::VectorXd quasienergies;
  Eigen::MatrixXd eigvecs;
};

/// Dense U_F (interaction times kick), L <= 13.
Eigen::MatrixXcd floquet_matrix(const ModelParams& p);

/// Full diagonalization via the symmetrized product
/// U1^{1/2} U2 U1^{1/2}, which is unitary and complex symmetric, so it splits
/// into commuting real symmetric parts. L <= 14.
FloquetSpectrum floquet_spectrum(const ModelParams& p);

/// Per-charge diagonalization at epsilon = 0, where U_F block-diagonalizes
/// over q = |M|. Blocks are returned for q = L mod 2, ..., L.
std::vector<SectorSpectrum> floquet_spectrum_blocked(const ModelParams& p);

/// P_alpha = |<alpha|psi>|^2 for a normalized state.
Eigen::VectorXd eigenstate_overlaps(const FloquetSpectrum& fs,
                                    const Eigen::VectorXcd& psi);

/// Two eigenstates whose quasienergy gap times T sits within pair_tol of pi.
struct PiPair {
  int a = 0, b = 0;     // indices into the spectrum, a < b
  double weight = 0.0;  // P_a + P_b
  double offset = 0.0;  // | |wrapped gap| - pi |, radians per period
};

/// Greedy pairing over eigenstates carrying at least weight_cut_frac of the
/// largest overlap.
std::vector<PiPair> detect_pi_pairs(const FloquetSpectrum& fs,
                                    const Eigen::VectorXd& overlaps,
                                    double weight_cut_frac, double pair_tol);

/// Beat prediction for one unordered combination of two pi pairs: delta is
/// the minimal wrapped quasienergy offset between their members (radians per
/// period), nu = delta / (2 pi T) the base modulation frequency, and
/// predicted collects nu with its aliases around 1/(2T) and 1/T.
struct BeatInfo {
  int first = 0, second = 0;  // indices into the pair list, first < second
  double delta = 0.0;
  double nu = 0.0;
  std::vector<double> predicted;  // within [0, 1/T), sorted, deduplicated
};

/// Empty when fewer than two pairs are given.
std::vector<BeatInfo> beat_frequencies(const FloquetSpectrum& fs,
                                       const std::vector<PiPair>& pairs);

/// Angle wrapped to (-pi, pi].
double wrap_angle(double x);

}  // namespace kxxz
