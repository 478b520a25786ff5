#pragma once
#include <numbers>
#include <stdexcept>

namespace kxxz {

/// Error raised for invalid parameters, malformed config, bad input files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Error raised when a numerical routine fails its own quality checks
/// (eigensolver breakdown, residual above tolerance, out-of-memory guard).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameters of one driving period of the kicked XXZ chain.
///
/// The chain Hamiltonian (open boundaries, hbar = 1) is
///   H = sum_{j=1}^{L-1} J (sx_j sx_{j+1} + sy_j sy_{j+1}) + V sz_j sz_{j+1}
/// and one period applies the near-flip kick
///   U1 = exp(-i (pi/2 - epsilon) sum_j sx_j)
/// followed by the interaction stage U2 = exp(-i T H), so U_F = U2 U1.
/// J sets the energy unit; omega = 2 pi / T.
struct ModelParams {
  int L = 0;
  double J = 1.0;
  double V = 1.0;
  double T = 1.0;
  double epsilon = 0.0;

  double omega() const { return 2.0 * std::numbers::pi / T; }
  double kick_angle() const { return std::numbers::pi / 2.0 - epsilon; }

  void validate() const {
    if (L < 1 || L > 24) throw ConfigError("L must be in [1, 24]");
    if (!(T > 0.0)) throw ConfigError("T must be positive");
    if (!(J == J) || !(V == V) || !(epsilon == epsilon))
      throw ConfigError("non-finite model parameter");
  }
};

}  // namespace kxxz
