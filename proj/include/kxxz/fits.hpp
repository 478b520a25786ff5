#pragma once
#include <string>
#include <utility>
#include <vector>

#include "kxxz/model.hpp"

namespace kxxz {

/// Log-space linear regression of a lifetime scaling series. Non-finite or
/// non-positive lifetimes (capped-run sentinels) are excluded, not fitted.
struct ScalingFit {
  enum class Kind { PowerLaw, Exponential };
  Kind kind = Kind::PowerLaw;
  double exponent = 0.0;   // power-law exponent, or exponential rate
  double intercept = 0.0;  // log-space offset
  double std_error = 0.0;  // standard error of the exponent
  double r2 = 0.0;
  int used = 0;
  std::vector<int> excluded;  // input indices dropped before the regression
  std::string note;           // human-readable exclusion warning, or empty
};

/// Fits tau ~ c * x^exponent by least squares on log-log axes.
/// Needs at least 4 usable points.
ScalingFit power_law_fit(const std::vector<std::pair<double, double>>& pairs);

/// Fits tau ~ c * exp(rate * x) by least squares on log-linear axes.
/// Needs at least 3 usable points.
ScalingFit exponential_fit(const std::vector<std::pair<double, double>>& pairs);

/// Relative spread (max - min) / mean of tau across driving frequencies,
/// sentinels excluded. Needs at least 3 usable points.
double frequency_flatness(const std::vector<std::pair<double, double>>& pairs);

/// One row of a finite-size scaling table.
struct CollapsePoint {
  int L = 0;
  double epsilon = 0.0;
  double m_bar = 0.0;
};

/// Finite-size scaling collapse of m_bar(L, epsilon) under
/// m_bar ~ L^-gamma f((epsilon - epsilon_c) L^(1/mu)).
struct CollapseFit {
  double epsilon_c = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  double residual = 0.0;   // collapse cost at the optimum
  bool converged = false;  // simplex met its tolerance
  bool degenerate = false; // constant input, exponents unconstrained
  std::vector<CollapsePoint> data;
};

/// Dispersion of the rescaled data around a leave-one-size-out
/// piecewise-linear master curve, averaged per size, summed over sizes, and
/// normalized by the variance of all rescaled values. Zero means a perfect
/// collapse.
double collapse_cost(const std::vector<CollapsePoint>& data, double epsilon_c,
                     double gamma, double mu);

/// Minimizes collapse_cost by Nelder-Mead descent from the best seed of a
/// 5x5x5 grid over epsilon_c in [0, 0.1], gamma in [0.5, 2.5],
/// mu in [0.1, 0.5]. Needs at least 2 sizes with 8 epsilon points each.
CollapseFit collapse_fit(const std::vector<CollapsePoint>& data);

}  // namespace kxxz
