#include "kxxz/fits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

namespace kxxz {

namespace {

// Simple linear regression of y on x with slope standard error and R^2.
struct LineFit {
  double slope = 0.0, intercept = 0.0, stderr_slope = 0.0, r2 = 1.0;
};

LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = (int)x.size();
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw ConfigError("degenerate abscissa in scaling fit");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ssr += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  f.stderr_slope = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return f;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& pairs,
                       ScalingFit::Kind kind, int min_points) {
  ScalingFit out;
  out.kind = kind;
  std::vector<double> x, y;
  for (int i = 0; i < (int)pairs.size(); ++i) {
    const auto& [a, tau] = pairs[i];
    const bool bad_x =
        kind == ScalingFit::Kind::PowerLaw ? !(a > 0.0) : !std::isfinite(a);
    if (bad_x || !std::isfinite(tau) || tau <= 0.0) {
      out.excluded.push_back(i);
      continue;
    }
    x.push_back(kind == ScalingFit::Kind::PowerLaw ? std::log(a) : a);
    y.push_back(std::log(tau));
  }
  if (!out.excluded.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "excluded %zu point(s) with unusable lifetime or abscissa",
                  out.excluded.size());
    out.note = buf;
    std::fprintf(stderr, "warning: %s\n", buf);
  }
  out.used = (int)x.size();
  if (out.used < min_points) throw ConfigError("too few usable scaling points");
  const LineFit f = line_fit(x, y);
  out.exponent = f.slope;
  out.intercept = f.intercept;
  out.std_error = f.stderr_slope;
  out.r2 = f.r2;
  return out;
}

constexpr double big_penalty = 1e9;

// Rescaled points of one size, sorted by x.
struct SizeCurve {
  int L = 0;
  std::vector<double> x, y;
};

}  // namespace

ScalingFit power_law_fit(const std::vector<std::pair<double, double>>& pairs) {
  return scaling_fit(pairs, ScalingFit::Kind::PowerLaw, 4);
}

ScalingFit exponential_fit(
    const std::vector<std::pair<double, double>>& pairs) {
  return scaling_fit(pairs, ScalingFit::Kind::Exponential, 3);
}

double frequency_flatness(
    const std::vector<std::pair<double, double>>& pairs) {
  std::vector<double> tau;
  for (const auto& [w, t] : pairs)
    if (std::isfinite(t) && t > 0.0) tau.push_back(t);
  if (tau.size() < 3)
    throw ConfigError("flatness needs at least 3 usable frequencies");
  const double lo = *std::min_element(tau.begin(), tau.end());
  const double hi = *std::max_element(tau.begin(), tau.end());
  double mean = 0.0;
  for (double t : tau) mean += t;
  mean /= (double)tau.size();
  return (hi - lo) / mean;
}

double collapse_cost(const std::vector<CollapsePoint>& data, double epsilon_c,
                     double gamma, double mu) {
  // Soft walls keep the simplex away from the exploding corners of the
  // ansatz (L^(1/mu) overflows as mu -> 0).
  if (mu < 0.02) return big_penalty * (1.0 + (0.02 - mu));
  if (mu > 5.0) return big_penalty * (1.0 + (mu - 5.0));
  if (std::abs(gamma) > 10.0) return big_penalty * (1.0 + std::abs(gamma));
  if (std::abs(epsilon_c) > 1.0)
    return big_penalty * (1.0 + std::abs(epsilon_c));

  std::map<int, SizeCurve> curves;
  for (const auto& pt : data) {
    auto& c = curves[pt.L];
    c.L = pt.L;
    c.x.push_back((pt.epsilon - epsilon_c) * std::exp(std::log(pt.L) / mu));
    c.y.push_back(pt.m_bar * std::exp(gamma * std::log(pt.L)));
  }
  if (curves.size() < 2) throw ConfigError("collapse needs at least 2 sizes");
  for (auto& [L, c] : curves) {
    std::vector<int> order(c.x.size());
    for (int i = 0; i < (int)order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return c.x[a] < c.x[b]; });
    SizeCurve s;
    s.L = L;
    for (int i : order) {
      s.x.push_back(c.x[i]);
      s.y.push_back(c.y[i]);
    }
    c = s;
  }

  double ysum = 0.0, ysq = 0.0;
  int ntot = 0;
  for (const auto& [L, c] : curves)
    for (double v : c.y) {
      ysum += v;
      ysq += v * v;
      ++ntot;
    }
  const double var =
      std::max(ysq / ntot - (ysum / ntot) * (ysum / ntot), 1e-30);

  double cost = 0.0;
  int contributing_sizes = 0;
  for (const auto& [Lk, held] : curves) {
    // Master curve from every other size, duplicate abscissas averaged.
    std::vector<std::pair<double, double>> m;
    for (const auto& [Lo, c] : curves) {
      if (Lo == Lk) continue;
      for (size_t i = 0; i < c.x.size(); ++i) m.push_back({c.x[i], c.y[i]});
    }
    std::sort(m.begin(), m.end());
    std::vector<double> mx, my;
    for (size_t i = 0; i < m.size();) {
      size_t j = i;
      double acc = 0.0;
      while (j < m.size() && m[j].first - m[i].first < 1e-14) acc += m[j++].second;
      mx.push_back(m[i].first);
      my.push_back(acc / (double)(j - i));
      i = j;
    }
    if (mx.size() < 2) continue;
    double sse = 0.0;
    int n = 0;
    for (size_t i = 0; i < held.x.size(); ++i) {
      const double xq = held.x[i];
      if (xq < mx.front() || xq > mx.back()) continue;
      const auto it = std::lower_bound(mx.begin(), mx.end(), xq);
      const size_t hi = (size_t)(it - mx.begin());
      double fit;
      if (hi == 0) {
        fit = my.front();
      } else {
        const double t = (xq - mx[hi - 1]) / (mx[hi] - mx[hi - 1]);
        fit = (1.0 - t) * my[hi - 1] + t * my[hi];
      }
      const double d = held.y[i] - fit;
      sse += d * d;
      ++n;
    }
    if (n == 0) continue;
    cost += sse / n;
    ++contributing_sizes;
  }
  if (contributing_sizes == 0) return big_penalty;
  return cost / var;
}

namespace {

using Vec3 = std::array<double, 3>;

// Standard Nelder-Mead on 3 parameters. Returns true when the simplex
// collapsed below tolerance before the iteration cap.
bool nelder_mead(const std::function<double(const Vec3&)>& f, Vec3& best,
                 double& fbest, double scale) {
  std::array<Vec3, 4> s;
  std::array<double, 4> fs;
  s[0] = best;
  for (int i = 1; i < 4; ++i) {
    s[i] = best;
    s[i][i - 1] += scale * (i == 1 ? 0.02 : i == 2 ? 0.2 : 0.05);
  }
  for (int i = 0; i < 4; ++i) fs[i] = f(s[i]);

  const int max_iter = 500;
  bool ok = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::array<int, 4> idx = {0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return fs[a] < fs[b]; });
    std::array<Vec3, 4> ts;
    std::array<double, 4> tf;
    for (int i = 0; i < 4; ++i) {
      ts[i] = s[idx[i]];
      tf[i] = fs[idx[i]];
    }
    s = ts;
    fs = tf;
    if (fs[3] - fs[0] < 1e-12 * (1.0 + std::abs(fs[0]))) {
      ok = true;
      break;
    }

    Vec3 centroid = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int d = 0; d < 3; ++d) centroid[d] += s[i][d] / 3.0;
    auto blend = [&](double t) {
      Vec3 p;
      for (int d = 0; d < 3; ++d)
        p[d] = centroid[d] + t * (centroid[d] - s[3][d]);
      return p;
    };

    const Vec3 refl = blend(1.0);
    const double frefl = f(refl);
    if (frefl < fs[0]) {
      const Vec3 exp_ = blend(2.0);
      const double fexp = f(exp_);
      if (fexp < frefl) {
        s[3] = exp_;
        fs[3] = fexp;
      } else {
        s[3] = refl;
        fs[3] = frefl;
      }
    } else if (frefl < fs[2]) {
      s[3] = refl;
      fs[3] = frefl;
    } else {
      const Vec3 con = blend(frefl < fs[3] ? 0.5 : -0.5);
      const double fcon = f(con);
      if (fcon < std::min(frefl, fs[3])) {
        s[3] = con;
        fs[3] = fcon;
      } else {
        for (int i = 1; i < 4; ++i) {
          for (int d = 0; d < 3; ++d) s[i][d] = s[0][d] + 0.5 * (s[i][d] - s[0][d]);
          fs[i] = f(s[i]);
        }
      }
    }
  }
  int ibest = 0;
  for (int i = 1; i < 4; ++i)
    if (fs[i] < fs[ibest]) ibest = i;
  best = s[ibest];
  fbest = fs[ibest];
  return ok;
}

}  // namespace

CollapseFit collapse_fit(const std::vector<CollapsePoint>& data) {
  CollapseFit out;
  out.data = data;
  std::map<int, int> counts;
  double lo = 1e300, hi = -1e300;
  for (const auto& pt : data) {
    ++counts[pt.L];
    lo = std::min(lo, pt.m_bar);
    hi = std::max(hi, pt.m_bar);
  }
  if (counts.size() < 2)
    throw ConfigError("collapse needs at least 2 distinct sizes");
  for (const auto& [L, n] : counts)
    if (n < 8) throw ConfigError("collapse needs at least 8 points per size");

  if (hi - lo < 1e-12 * std::max(std::abs(hi), 1.0)) {
    out.degenerate = true;
    out.mu = 0.3;
    return out;
  }

  std::vector<CollapsePoint> sorted(data);
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.L != b.L ? a.L < b.L : a.epsilon < b.epsilon;
  });
  auto cost = [&](const Vec3& p) {
    return collapse_cost(sorted, p[0], p[1], p[2]);
  };

  Vec3 best = {0.05, 1.5, 0.3};
  double fbest = cost(best);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const Vec3 p = {0.0 + 0.1 * i / 4.0, 0.5 + 2.0 * j / 4.0,
                        0.1 + 0.4 * k / 4.0};
        const double fp = cost(p);
        if (fp < fbest) {
          fbest = fp;
          best = p;
        }
      }

  bool ok = nelder_mead(cost, best, fbest, 1.0);
  ok = nelder_mead(cost, best, fbest, 0.1) || ok;
  out.epsilon_c = best[0];
  out.gamma = best[1];
  out.mu = best[2];
  out.residual = fbest;
  out.converged = ok;
  return out;
}

}  // namespace kxxz
