#include "kxxz/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "kxxz/basis.hpp"
#include "kxxz/diagnostics.hpp"
#include "kxxz/entanglement.hpp"
#include "kxxz/fits.hpp"
#include "kxxz/floquet.hpp"
#include "kxxz/hsf.hpp"
#include "kxxz/propagator.hpp"
#include "kxxz/writers.hpp"

namespace kxxz {
namespace {

constexpr int kSpectrumMaxL = 14;
// Holding the full eigenvector matrix in memory stops being viable one
// size earlier than the blocked diagonalization.
constexpr int kEigvecsMaxL = 13;

std::string path_join(const std::string& dir, const char* name) {
  return dir + "/" + name;
}

std::string file_head(const RunConfig& cfg, const std::string& columns) {
  return echo_config(cfg) + "# columns: " + columns + "\n";
}

/// Runs body(0..n-1) on up to `workers` threads; the first exception wins
/// and the remaining items are abandoned.
void parallel_for(int workers, std::size_t n,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t w =
      std::min<std::size_t>(std::max(workers, 1), n == 0 ? 1 : n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto drain = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) pool.emplace_back(drain);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::unique_ptr<Propagator> build_engine(const RunConfig& cfg,
                                         const ModelParams& p) {
  return make_propagator(p, parse_evolve_mode(cfg.mode), cfg.krylov_m,
                         cfg.krylov_tol);
}

double resolve_threshold(const RunConfig& cfg, const ModelParams& p,
                         std::uint64_t sector_dim) {
  if (cfg.threshold == "auto") return default_overlap_threshold(p, sector_dim);
  return std::strtod(cfg.threshold.c_str(), nullptr);
}

std::vector<double> list_or(const std::vector<double>& list, double fallback) {
  return list.empty() ? std::vector<double>{fallback} : list;
}

std::vector<int> list_or(const std::vector<int>& list, int fallback) {
  return list.empty() ? std::vector<int>{fallback} : list;
}

void append_scaling_fit(std::string& rep, const ScalingFit& f) {
  rep += "exponent = " + format_double(f.exponent) + '\n';
  rep += "intercept = " + format_double(f.intercept) + '\n';
  rep += "std_error = " + format_double(f.std_error) + '\n';
  rep += "r2 = " + format_double(f.r2) + '\n';
  rep += "points_used = " + std::to_string(f.used) + '\n';
  std::string ex;
  for (int i : f.excluded) ex += (ex.empty() ? "" : ",") + std::to_string(i);
  rep += "points_excluded = " + (ex.empty() ? std::string("none") : ex) + '\n';
  if (!f.note.empty()) rep += "# " + f.note + '\n';
}

}  // namespace

void cmd_evolve(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  if (cfg.steps % 2 != 0)
    throw ConfigError(
        "evolve needs an even number of steps for the return-amplitude "
        "spectrum");
  if (cfg.steps > 65536)
    throw ConfigError("evolve is limited to 65536 steps");
  const int steps = static_cast<int>(cfg.steps);
  ensure_dir(cfg.out_dir);
  const basis_index init = named_state(cfg.initial, p.L);
  auto prop = build_engine(cfg, p);
  const Trajectory traj = run_trajectory(*prop, init, steps);

  std::string cols = "n t F C_even C_odd";
  for (int j = 1; j <= p.L; ++j) cols += " sz_" + std::to_string(j);
  std::string out = file_head(cfg, cols);
  const bool has_c = traj.C_even.size() > 0;
  const std::string nan = "nan";
  for (int n = 0; n <= steps; ++n) {
    out += std::to_string(n);
    out += ' ' + format_double(traj.t[n]);
    out += ' ' + format_double(traj.F[n]);
    out += ' ' + (has_c ? format_double(traj.C_even[n]) : nan);
    out += ' ' + (has_c ? format_double(traj.C_odd[n]) : nan);
    for (int j = 0; j < p.L; ++j) out += ' ' + format_double(traj.sz(n, j));
    out += '\n';
  }
  write_text_file(path_join(cfg.out_dir, "trajectory.dat"), out);

  const FourierSpectrum fs = fourier(traj);
  std::string fout = file_head(cfg, "nu amplitude");
  for (Eigen::Index k = 0; k < fs.nu.size(); ++k)
    fout += format_double(fs.nu[k]) + ' ' + format_double(fs.amplitude[k]) + '\n';
  fout += "# h = " + format_double(fs.h) + '\n';
  write_text_file(path_join(cfg.out_dir, "fourier.dat"), fout);
}

void cmd_spectrum(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  if (p.L > kSpectrumMaxL)
    throw ConfigError("full diagonalization is limited to L <= 14");
  ensure_dir(cfg.out_dir);
  const basis_index init = named_state(cfg.initial, p.L);
  const FloquetSpectrum fs = floquet_spectrum(p);
  const Eigen::VectorXd ov = eigenstate_overlaps(fs, product_state(init, p.L));

  std::string sout = file_head(cfg, "alpha quasi_energy overlap");
  for (Eigen::Index a = 0; a < fs.quasienergies.size(); ++a)
    sout += std::to_string(a) + ' ' + format_double(fs.quasienergies[a]) + ' ' +
            format_double(ov[a]) + '\n';
  write_text_file(path_join(cfg.out_dir, "spectrum.dat"), sout);

  const auto pairs = detect_pi_pairs(fs, ov, cfg.weight_cut, cfg.pair_tol);
  std::string pout = file_head(cfg, "a b gap_T weight offset");
  for (const PiPair& pr : pairs) {
    const double gap_T = std::abs(
        wrap_angle((fs.quasienergies[pr.b] - fs.quasienergies[pr.a]) * p.T));
    pout += std::to_string(pr.a) + ' ' + std::to_string(pr.b) + ' ' +
            format_double(gap_T) + ' ' + format_double(pr.weight) + ' ' +
            format_double(pr.offset) + '\n';
  }
  write_text_file(path_join(cfg.out_dir, "pipairs.dat"), pout);

  const auto beats = beat_frequencies(fs, pairs);
  std::string bout = file_head(cfg, "first second delta nu predicted_nu");
  for (const BeatInfo& bi : beats)
    for (double nu : bi.predicted)
      bout += std::to_string(bi.first) + ' ' + std::to_string(bi.second) + ' ' +
              format_double(bi.delta) + ' ' + format_double(bi.nu) + ' ' +
              format_double(nu) + '\n';
  write_text_file(path_join(cfg.out_dir, "beats.dat"), bout);
}

void cmd_lifetime(const RunConfig& cfg) {
  const ModelParams& base = cfg.params;
  const int sweeps = (cfg.V_list.empty() ? 0 : 1) +
                     (cfg.omega_list.empty() ? 0 : 1) +
                     (cfg.L_list.empty() ? 0 : 1);
  if (sweeps != 1)
    throw ConfigError(
        "lifetime needs exactly one sweep list: V_list, omega_list, or "
        "L_list");
  ensure_dir(cfg.out_dir);
  const EvolveMode mode = parse_evolve_mode(cfg.mode);

  std::string axis = "V";
  std::vector<double> xs = cfg.V_list;
  if (!cfg.omega_list.empty()) {
    axis = "omega";
    xs = cfg.omega_list;
  } else if (!cfg.L_list.empty()) {
    axis = "L";
    xs.assign(cfg.L_list.begin(), cfg.L_list.end());
  }

  std::vector<double> tau(xs.size());
  parallel_for(cfg.workers, xs.size(), [&](std::size_t i) {
    ModelParams p = base;
    if (axis == "V")
      p.V = xs[i];
    else if (axis == "omega")
      p.T = 2.0 * M_PI / xs[i];
    else
      p.L = static_cast<int>(xs[i]);
    p.validate();
    const basis_index init = named_state(cfg.initial, p.L);
    auto prop = make_propagator(p, mode, cfg.krylov_m, cfg.krylov_tol);
    tau[i] = run_lifetime(*prop, init, cfg.touch_tol, cfg.max_steps) / p.T;
  });

  std::string out = file_head(cfg, axis + " tau_over_T");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += format_double(xs[i]) + ' ' + format_double(tau[i]) + '\n';
    pts.emplace_back(xs[i], tau[i]);
  }
  write_text_file(path_join(cfg.out_dir, "lifetime.dat"), out);

  std::string rep = echo_config(cfg);
  try {
    if (axis == "V") {
      rep += "fit = power_law\n";
      append_scaling_fit(rep, power_law_fit(pts));
    } else if (axis == "omega") {
      rep += "fit = flatness\n";
      rep += "flatness = " + format_double(frequency_flatness(pts)) + '\n';
    } else {
      rep += "fit = exponential\n";
      append_scaling_fit(rep, exponential_fit(pts));
    }
  } catch (const ConfigError& e) {
    rep += std::string("# fit failed: ") + e.what() + '\n';
  }
  write_text_file(path_join(cfg.out_dir, "fit_report.txt"), rep);
}

void cmd_hsf(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  if (p.epsilon != 0.0)
    throw ConfigError("fragment detection runs at epsilon = 0");
  if (p.L > kSpectrumMaxL)
    throw ConfigError("fragment detection is limited to L <= 14");
  ensure_dir(cfg.out_dir);

  const SectorTable table = build_sector_table(p.L);
  std::string sout = file_head(cfg, "L q p dim members_count");
  for (const QpClass& c : table.classes)
    sout += std::to_string(p.L) + ' ' + std::to_string(c.q) + ' ' +
            std::to_string(c.p) + ' ' + std::to_string(dim_qp(p.L, c.q, c.p)) +
            ' ' + std::to_string(c.states.size()) + '\n';
  write_text_file(path_join(cfg.out_dir, "sectors.dat"), sout);

  const auto blocked = floquet_spectrum_blocked(p);
  std::string fout = file_head(cfg, "q fragment_id size");
  for (const SectorSpectrum& blk : blocked) {
    const double thr = resolve_threshold(cfg, p, blk.states.size());
    const auto frags = sector_fragments(blk, thr);
    for (std::size_t f = 0; f < frags.size(); ++f)
      fout += std::to_string(blk.q) + ' ' + std::to_string(f) + ' ' +
              std::to_string(frags[f].size()) + '\n';
  }
  write_text_file(path_join(cfg.out_dir, "fragments.dat"), fout);

  const std::vector<double> Vs = list_or(cfg.V_list, p.V);
  std::vector<std::string> chunks(Vs.size());
  parallel_for(cfg.workers, Vs.size(), [&](std::size_t i) {
    ModelParams pv = p;
    pv.V = Vs[i];
    pv.validate();
    std::string rows;
    for (const SectorSpectrum& blk : floquet_spectrum_blocked(pv)) {
      const double thr = resolve_threshold(cfg, pv, blk.states.size());
      rows += format_double(pv.V) + ' ' + std::to_string(blk.q) + ' ' +
              format_double(ratio_q_numerical(blk, thr)) + ' ' +
              format_double(ratio_q_combinatorial(pv.L, blk.q)) + '\n';
    }
    chunks[i] = std::move(rows);
  });
  std::string rout = file_head(cfg, "V q ratio_numerical ratio_combinatorial");
  for (const std::string& c : chunks) rout += c;
  write_text_file(path_join(cfg.out_dir, "rq.dat"), rout);

  std::string mout = file_head(cfg, "row col");
  std::string oout = file_head(cfg, "kind index label");
  if (p.L <= kEigvecsMaxL) {
    const FloquetSpectrum full = floquet_spectrum(p);
    std::uint64_t largest = 0;
    for (int q : charge_values(p.L)) largest = std::max(largest, dim_q(p.L, q));
    const double thr = resolve_threshold(cfg, p, largest);
    const OverlapPattern pat = overlap_matrix(full, thr);
    for (const auto& rc : pat.entries)
      mout += std::to_string(rc.first) + ' ' + std::to_string(rc.second) + '\n';
    for (std::size_t i = 0; i < pat.eig_order.size(); ++i)
      oout += "r " + std::to_string(i) + ' ' + std::to_string(pat.eig_order[i]) +
              '\n';
    for (std::size_t j = 0; j < pat.basis_order.size(); ++j)
      oout += "c " + std::to_string(j) + ' ' +
              to_bitstring(pat.basis_order[j], p.L) + '\n';
  } else {
    const char* skip =
        "# skipped: the permuted pattern needs the full eigenvector matrix, "
        "L <= 13\n";
    mout += skip;
    oout += skip;
  }
  write_text_file(path_join(cfg.out_dir, "overlap_matrix.dat"), mout);
  write_text_file(path_join(cfg.out_dir, "overlap_order.dat"), oout);
}

void cmd_mutualinfo(const RunConfig& cfg) {
  const ModelParams& base = cfg.params;
  const std::vector<double> eps = list_or(cfg.epsilon_list, base.epsilon);
  const std::vector<int> Ls = list_or(cfg.L_list, base.L);
  for (int L : Ls)
    if (L > kEigvecsMaxL)
      throw ConfigError(
          "averaged mutual information needs the full eigensystem, L <= 13");
  ensure_dir(cfg.out_dir);

  struct Cell {
    double eps;
    int L;
    double m_bar;
  };
  std::vector<Cell> cells;
  for (int L : Ls)
    for (double e : eps) cells.push_back({e, L, 0.0});
  parallel_for(cfg.workers, cells.size(), [&](std::size_t i) {
    ModelParams p = base;
    p.L = cells[i].L;
    p.epsilon = cells[i].eps;
    p.validate();
    cells[i].m_bar = floquet_avg_mutual_info(floquet_spectrum(p)).m_bar;
  });

  std::string out = file_head(cfg, "epsilon L V M_bar");
  for (const Cell& c : cells)
    out += format_double(c.eps) + ' ' + std::to_string(c.L) + ' ' +
           format_double(base.V) + ' ' + format_double(c.m_bar) + '\n';
  write_text_file(path_join(cfg.out_dir, "mutualinfo.dat"), out);
}

void cmd_phase_diagram(const RunConfig& cfg) {
  const ModelParams& base = cfg.params;
  if (base.L % 2 != 0)
    throw ConfigError("the subharmonic map needs even L");
  if (cfg.steps < 2 || cfg.steps % 2 != 0 || cfg.steps > 65536)
    throw ConfigError(
        "the subharmonic average needs an even number of steps, at most "
        "65536");
  const std::vector<double> Vs = list_or(cfg.V_list, base.V);
  const std::vector<int> Ls = list_or(cfg.L_list, base.L);
  const std::vector<double> eps = list_or(cfg.epsilon_list, base.epsilon);
  for (int L : Ls)
    if (L > kEigvecsMaxL)
      throw ConfigError(
          "averaged mutual information needs the full eigensystem, L <= 13");
  ensure_dir(cfg.out_dir);

  struct Cell {
    double V;
    int L;
    double eps;
    double m_bar;
  };
  std::vector<Cell> cells;
  for (double V : Vs)
    for (int L : Ls)
      for (double e : eps) cells.push_back({V, L, e, 0.0});
  parallel_for(cfg.workers, cells.size(), [&](std::size_t i) {
    ModelParams p = base;
    p.V = cells[i].V;
    p.L = cells[i].L;
    p.epsilon = cells[i].eps;
    p.validate();
    cells[i].m_bar = floquet_avg_mutual_info(floquet_spectrum(p)).m_bar;
  });

  std::string mout = file_head(cfg, "epsilon L V M_bar");
  for (const Cell& c : cells)
    mout += format_double(c.eps) + ' ' + std::to_string(c.L) + ' ' +
            format_double(c.V) + ' ' + format_double(c.m_bar) + '\n';
  write_text_file(path_join(cfg.out_dir, "mbar.dat"), mout);

  std::string cout_ =
      file_head(cfg, "V epsilon_c gamma mu residual converged degenerate");
  std::string bout = file_head(cfg, "V epsilon_c");
  for (double V : Vs) {
    std::vector<CollapsePoint> data;
    std::map<int, int> per_size;
    for (const Cell& c : cells)
      if (c.V == V) {
        data.push_back({c.L, c.eps, c.m_bar});
        ++per_size[c.L];
      }
    bool enough = per_size.size() >= 2;
    for (const auto& kv : per_size) enough = enough && kv.second >= 8;
    if (!enough) continue;
    const CollapseFit fit = collapse_fit(data);
    cout_ += format_double(V) + ' ' + format_double(fit.epsilon_c) + ' ' +
             format_double(fit.gamma) + ' ' + format_double(fit.mu) + ' ' +
             format_double(fit.residual) + ' ' +
             std::to_string(fit.converged ? 1 : 0) + ' ' +
             std::to_string(fit.degenerate ? 1 : 0) + '\n';
    if (fit.converged && !fit.degenerate)
      bout += format_double(V) + ' ' + format_double(fit.epsilon_c) + '\n';
  }
  write_text_file(path_join(cfg.out_dir, "collapse.dat"), cout_);
  write_text_file(path_join(cfg.out_dir, "boundary.dat"), bout);

  struct HCell {
    double V;
    double eps;
    double h;
  };
  std::vector<HCell> hcells;
  for (double V : Vs)
    for (double e : eps) hcells.push_back({V, e, 0.0});
  parallel_for(cfg.workers, hcells.size(), [&](std::size_t i) {
    ModelParams p = base;
    p.V = hcells[i].V;
    p.epsilon = hcells[i].eps;
    p.validate();
    hcells[i].h = sector_averaged_h(p, static_cast<int>(cfg.steps),
                                    cfg.sample_frac);
  });
  std::string hout = file_head(cfg, "V epsilon h_bar");
  for (const HCell& c : hcells)
    hout += format_double(c.V) + ' ' + format_double(c.eps) + ' ' +
            format_double(c.h) + '\n';
  write_text_file(path_join(cfg.out_dir, "hbar.dat"), hout);
}

double sector_averaged_h(const ModelParams& p, int steps, double sample_frac) {
  p.validate();
  if (p.L % 2 != 0) throw ConfigError("zero magnetization needs even L");
  if (steps > 65536)
    throw ConfigError("the subharmonic average is limited to 65536 steps");
  if (steps < 2 || steps % 2 != 0)
    throw ConfigError(
        "the subharmonic average needs an even number of steps, at least 2");
  if (!(sample_frac > 0.0) || sample_frac > 1.0)
    throw ConfigError("sample_frac must be in (0, 1]");

  std::map<int, std::vector<basis_index>> strata;
  const basis_index D = basis_dim(p.L);
  for (basis_index b = 0; b < D; ++b)
    if (magnetization_m(b, p.L) == 0)
      strata[domain_wall_count(b, p.L)].push_back(b);

  const std::size_t stride =
      static_cast<std::size_t>(std::max(1L, std::lround(1.0 / sample_frac)));
  std::vector<basis_index> chosen;
  for (const auto& kv : strata)
    for (std::size_t i = 0; i < kv.second.size(); i += stride)
      chosen.push_back(kv.second[i]);

  const SectorPropagator prop(p);
  const Eigen::Index M = static_cast<Eigen::Index>(chosen.size());
  Eigen::MatrixXcd cols =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(D), M);
  for (Eigen::Index j = 0; j < M; ++j)
    cols(static_cast<Eigen::Index>(chosen[j]), j) = 1.0;

  Eigen::MatrixXd F(steps + 1, M);
  F.row(0).setOnes();
  Eigen::VectorXcd tmp(static_cast<Eigen::Index>(D));
  for (int n = 1; n <= steps; ++n) {
    for (Eigen::Index j = 0; j < M; ++j) {
      tmp = cols.col(j);
      prop.apply_kick(tmp);
      cols.col(j) = tmp;
    }
    prop.apply_interaction_batch(cols);
    for (Eigen::Index j = 0; j < M; ++j)
      F(n, j) = std::abs(cols(static_cast<Eigen::Index>(chosen[j]), j));
  }

  Trajectory traj;
  traj.params = p;
  traj.steps = steps;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < M; ++j) {
    traj.F = F.col(j);
    acc += fourier(traj).h;
  }
  return acc / static_cast<double>(M);
}

void run_scenario(const RunConfig& cfg) {
  if (cfg.scenario == "evolve") return cmd_evolve(cfg);
  if (cfg.scenario == "spectrum") return cmd_spectrum(cfg);
  if (cfg.scenario == "lifetime") return cmd_lifetime(cfg);
  if (cfg.scenario == "hsf") return cmd_hsf(cfg);
  if (cfg.scenario == "mutualinfo") return cmd_mutualinfo(cfg);
  if (cfg.scenario == "phase-diagram") return cmd_phase_diagram(cfg);
  throw ConfigError("no scenario selected");
}

}  // namespace kxxz
