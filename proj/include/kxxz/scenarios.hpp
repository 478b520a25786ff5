#pragma once
#include <string>
#include <vector>

#include "kxxz/config.hpp"

namespace kxxz {

/// Runs the scenario named in cfg.scenario end to end and writes its data
/// files into cfg.out_dir. Every file starts with the echoed config.
/// Throws ConfigError / NumericalError like the modules underneath.
void run_scenario(const RunConfig& cfg);

/// Stroboscopic trajectory plus Fourier spectrum of the return amplitude:
/// trajectory.dat, fourier.dat.
void cmd_evolve(const RunConfig& cfg);

/// Quasienergy spectrum, initial-state overlaps, pi pairs, beat
/// frequencies: spectrum.dat, pipairs.dat, beats.dat. L <= 14.
void cmd_spectrum(const RunConfig& cfg);

/// Lifetime sweep over exactly one of V_list, omega_list, L_list:
/// lifetime.dat plus fit_report.txt with the matching scaling fit.
void cmd_lifetime(const RunConfig& cfg);

/// Charge/wall-count sector census and fragment detection at epsilon = 0:
/// sectors.dat, fragments.dat, rq.dat, overlap_matrix.dat,
/// overlap_order.dat. L <= 14.
void cmd_hsf(const RunConfig& cfg);

/// Floquet-averaged edge mutual information over epsilon_list x L_list:
/// mutualinfo.dat.
void cmd_mutualinfo(const RunConfig& cfg);

/// Mutual-information grids, per-V collapse fits with the phase boundary,
/// and the sector-averaged subharmonic map: mbar.dat, collapse.dat,
/// boundary.dat, hbar.dat.
void cmd_phase_diagram(const RunConfig& cfg);

/// Average subharmonic amplitude over the zero-magnetization product
/// states, batched through one propagator. sample_frac < 1 keeps every
/// round(1/sample_frac)-th state of each wall-count stratum.
double sector_averaged_h(const ModelParams& p, int steps, double sample_frac);

}  // namespace kxxz
