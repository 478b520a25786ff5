#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kxxz.h"

namespace {

struct KeyFlag {
  const char* key;
  const char* flag;
  const char* help;
};

// Flag spellings swap underscores for dashes; values are passed through
// verbatim so the library is the single validator.
const KeyFlag kFlags[] = {
    {"L", "--L", "chain length"},
    {"J", "--J", "hopping strength"},
    {"V", "--V", "Ising interaction strength"},
    {"T", "--T", "driving period"},
    {"epsilon", "--epsilon", "kick detuning from the perfect flip"},
    {"initial", "--initial", "initial product state (neel, domain_wall, all_up, or a [ud] string)"},
    {"steps", "--steps", "periods to evolve"},
    {"out", "--out", "output directory"},
    {"workers", "--workers", "worker threads for sweeps"},
    {"mode", "--mode", "evolution engine: auto|dense|sector|krylov"},
    {"krylov_m", "--krylov-m", "Lanczos basis size"},
    {"krylov_tol", "--krylov-tol", "Krylov error tolerance per period"},
    {"weight_cut", "--weight-cut", "pi-pair overlap cut as a fraction of the largest"},
    {"pair_tol", "--pair-tol", "pi-pair gap tolerance in radians"},
    {"touch_tol", "--touch-tol", "envelope touch tolerance for the lifetime"},
    {"max_steps", "--max-steps", "lifetime step cap"},
    {"threshold", "--threshold", "fragment amplitude cut, auto or a number"},
    {"sample_frac", "--sample-frac", "initial-state subsample fraction for the subharmonic map"},
    {"L_list", "--L-list", "comma list of chain lengths"},
    {"V_list", "--V-list", "comma list of interaction strengths"},
    {"omega_list", "--omega-list", "comma list of driving frequencies"},
    {"epsilon_list", "--epsilon-list", "comma list of detunings"},
};
constexpr std::size_t kNumFlags = sizeof(kFlags) / sizeof(kFlags[0]);

struct SubOpts {
  CLI::App* sub = nullptr;
  std::string config_path;
  CLI::Option* config_opt = nullptr;
  std::string values[kNumFlags];
  CLI::Option* opts[kNumFlags] = {};
};

void register_sub(CLI::App& app, SubOpts& so, const char* name,
                  const char* desc) {
  so.sub = app.add_subcommand(name, desc);
  so.config_opt = so.sub->add_option("--config", so.config_path,
                                     "config file applied before flags");
  for (std::size_t i = 0; i < kNumFlags; ++i)
    so.opts[i] = so.sub->add_option(kFlags[i].flag, so.values[i],
                                    kFlags[i].help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Kicked XXZ spin chain: subharmonic diagnostics and Hilbert-space "
      "fragmentation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return kxxz_version(); });

  const struct {
    const char* name;
    const char* desc;
  } scenarios[] = {
      {"evolve", "stroboscopic trajectory and return-amplitude spectrum"},
      {"spectrum", "quasienergy spectrum, pi pairs, beat predictions"},
      {"lifetime", "subharmonic lifetime sweep and scaling fit"},
      {"hsf", "sector census, fragments, ratios, overlap pattern"},
      {"mutualinfo", "averaged edge mutual information grid"},
      {"phase-diagram", "mutual-information grids, collapse fits, subharmonic map"},
  };
  std::vector<SubOpts> subs(6);
  for (int i = 0; i < 6; ++i)
    register_sub(app, subs[i], scenarios[i].name, scenarios[i].desc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const SubOpts* chosen = nullptr;
  for (const SubOpts& so : subs)
    if (so.sub->parsed()) chosen = &so;
  if (!chosen) {
    std::fprintf(stderr, "error: no scenario selected\n");
    return 2;
  }

  kxxz_config* cfg = kxxz_config_create();
  if (!cfg) {
    std::fprintf(stderr, "error: out of memory\n");
    return 1;
  }
  kxxz_status st = KXXZ_OK;
  if (chosen->config_opt->count() > 0)
    st = kxxz_config_load_file(cfg, chosen->config_path.c_str());
  for (std::size_t i = 0; i < kNumFlags && st == KXXZ_OK; ++i)
    if (chosen->opts[i]->count() > 0)
      st = kxxz_config_set(cfg, kFlags[i].key, chosen->values[i].c_str());
  if (st == KXXZ_OK) st = kxxz_run(cfg, chosen->sub->get_name().c_str());

  int rc = 0;
  if (st != KXXZ_OK) {
    std::fprintf(stderr, "error: %s\n", kxxz_last_error());
    rc = st == KXXZ_ERR_NUMERIC ? 3 : 2;
  }
  kxxz_config_destroy(cfg);
  return rc;
}
