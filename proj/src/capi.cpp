#include "kxxz.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "kxxz/basis.hpp"
#include "kxxz/config.hpp"
#include "kxxz/hsf.hpp"
#include "kxxz/scenarios.hpp"

struct kxxz_config {
  kxxz::RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
kxxz_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return KXXZ_OK;
  } catch (const kxxz::ConfigError& e) {
    g_last_error = e.what();
    return KXXZ_ERR_CONFIG;
  } catch (const kxxz::NumericalError& e) {
    g_last_error = e.what();
    return KXXZ_ERR_NUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KXXZ_ERR;
  } catch (...) {
    g_last_error = "unknown failure";
    return KXXZ_ERR;
  }
}

kxxz_status null_handle() {
  g_last_error = "null handle";
  return KXXZ_ERR_CONFIG;
}

}  // namespace

extern "C" {

kxxz_config* kxxz_config_create(void) {
  return new (std::nothrow) kxxz_config{};
}

void kxxz_config_destroy(kxxz_config* cfg) { delete cfg; }

kxxz_status kxxz_config_set(kxxz_config* cfg, const char* key,
                            const char* value) {
  if (!cfg || !key || !value) return null_handle();
  return guarded([&] { kxxz::apply_key(cfg->cfg, key, value); });
}

kxxz_status kxxz_config_load_file(kxxz_config* cfg, const char* path) {
  if (!cfg || !path) return null_handle();
  return guarded([&] { cfg->cfg = kxxz::load_config_file(path, cfg->cfg); });
}

char* kxxz_config_echo(const kxxz_config* cfg) {
  if (!cfg) return nullptr;
  try {
    const std::string echo = kxxz::echo_config(cfg->cfg);
    char* out = static_cast<char*>(std::malloc(echo.size() + 1));
    if (out) std::memcpy(out, echo.c_str(), echo.size() + 1);
    return out;
  } catch (...) {
    return nullptr;
  }
}

void kxxz_string_free(char* s) { std::free(s); }

kxxz_status kxxz_run(kxxz_config* cfg, const char* scenario) {
  if (!cfg) return null_handle();
  return guarded([&] {
    if (scenario) kxxz::apply_key(cfg->cfg, "scenario", scenario);
    kxxz::run_scenario(cfg->cfg);
  });
}

const char* kxxz_last_error(void) { return g_last_error.c_str(); }

uint64_t kxxz_dim_q(int L, int q) {
  try {
    return kxxz::dim_q(L, q);
  } catch (...) {
    return 0;
  }
}

uint64_t kxxz_dim_qp(int L, int q, int p) {
  try {
    return kxxz::dim_qp(L, q, p);
  } catch (...) {
    return 0;
  }
}

double kxxz_ratio_q_combinatorial(int L, int q) {
  try {
    return kxxz::ratio_q_combinatorial(L, q);
  } catch (...) {
    return 0.0;
  }
}

kxxz_status kxxz_named_state(const char* name, int L, uint64_t* bits) {
  if (!name || !bits) return null_handle();
  return guarded([&] { *bits = kxxz::named_state(name, L); });
}

const char* kxxz_version(void) { return "1.0.0"; }

}  // extern "C"
