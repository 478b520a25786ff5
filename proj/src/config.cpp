#include "kxxz/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kxxz/propagator.hpp"
#include "kxxz/writers.hpp"

namespace kxxz {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace((unsigned char)s[a])) ++a;
  while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
  return s.substr(a, b - a);
}

long parse_long(const std::string& key, const std::string& v) {
  size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + " wants an integer, got '" + v + "'");
  }
  if (used != v.size())
    throw ConfigError(key + " wants an integer, got '" + v + "'");
  return x;
}

double parse_real(const std::string& key, const std::string& v) {
  size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + " wants a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(x))
    throw ConfigError(key + " wants a finite number, got '" + v + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& key,
                                    const std::string& v) {
  std::vector<std::string> items;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key + " has an empty list element");
    items.push_back(item);
  }
  if (items.empty() || v.back() == ',')
    throw ConfigError(key + " wants a comma-separated list");
  return items;
}

const char* known_scenarios[] = {"evolve",     "spectrum",   "lifetime",
                                 "hsf",        "mutualinfo", "phase-diagram"};

}  // namespace

void apply_key(RunConfig& cfg, const std::string& key,
               const std::string& value) {
  const std::string v = trim(value);
  if (key == "scenario") {
    for (const char* s : known_scenarios)
      if (v == s) {
        cfg.scenario = v;
        return;
      }
    throw ConfigError("unknown scenario '" + v + "'");
  }
  if (key == "L") {
    const long L = parse_long(key, v);
    if (L < 1 || L > 24) throw ConfigError("L must be in [1, 24]");
    cfg.params.L = (int)L;
    return;
  }
  if (key == "J") {
    cfg.params.J = parse_real(key, v);
    return;
  }
  if (key == "V") {
    cfg.params.V = parse_real(key, v);
    return;
  }
  if (key == "T") {
    const double T = parse_real(key, v);
    if (T <= 0.0) throw ConfigError("T must be positive");
    cfg.params.T = T;
    return;
  }
  if (key == "epsilon") {
    cfg.params.epsilon = parse_real(key, v);
    return;
  }
  if (key == "initial") {
    if (v.empty()) throw ConfigError("initial state must not be empty");
    cfg.initial = v;
    return;
  }
  if (key == "steps") {
    const long n = parse_long(key, v);
    if (n < 1) throw ConfigError("steps must be positive");
    cfg.steps = n;
    return;
  }
  if (key == "out") {
    if (v.empty()) throw ConfigError("out must not be empty");
    cfg.out_dir = v;
    return;
  }
  if (key == "workers") {
    const long n = parse_long(key, v);
    if (n < 1 || n > 256) throw ConfigError("workers must be in [1, 256]");
    cfg.workers = (int)n;
    return;
  }
  if (key == "mode") {
    parse_evolve_mode(v);  // validates
    cfg.mode = v;
    return;
  }
  if (key == "krylov_m") {
    const long m = parse_long(key, v);
    if (m < 2 || m > 200) throw ConfigError("krylov_m must be in [2, 200]");
    cfg.krylov_m = (int)m;
    return;
  }
  if (key == "krylov_tol") {
    const double t = parse_real(key, v);
    if (t <= 0.0) throw ConfigError("krylov_tol must be positive");
    cfg.krylov_tol = t;
    return;
  }
  if (key == "weight_cut") {
    const double w = parse_real(key, v);
    if (w < 0.0 || w > 1.0) throw ConfigError("weight_cut must be in [0, 1]");
    cfg.weight_cut = w;
    return;
  }
  if (key == "pair_tol") {
    const double t = parse_real(key, v);
    if (t <= 0.0) throw ConfigError("pair_tol must be positive");
    cfg.pair_tol = t;
    return;
  }
  if (key == "touch_tol") {
    const double t = parse_real(key, v);
    if (t <= 0.0 || t >= 2.0) throw ConfigError("touch_tol must be in (0, 2)");
    cfg.touch_tol = t;
    return;
  }
  if (key == "max_steps") {
    const long n = parse_long(key, v);
    if (n < 1) throw ConfigError("max_steps must be positive");
    cfg.max_steps = n;
    return;
  }
  if (key == "threshold") {
    if (v != "auto") {
      const double t = parse_real(key, v);
      if (t <= 0.0) throw ConfigError("threshold must be positive or auto");
    }
    cfg.threshold = v;
    return;
  }
  if (key == "sample_frac") {
    const double f = parse_real(key, v);
    if (f <= 0.0 || f > 1.0) throw ConfigError("sample_frac must be in (0, 1]");
    cfg.sample_frac = f;
    return;
  }
  if (key == "L_list") {
    cfg.L_list.clear();
    for (const auto& item : split_list(key, v)) {
      const long L = parse_long(key, item);
      if (L < 1 || L > 24) throw ConfigError("L_list entries must be in [1, 24]");
      cfg.L_list.push_back((int)L);
    }
    return;
  }
  if (key == "V_list" || key == "omega_list" || key == "epsilon_list") {
    auto& dst = key == "V_list"       ? cfg.V_list
                : key == "omega_list" ? cfg.omega_list
                                      : cfg.epsilon_list;
    dst.clear();
    for (const auto& item : split_list(key, v)) {
      const double x = parse_real(key, item);
      if (key != "epsilon_list" && x <= 0.0)
        throw ConfigError(key + " entries must be positive");
      dst.push_back(x);
    }
    return;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    try {
      apply_key(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " +
                        e.what());
    }
  }
  return base;
}

std::string echo_config(const RunConfig& cfg) {
  std::string out;
  auto put = [&](const std::string& key, const std::string& value) {
    out += "# " + key + " = " + value + "\n";
  };
  auto put_list = [&](const std::string& key, const auto& list) {
    if (list.empty()) return;
    std::string joined;
    for (size_t i = 0; i < list.size(); ++i) {
      if (i) joined += ",";
      if constexpr (std::is_same_v<std::decay_t<decltype(list[0])>, int>)
        joined += std::to_string(list[i]);
      else
        joined += format_double(list[i]);
    }
    put(key, joined);
  };
  if (!cfg.scenario.empty()) put("scenario", cfg.scenario);
  put("L", std::to_string(cfg.params.L));
  put("J", format_double(cfg.params.J));
  put("V", format_double(cfg.params.V));
  put("T", format_double(cfg.params.T));
  put("epsilon", format_double(cfg.params.epsilon));
  put("initial", cfg.initial);
  put("steps", std::to_string(cfg.steps));
  put("out", cfg.out_dir);
  put("workers", std::to_string(cfg.workers));
  put("mode", cfg.mode);
  put("krylov_m", std::to_string(cfg.krylov_m));
  put("krylov_tol", format_double(cfg.krylov_tol));
  put("weight_cut", format_double(cfg.weight_cut));
  put("pair_tol", format_double(cfg.pair_tol));
  put("touch_tol", format_double(cfg.touch_tol));
  put("max_steps", std::to_string(cfg.max_steps));
  put("threshold", cfg.threshold);
  put("sample_frac", format_double(cfg.sample_frac));
  put_list("L_list", cfg.L_list);
  put_list("V_list", cfg.V_list);
  put_list("omega_list", cfg.omega_list);
  put_list("epsilon_list", cfg.epsilon_list);
  return out;
}

}  // namespace kxxz
