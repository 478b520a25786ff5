#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "kxxz/config.hpp"
#include "kxxz/writers.hpp"

using namespace kxxz;

namespace {

std::string temp_config(const std::string& body, const char* name) {
  std::string path = std::string("/tmp/kxxz_test_") + name + ".cfg";
  std::ofstream out(path, std::ios::trunc);
  out << body;
  return path;
}

RunConfig parse_echo(const std::string& echoed) {
  RunConfig cfg;
  std::stringstream ss(echoed);
  std::string line;
  while (std::getline(ss, line)) {
    REQUIRE(line.rfind("# ", 0) == 0);
    const size_t eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    const std::string key = line.substr(2, eq - 3);
    apply_key(cfg, key, line.substr(eq + 1));
  }
  return cfg;
}

}  // namespace

TEST_CASE("defaults match the documented values") {
  RunConfig cfg;
  CHECK(cfg.params.J == 1.0);
  CHECK(cfg.params.V == 1.0);
  CHECK(cfg.params.T == 1.0);
  CHECK(cfg.params.epsilon == 0.0);
  CHECK(cfg.initial == "neel");
  CHECK(cfg.steps == 500);
  CHECK(cfg.workers == 1);
  CHECK(cfg.mode == "auto");
  CHECK(cfg.krylov_m == 30);
  CHECK(cfg.krylov_tol == 1e-10);
  CHECK(cfg.weight_cut == 0.1);
  CHECK(cfg.pair_tol == 0.05);
  CHECK(cfg.touch_tol == 0.05);
  CHECK(cfg.max_steps == 100000);
  CHECK(cfg.threshold == "auto");
  CHECK(cfg.sample_frac == 1.0);
  CHECK(cfg.L_list.empty());
}

TEST_CASE("apply_key parses and validates each setting") {
  RunConfig cfg;
  apply_key(cfg, "L", "12");
  apply_key(cfg, "V", "1000");
  apply_key(cfg, "epsilon", "0.01");
  apply_key(cfg, "initial", "domain_wall");
  apply_key(cfg, "steps", "500");
  apply_key(cfg, "mode", "sector");
  apply_key(cfg, "threshold", "0.001");
  apply_key(cfg, "V_list", "10, 15,20");
  CHECK(cfg.params.L == 12);
  CHECK(cfg.params.V == 1000.0);
  CHECK(cfg.initial == "domain_wall");
  CHECK(cfg.mode == "sector");
  CHECK(cfg.threshold == "0.001");
  CHECK(cfg.V_list == std::vector<double>{10.0, 15.0, 20.0});
}

TEST_CASE("bad keys and values are rejected") {
  RunConfig cfg;
  CHECK_THROWS_AS(apply_key(cfg, "window", "8"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "L", "banana"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "L", "12.5"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "L", "25"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "steps", "-3"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "T", "0"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "epsilon", "nan"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "mode", "quantum"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "workers", "0"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "weight_cut", "1.5"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "threshold", "-0.1"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "threshold", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "scenario", "dance"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "V_list", "10,,20"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "V_list", "10,20,"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "V_list", "10,-4"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "L_list", "8,27"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "sample_frac", "0"), ConfigError);
  CHECK_THROWS_AS(apply_key(cfg, "sample_frac", "1.5"), ConfigError);
}

TEST_CASE("config files are parsed with comments and blanks") {
  const auto path = temp_config(
      "# lifetime sweep\n"
      "\n"
      "L = 12\n"
      "V_list = 10,15,20,30,40\n"
      "  touch_tol = 0.05  \n"
      "max_steps = 320000\n",
      "parse");
  const auto cfg = load_config_file(path);
  CHECK(cfg.params.L == 12);
  CHECK(cfg.V_list.size() == 5);
  CHECK(cfg.max_steps == 320000);
  std::remove(path.c_str());
}

TEST_CASE("file errors carry the offending line") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/kxxz.cfg"), ConfigError);

  const auto bad = temp_config("L = 12\nnonsense line\n", "badline");
  CHECK_THROWS_WITH_AS(load_config_file(bad),
                       doctest::Contains(":2:"), ConfigError);
  std::remove(bad.c_str());

  const auto unknown = temp_config("L = 12\nwindow = 9\n", "unknown");
  CHECK_THROWS_WITH_AS(load_config_file(unknown),
                       doctest::Contains("window"), ConfigError);
  std::remove(unknown.c_str());
}

TEST_CASE("flags override file values override defaults") {
  const auto path = temp_config("L = 10\nsteps = 200\n", "precedence");
  RunConfig cfg = load_config_file(path);
  CHECK(cfg.params.L == 10);
  CHECK(cfg.steps == 200);
  CHECK(cfg.workers == 1);
  apply_key(cfg, "steps", "700");
  CHECK(cfg.steps == 700);
  CHECK(cfg.params.L == 10);
  std::remove(path.c_str());
}

TEST_CASE("the echoed header reproduces the config") {
  RunConfig cfg;
  apply_key(cfg, "scenario", "lifetime");
  apply_key(cfg, "L", "12");
  apply_key(cfg, "V", "1000");
  apply_key(cfg, "T", "0.5");
  apply_key(cfg, "epsilon", "0.01");
  apply_key(cfg, "initial", "uddu");
  apply_key(cfg, "steps", "500");
  apply_key(cfg, "out", "runs/a");
  apply_key(cfg, "workers", "2");
  apply_key(cfg, "mode", "krylov");
  apply_key(cfg, "krylov_tol", "1e-09");
  apply_key(cfg, "V_list", "10,15,20,30,40");
  apply_key(cfg, "epsilon_list", "0,0.01,0.02");
  apply_key(cfg, "sample_frac", "0.1");

  const RunConfig back = parse_echo(echo_config(cfg));
  CHECK(back.scenario == cfg.scenario);
  CHECK(back.params.L == cfg.params.L);
  CHECK(back.params.J == cfg.params.J);
  CHECK(back.params.V == cfg.params.V);
  CHECK(back.params.T == cfg.params.T);
  CHECK(back.params.epsilon == cfg.params.epsilon);
  CHECK(back.initial == cfg.initial);
  CHECK(back.steps == cfg.steps);
  CHECK(back.out_dir == cfg.out_dir);
  CHECK(back.workers == cfg.workers);
  CHECK(back.mode == cfg.mode);
  CHECK(back.krylov_tol == cfg.krylov_tol);
  CHECK(back.sample_frac == cfg.sample_frac);
  CHECK(back.V_list == cfg.V_list);
  CHECK(back.epsilon_list == cfg.epsilon_list);
  CHECK(back.L_list.empty());
  CHECK(echo_config(back) == echo_config(cfg));
}

TEST_CASE("format_double spells infinities as sentinels") {
  CHECK(format_double(0.04) == "0.04");
  CHECK(format_double(1e-10) == "1e-10");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}
