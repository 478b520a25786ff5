#include "kxxz/writers.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "kxxz/model.hpp"

namespace kxxz {

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw ConfigError("cannot create directory '" + path + "'");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace kxxz
