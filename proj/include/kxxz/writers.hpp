#pragma once
#include <string>

namespace kxxz {

/// %.12g rendering; infinities come out as "inf" / "-inf" so capped
/// lifetimes survive a round trip through the output tables.
std::string format_double(double x);

/// mkdir -p. Throws ConfigError on failure.
void ensure_dir(const std::string& path);

/// Writes content atomically enough for our purposes (single writer).
/// Throws ConfigError when the file cannot be created or written.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace kxxz
