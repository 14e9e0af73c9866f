#include "gqlimit/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include "gqlimit/errors.hpp"

#ifndef GQLIMIT_VERSION
#define GQLIMIT_VERSION "0.0.0"
#endif

namespace gqlimit {

const char* code_version() { return GQLIMIT_VERSION; }

std::string format_g17(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

}  // namespace gqlimit
