#pragma once

#include <string>

namespace gqlimit {

inline constexpr int kSchemaVersion = 1;

const char* code_version();

/// Shortest round-trip-safe decimal form ("%.17g"), locale independent.
std::string format_g17(double v);

/// Writes `content` to `path`, throwing ConfigError when the file cannot be opened.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gqlimit
