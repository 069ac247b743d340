#pragma once

#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <string>

#include "CLI11.hpp"
#include "graphfluct/config.hpp"

namespace gf::tools {

inline constexpr int kExitConfig = 2;
inline constexpr int kExitReplica = 3;

// Runs body() and maps failures onto the exit codes.
inline int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace gf::tools

using gf::json;
