#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "graphfluct/graph.hpp"
#include "graphfluct/rng.hpp"

namespace testing {

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("graphfluct-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<double> uniform_phases(size_t n, uint64_t seed) {
  gf::Rng rng(seed, gf::Stream::Init, 999);
  std::vector<double> x(n);
  for (double& v : x) v = 6.283185307179586 * rng.uniform();
  return x;
}

inline std::vector<std::vector<int>> random_adjacency(size_t n, double p, uint64_t seed) {
  gf::Rng rng(seed, gf::Stream::Graph, 999);
  std::vector<std::vector<int>> xi(n, std::vector<int>(n));
  for (auto& row : xi)
    for (int& e : row) e = rng.bernoulli(p) ? 1 : 0;
  return xi;
}

}  // namespace testing
