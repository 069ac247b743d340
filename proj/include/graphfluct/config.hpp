#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphfluct/dynamics.hpp"
#include "graphfluct/initcond.hpp"
#include "graphfluct/kernel.hpp"

namespace gf {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphParams {
  size_t n = 1000;
  std::vector<size_t> n_grid;
  double p = 0.5;
  bool symmetric = false;
  bool self_loops = true;
  bool sbm = false;
  double p_intra = 0.0, q_inter = 0.0;
  bool annealed = true;  // fresh graph per replica; otherwise one graph per (n, p)
};

struct KernelParams {
  std::string type = "kuramoto";  // kuramoto | zero | modes
  double K = 2.0;
  std::vector<KernelMode> modes;
  std::vector<DriftMode> intrinsic;
};

struct SimParams {
  double dt = 1e-3;
  double T = 1.0;
  std::vector<double> snapshots;
  Renorm renorm = Renorm::Expected;
};

struct LimitParams {
  int A_max = 32;
  double dt = 1e-3;
};

struct OutputParams {
  std::string dir = "out";
  std::string store = "moments";  // moments | phases
  int A_store = 8;
  size_t bins = 0;                      // histogram bins; 0 selects Freedman–Diaconis
  std::vector<std::string> statistics;  // name prefixes kept in stats.csv; empty keeps all
};

struct ExperimentConfig {
  std::string experiment;
  size_t replicas = 1;
  uint64_t seed = 1;
  size_t chunk = 100;
  int workers = 0;  // 0 keeps the OpenMP default
  GraphParams graph;
  KernelParams kernel;
  InitSpec init;
  SimParams sim;
  LimitParams limit;
  json params = json::object();  // experiment-specific knobs
  OutputParams output;
  json raw;

  std::string hash() const;  // FNV-1a of the canonical JSON, 16 hex digits
};

const std::vector<std::string>& experiment_ids();

// Validates every key against the schema before anything runs; throws ConfigError.
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::string& path);

KernelSpec make_kernel(const KernelParams& k);
InitSpec make_init(const json& j, uint64_t seed);

// Typed access to `params` with defaults.
template <class T>
T param(const ExperimentConfig& c, const std::string& key, T fallback) {
  return c.params.contains(key) ? c.params.at(key).get<T>() : fallback;
}

std::string fnv1a_hex(const std::string& s);

}  // namespace gf
