#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "graphfluct/graph.hpp"
#include "graphfluct/kernel.hpp"
#include "graphfluct/state.hpp"

namespace gf {

enum class Renorm { Expected, Actual };

struct SimConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  std::vector<double> snapshot_times;  // empty means {t_final}
  Renorm renorm = Renorm::Expected;
  uint64_t seed = 0;  // Brownian seed
  uint64_t replica = 0;
  bool parallel = true;
  bool keep_states = true;
  bool check_bounds = false;  // assert the drift bound every step
};

struct Provenance {
  uint64_t graph_seed = 0;
  uint64_t init_seed = 0;
  uint64_t noise_seed = 0;
  uint64_t replica = 0;
  std::string config_hash;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ParticleState> states;  // empty when keep_states is off
  Provenance provenance;
  size_t zero_degree_vertices = 0;
};

// Evaluates drift_i = F(θ_i) + (1/D_i) Σ_j ξ_ij Γ(θ_i, θ_j).
// Spectral kernels go through masked row sums of cos/sin columns; other kernels
// loop over present edges.
class DriftEngine {
 public:
  DriftEngine(const Graph& g, const KernelSpec& k, Renorm renorm, bool parallel = true);

  void operator()(const std::vector<double>& phases, std::vector<double>& out);

  // Vertices whose drift was zeroed because their actual degree is 0.
  size_t zero_degree_vertices() const { return zero_degree_; }
  // ‖F‖∞ + ‖Γ‖∞ · max_i d_i / D_i.
  double drift_bound() const { return bound_; }

 private:
  void interaction_spectral(const std::vector<double>& phases, std::vector<double>& out);
  void interaction_generic(const std::vector<double>& phases, std::vector<double>& out);

  const Graph& g_;
  const KernelSpec& k_;
  bool parallel_;
  std::vector<double> inv_deg_;  // 1/D_i, or 0 for a zero-degree vertex
  size_t zero_degree_ = 0;
  double bound_ = 0.0;
  std::vector<int> freqs_;      // distinct |β| > 0 appearing in the kernel
  bool needs_degree_ = false;   // some mode has β = 0
  std::vector<double> degree_;  // d_i as double
  std::vector<double> cols_;    // cos/sin columns, padded
  std::vector<double> sums_;
};

// Serial reference: plain double loop over the Γ evaluator.
void drift_reference(const Graph& g, const KernelSpec& k, Renorm renorm, const std::vector<double>& phases,
                     std::vector<double>& out);

// One Euler–Maruyama step with the given Brownian increments (each N(0, dt)).
ParticleState step(const ParticleState& state, const Graph& g, const KernelSpec& k, const SimConfig& cfg,
                   const std::vector<double>& increments);

// Called once per step with the pre-step state, its drift and the Brownian increments.
using StepObserver = std::function<void(const ParticleState& before, const std::vector<double>& drift,
                                        const std::vector<double>& increments, double dt)>;
// Called at every snapshot time.
using SnapshotObserver = std::function<void(const ParticleState& state)>;

// Snapshot times are mapped to step indices round(t/dt). Increments come from the
// (seed, Noise, replica) stream, n normals per step in particle order.
Trajectory simulate(const Graph& g, const ParticleState& init, const KernelSpec& k, const SimConfig& cfg,
                    const StepObserver& on_step = {}, const SnapshotObserver& on_snapshot = {});

// Replicas on one shared graph, advanced together so the interaction sums become a dense
// product per step. Spectral kernels only. Replica r draws from (cfg.seed, Noise, replicas[r])
// exactly as simulate() does; results agree with it up to summation order. Returns the
// states at cfg.t_final.
std::vector<ParticleState> simulate_batch(const Graph& g, const std::vector<ParticleState>& inits,
                                          const std::vector<uint64_t>& replicas, const KernelSpec& k,
                                          const SimConfig& cfg);

struct OrderParameter {
  double r = 0.0;
  double psi = 0.0;  // in [0, 2π)
};

OrderParameter order_parameter(const AtomicMeasure& m);
OrderParameter order_parameter(const std::vector<double>& phases);

}  // namespace gf
