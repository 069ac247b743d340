#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "graphfluct/config.hpp"
#include "graphfluct/dynamics.hpp"
#include "graphfluct/graph.hpp"
#include "graphfluct/initcond.hpp"
#include "graphfluct/limits.hpp"
#include "graphfluct/measures.hpp"

namespace gf {

// One StatTable row.
struct StatRow {
  uint64_t replica = 0;
  double time = 0.0;
  std::string statistic;
  double value = 0.0;
};

bool operator<(const StatRow& a, const StatRow& b);

// Values of one statistic in replica order; time < 0 matches any time.
std::vector<double> select(const std::vector<StatRow>& rows, const std::string& statistic, double time = -1.0);
// Distinct statistic names, sorted.
std::vector<std::string> statistics(const std::vector<StatRow>& rows);

// Replica key for sub-streams: one independent stream family per (group, replica).
inline uint64_t unit_id(uint64_t group, uint64_t replica) { return (group << 32) | replica; }

// Graph of the configured family at size n and edge probability p. p = 1 without the block
// model gives the complete graph, which does not depend on the seed.
Graph experiment_graph(const GraphParams& gp, size_t n, double p, uint64_t seed, uint64_t replica);

// Initial law μ₀ in Fourier form (atoms are transformed exactly up to a_max).
SpectralField reference_field(const InitSpec& init, int a_max);
// Fokker–Planck solution started from μ₀ over [0, T].
MuTrajectory reference_trajectory(const ExperimentConfig& c, int a_max);
// (r_T, ψ_T) of the limit.
OrderParameter psi_reference(const ExperimentConfig& c);
// √n·wrap(ψⁿ − ψ).
double psi_statistic(const OrderParameter& particles, const OrderParameter& limit, size_t n);
// D = √(np)·n⁻¹ Σ_j ξ̂_lj from the degree d of vertex l.
double degree_fluctuation(size_t degree, size_t n, double p);

// An experiment as a set of replica chunks. Rows of a chunk depend only on the config and
// the chunk range, so chunks can run in any order, on any thread, and be resumed.
class Pipeline {
 public:
  virtual ~Pipeline() = default;
  virtual size_t replicas() const = 0;
  virtual std::vector<StatRow> run_chunk(uint64_t first, uint64_t count) const = 0;
  // Experiment-level results over all rows (rows sorted).
  virtual json summarize(const std::vector<StatRow>& rows) const = 0;
  // Statistics written as histograms.
  virtual std::vector<std::string> histogram_statistics(const std::vector<StatRow>& rows) const = 0;
};

std::unique_ptr<Pipeline> make_pipeline(const ExperimentConfig& c);

struct ReplicaFailure {
  uint64_t replica = 0;
  std::string error;
};

struct Collected {
  std::vector<StatRow> rows;  // sorted
  std::vector<ReplicaFailure> failures;
  json summary;
};

// All chunks in memory; failing chunks are retried replica by replica so that a failure is
// recorded against single replicas.
Collected collect(const ExperimentConfig& c, bool parallel = true);

struct RunResult {
  std::string dir;
  bool skipped = false;  // completed earlier with the same config hash
  Collected data;
};

// Writes <output.dir>/<experiment>-<hash>/ with per-chunk JSONL, stats.csv, summary.csv,
// summary.json, histogram CSVs and plot.py. Completed chunks found on disk are reused; a
// finished directory makes the call a no-op.
RunResult run(const ExperimentConfig& c, bool parallel = true);

}  // namespace gf
