#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gf {

struct GraphInfo {
  size_t n = 0;
  double p = 1.0;  // edge probability; for the block model the mean r = (p_intra + q_inter)/2
  bool symmetric = false;
  bool self_loops = true;
  bool sbm = false;
  double p_intra = 0.0;
  double q_inter = 0.0;
  uint64_t seed = 0;
  uint64_t replica = 0;
};

using DegreeVector = std::vector<uint32_t>;

// Directed 0/1 adjacency with bit-packed rows. Immutable after generation.
class Graph {
 public:
  Graph() = default;
  explicit Graph(const GraphInfo& info);

  // Hand-built graph from a dense 0/1 matrix; p is the nominal edge probability.
  static Graph from_matrix(const std::vector<std::vector<int>>& xi, double p, bool self_loops = true);

  size_t n() const { return info_.n; }
  size_t words() const { return words_; }
  const GraphInfo& info() const { return info_; }
  double p() const { return info_.p; }
  bool symmetric() const { return info_.symmetric; }

  bool edge(size_t i, size_t j) const { return (bits_[i * words_ + (j >> 6)] >> (j & 63)) & 1u; }
  void set_edge(size_t i, size_t j, bool v);
  const uint64_t* row(size_t i) const { return bits_.data() + i * words_; }
  uint64_t* row_mut(size_t i) { return bits_.data() + i * words_; }

  // Block index (0 or 1) of a vertex; always 0 outside the block model.
  int community(size_t i) const { return info_.sbm && i >= info_.n / 2 ? 1 : 0; }
  double p_ij(size_t i, size_t j) const;
  // ξ_ij / p_ij − 1
  double centered(size_t i, size_t j) const { return (edge(i, j) ? 1.0 / p_ij(i, j) : 0.0) - 1.0; }

  size_t degree(size_t i) const;
  DegreeVector degrees() const;
  size_t edge_count() const;
  // Every entry (including the diagonal) is present.
  bool complete() const { return complete_; }

  // Optional per-row neighbour lists, worthwhile when p ≪ 1.
  void build_sparse();
  bool has_sparse() const { return !nbr_offset_.empty(); }
  const uint32_t* neighbors_begin(size_t i) const { return nbr_.data() + nbr_offset_[i]; }
  const uint32_t* neighbors_end(size_t i) const { return nbr_.data() + nbr_offset_[i + 1]; }

  Eigen::MatrixXd centered_dense() const;
  Graph transposed() const;

  void save(const std::string& path) const;  // binary file plus "<path>.json" sidecar
  static Graph load(const std::string& path);
  std::string sidecar_json() const;

  void finalize();  // recompute cached flags after edits

 private:
  GraphInfo info_;
  size_t words_ = 0;
  std::vector<uint64_t> bits_;
  bool complete_ = false;
  std::vector<uint32_t> nbr_;
  std::vector<size_t> nbr_offset_;
};

// Erdős–Rényi graph. Row i draws its uniforms from its own sub-stream keyed by
// (seed, replica, i): asymmetric rows consume j = 0..n−1, symmetric rows j = i..n−1.
Graph gen_erdos_renyi(size_t n, double p, uint64_t seed, bool symmetric, bool self_loops = true,
                      uint64_t replica = 0);

// Two-block model: vertices [0, n/2) and [n/2, n). Same sampling order as gen_erdos_renyi,
// so p_intra = q_inter = p reproduces it bit for bit.
Graph gen_sbm(size_t n, double p_intra, double q_inter, uint64_t seed, bool symmetric = false,
              bool self_loops = true, uint64_t replica = 0);

// Row i of the asymmetric Erdős–Rényi graph above without generating the others.
std::vector<uint64_t> gen_erdos_renyi_row(size_t n, double p, uint64_t seed, uint64_t replica, size_t i,
                                          bool self_loops = true);

// Square real operator given by its products with a vector and with the transpose.
struct LinearOperator {
  size_t n = 0;
  std::function<void(const double*, double*)> apply;
  std::function<void(const double*, double*)> apply_t;
};

LinearOperator dense_operator(const Eigen::MatrixXd& m);
// Matrix-free ξ/p_ij − 1.
LinearOperator centered_operator(const Graph& g);

struct SpectralNormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// ‖A‖₂ by power iteration on AᵀA from a fixed start vector, with a geometric
// extrapolation of the Rayleigh-quotient increments as stopping rule.
SpectralNormResult spectral_norm(const LinearOperator& A, double tol = 1e-8, int max_iter = 20000);

}  // namespace gf
