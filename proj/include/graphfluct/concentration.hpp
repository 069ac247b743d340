#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphfluct/graph.hpp"

namespace gf {

// Sign-vector suprema of multilinear forms in the centered adjacency A = ξ̂.
//   Pair  sup |n⁻² Σ A_ij s_i t_j|
//   Ulr   A_ij A_ik     UDD  A_ij A_jk     VZT  A_ik A_jk     Umr  A_ij A_ki
//   UDlr  A_li A_ij A_ik                   UDDD A_li A_ij A_jk
// Triple forms are normalized by n⁻³ and weighted by r_i s_j t_k.
enum class Pattern { Pair, Ulr, UDD, VZT, Umr, UDlr, UDDD };

struct PatternId {
  Pattern kind = Pattern::Pair;
  size_t l = 0;  // anchor vertex of the UDlr / UDDD forms

  bool triple() const { return kind != Pattern::Pair; }
  bool anchored() const { return kind == Pattern::UDlr || kind == Pattern::UDDD; }
  std::string name() const;
  static PatternId parse(const std::string& s);  // e.g. "pair", "ulr", "uDDD:0"
};

std::vector<PatternId> all_patterns(size_t l = 0);

enum class SnMethod { Exact, Naive, Upper, Lower };
std::string method_name(SnMethod m);

struct SnResult {
  PatternId pattern;
  size_t n = 0;
  double value = 0.0;
  SnMethod method = SnMethod::Exact;
  std::vector<int> r, s, t;  // witness signs (empty for Upper; r unused for Pair)
};

// Access to A for the bounds: products with A and Aᵀ, single rows, and Σ|A_ij|.
struct CenteredInput {
  LinearOperator op;
  double abs_sum = 0.0;
  std::function<std::vector<double>(size_t)> row;
  mutable double norm_cache = -1.0;

  size_t n() const { return op.n; }
  double spectral(double tol) const;
};

CenteredInput centered_input(const Graph& g);
CenteredInput centered_input(const Eigen::MatrixXd& a);

// Value of the normalized form at given signs (r ignored for Pair).
double pattern_value(const Eigen::MatrixXd& a, PatternId pat, const std::vector<int>& r, const std::vector<int>& s,
                     const std::vector<int>& t);

// Gray-code enumeration over two sign vectors, the third chosen optimally.
SnResult sn_exact(const Eigen::MatrixXd& a, PatternId pat);
// Enumeration of all sign vectors against the full weight tensor; test oracle.
SnResult sn_naive(const Eigen::MatrixXd& a, PatternId pat);
// Pair: min(‖A‖/n, Σ|A|/n²). Triple: ‖A‖²/n², times max_i |A_li| for anchored forms.
// ‖A‖ is the power-iteration estimate inflated by (1 + 10·tol).
SnResult sn_upper(const CenteredInput& in, PatternId pat, double tol = 1e-9);
// Block coordinate ascent from `restarts` random sign triples; restart k draws from
// (seed, Search, k), so more restarts never lower the value. For n <= kKickMax each converged
// restart is refined by single sign flips, each followed by a fresh ascent, while that improves.
inline constexpr size_t kKickMax = 128;
SnResult sn_lower(const CenteredInput& in, PatternId pat, int restarts, uint64_t seed);

inline constexpr size_t kExactMaxPair = 14;
inline constexpr size_t kExactMaxTriple = 12;

// Scale that makes the supremum O(1): √(np) for Pair, np² for triples, np³ for anchored.
double pattern_normalization(PatternId pat, size_t n, double p);

struct TailRow {
  size_t n = 0;
  double p = 0.0;
  PatternId pattern;
  SnMethod method = SnMethod::Exact;
  std::vector<double> normalized;  // one per trial, in trial order
  double q50 = 0.0, q90 = 0.0, q99 = 0.0, max = 0.0;
};

struct TailOptions {
  int restarts = 4;
  bool exact = true;          // exact values inside the exact range
  bool lower = true;          // lower bounds outside it
  bool lower_triples = true;  // lower bounds for triple forms as well
  bool upper = true;
  double tol = 1e-9;
  bool symmetric = false;
};

struct TrialValue {
  PatternId pattern;
  SnMethod method = SnMethod::Exact;
  double value = 0.0;  // normalized
};

// "auto" (exact in range, lower + upper beyond), "exact", "bounds" (lower + upper) or "upper".
TailOptions tail_options(const std::string& method, int restarts = 4, double tol = 1e-9);

// Normalized suprema for one graph in pattern order. Lower-bound restarts draw from search_seed.
std::vector<TrialValue> tail_trial(const Graph& g, const std::vector<PatternId>& pats, const TailOptions& opt,
                                   uint64_t search_seed);

// For each n: `trials` graphs G(n, p_rule(n)) from (seed, replica = trial), shared by all
// patterns. Rows come in (n, pattern, method) order.
std::vector<TailRow> tail_study(const std::vector<PatternId>& pats, const std::vector<size_t>& n_grid,
                                const std::function<double(size_t)>& p_rule, size_t trials, uint64_t seed,
                                const TailOptions& opt = {});

enum class BernsteinStat { U1ij, U1vZT, U2ij, V2uDD };

// U1ij  n⁻¹ Σ_j A_lj v_j             U1vZT n⁻¹ Σ_j A_1j A_2j v_j (first two vertices)
// U2ij  n⁻² Σ_ij A_ij u_i v_j        V2uDD n⁻² Σ_ij A_li A_ij u_i v_j
double bernstein_stat(const Graph& g, BernsteinStat which, const std::vector<double>& u, const std::vector<double>& v,
                      size_t l = 0);

}  // namespace gf
