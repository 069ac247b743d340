#include "graphfluct/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "graphfluct/concentration.hpp"
#include "graphfluct/io.hpp"
#include "graphfluct/rng.hpp"
#include "graphfluct/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gf {

namespace fs = std::filesystem;

bool operator<(const StatRow& a, const StatRow& b) {
  if (a.statistic != b.statistic) return a.statistic < b.statistic;
  if (a.time != b.time) return a.time < b.time;
  return a.replica < b.replica;
}

std::vector<double> select(const std::vector<StatRow>& rows, const std::string& statistic, double time) {
  std::vector<std::pair<uint64_t, double>> hits;
  for (const auto& r : rows)
    if (r.statistic == statistic && (time < 0.0 || std::abs(r.time - time) < 1e-12)) hits.emplace_back(r.replica, r.value);
  std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> v;
  v.reserve(hits.size());
  for (const auto& h : hits) v.push_back(h.second);
  return v;
}

std::vector<std::string> statistics(const std::vector<StatRow>& rows) {
  std::set<std::string> names;
  for (const auto& r : rows) names.insert(r.statistic);
  return {names.begin(), names.end()};
}

Graph experiment_graph(const GraphParams& gp, size_t n, double p, uint64_t seed, uint64_t replica) {
  if (gp.sbm) return gen_sbm(n, gp.p_intra, gp.q_inter, seed, gp.symmetric, gp.self_loops, replica);
  if (p >= 1.0 && gp.self_loops) {
    GraphInfo info;
    info.n = n;
    info.p = 1.0;
    info.symmetric = gp.symmetric;
    info.seed = seed;
    info.replica = replica;
    Graph g(info);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) g.set_edge(i, j, true);
    g.finalize();
    return g;
  }
  return gen_erdos_renyi(n, p, seed, gp.symmetric, gp.self_loops, replica);
}

SpectralField reference_field(const InitSpec& init, int a_max) { return reference_density(init, a_max); }

MuTrajectory reference_trajectory(const ExperimentConfig& c, int a_max) {
  return solve_fokker_planck(reference_field(c.init, a_max), make_kernel(c.kernel), c.sim.T, c.limit.dt, a_max);
}

OrderParameter psi_reference(const ExperimentConfig& c) {
  const MuTrajectory mu = reference_trajectory(c, c.limit.A_max);
  return limit_order_parameter(mu.mu.back());
}

double psi_statistic(const OrderParameter& particles, const OrderParameter& limit, size_t n) {
  return std::sqrt(static_cast<double>(n)) * wrap_diff(particles.psi - limit.psi);
}

double degree_fluctuation(size_t degree, size_t n, double p) {
  const double np = static_cast<double>(n) * p;
  return std::sqrt(np) * (static_cast<double>(degree) / np - 1.0);
}

namespace {

constexpr uint64_t kQuenched = 0xffffffffull;

std::string tagged(const std::string& base, const std::string& tags) { return base + "[" + tags + "]"; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<size_t> n_list(const ExperimentConfig& c) {
  return c.graph.n_grid.empty() ? std::vector<size_t>{c.graph.n} : c.graph.n_grid;
}

double final_time(const ExperimentConfig& c) {
  return c.sim.snapshots.empty() ? c.sim.T : c.sim.snapshots.back();
}

json summary_of(const std::vector<double>& v) {
  if (v.empty()) return json{{"count", 0}};
  const Summary s = summarize(v);
  return json{{"count", s.n}, {"mean", s.mean}, {"sd", s.sd}, {"se", s.se}, {"q50", s.q50}};
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return true;
}

std::map<uint64_t, double> by_replica(const std::vector<StatRow>& rows, const std::string& statistic) {
  std::map<uint64_t, double> m;
  for (const auto& r : rows)
    if (r.statistic == statistic) m[r.replica] = r.value;
  return m;
}

// ψ values of replicas whose r is at least r_flag; the number dropped goes to *flagged.
std::vector<double> usable_psi(const std::vector<StatRow>& rows, const std::string& psi, const std::string& r,
                               double r_flag, size_t* flagged) {
  const auto ps = by_replica(rows, psi), rs = by_replica(rows, r);
  std::vector<double> out;
  *flagged = 0;
  for (const auto& [rep, v] : ps) {
    const auto it = rs.find(rep);
    if (it != rs.end() && it->second < r_flag) ++*flagged;
    else out.push_back(v);
  }
  return out;
}

json two_sample(const std::vector<double>& a, const std::vector<double>& b, double alpha) {
  const KsResult ks = ks_two_sample(a, b);
  const double diff = mean(a) - mean(b);
  const double se = std::hypot(standard_error(a), standard_error(b));
  return json{{"ks_statistic", ks.statistic},
              {"ks_p_value", ks.p_value},
              {"ks_reject", ks.p_value < alpha},
              {"mean_difference", diff},
              {"combined_se", se},
              {"z", se > 0.0 ? diff / se : 0.0}};
}

class Base : public Pipeline {
 public:
  explicit Base(const ExperimentConfig& cfg) : c_(cfg), kernel_(make_kernel(cfg.kernel)) {}
  size_t replicas() const override { return c_.replicas; }

 protected:
  SimConfig sim_config(uint64_t replica, double dt, double T) const {
    SimConfig s;
    s.dt = dt;
    s.t_final = T;
    s.renorm = c_.sim.renorm;
    s.seed = c_.seed;
    s.replica = replica;
    s.parallel = false;
    s.keep_states = false;
    return s;
  }

  // Final states for the given replica ids on one graph (batched when the kernel allows).
  std::vector<ParticleState> run_shared(const Graph& g, const InitSpec& init, const std::vector<uint64_t>& units,
                                        double dt, double T) const {
    std::vector<ParticleState> inits;
    inits.reserve(units.size());
    for (uint64_t u : units) inits.push_back(sample_init(init, &g, g.n(), u));
    // The complete graph already has an O(n) drift per replica.
    if (kernel_.spectral() && !g.complete() && units.size() > 1) return simulate_batch(g, inits, units, kernel_, sim_config(0, dt, T));
    std::vector<ParticleState> out;
    for (size_t k = 0; k < units.size(); ++k) out.push_back(final_state(g, inits[k], units[k], dt, T));
    return out;
  }

  ParticleState final_state(const Graph& g, const ParticleState& s0, uint64_t unit, double dt, double T) const {
    ParticleState last;
    simulate(g, s0, kernel_, sim_config(unit, dt, T), {}, [&](const ParticleState& s) { last = s; });
    return last;
  }

  ExperimentConfig c_;
  KernelSpec kernel_;
};

// ---------------------------------------------------------------- lln

class Lln : public Base {
 public:
  explicit Lln(const ExperimentConfig& cfg) : Base(cfg) {
    local_ = param<size_t>(c_, "local_vertex", 0);
    fp_A_ = param<int>(c_, "fp_A", c_.limit.A_max);
    mu_ = reference_trajectory(c_, fp_A_);
    for (size_t n : n_list(c_))
      if (local_ >= n) throw ConfigError("params.local_vertex must be below every n");
    if (!c_.graph.annealed)
      for (size_t n : n_list(c_)) quenched_.push_back(experiment_graph(c_.graph, n, c_.graph.p, c_.seed, unit_id(n, kQuenched)));
  }

  std::vector<StatRow> run_chunk(uint64_t first, uint64_t count) const override {
    std::vector<StatRow> rows;
    const auto ns = n_list(c_);
    const bool atomic = reference_is_atomic(c_.init);
    const AtomicMeasure atoms = atomic ? reference_atoms(c_.init) : AtomicMeasure{};
    for (size_t k = 0; k < ns.size(); ++k) {
      const size_t n = ns[k];
      const std::string tag = "n=" + std::to_string(n);
      for (uint64_t r = first; r < first + count; ++r) {
        const uint64_t unit = unit_id(n, r);
        const Graph g = c_.graph.annealed ? experiment_graph(c_.graph, n, c_.graph.p, c_.seed, unit) : Graph{};
        const Graph& graph = c_.graph.annealed ? g : quenched_[k];
        const ParticleState s0 = sample_init(c_.init, &graph, n, unit);
        SimConfig sc = sim_config(unit, c_.sim.dt, c_.sim.T);
        sc.snapshot_times = c_.sim.snapshots;
        simulate(graph, s0, kernel_, sc, {}, [&](const ParticleState& s) {
          const double t = s.t;
          const AtomicMeasure global = empirical_global(s);
          const BLInterval bl = (atomic && t == 0.0) ? bl_distance(global, atoms, fp_A_)
                                                     : bl_distance(global, mu_.at_time(t), fp_A_);
          rows.push_back({r, t, tagged("w1_global", tag), bl.upper});
          rows.push_back({r, t, tagged("dbl_lower", tag), bl.lower});
          bool empty = false;
          AtomicMeasure local = empirical_local(s, graph, local_, c_.sim.renorm, &empty);
          const double mass = local.mass();
          rows.push_back({r, t, tagged("local_mass", tag), mass});
          if (empty || !(mass > 0.0)) return;
          for (double& w : local.w) w /= mass;
          const double w1 = (atomic && t == 0.0) ? w1_circle(local, atoms) : w1_circle(local, mu_.at_time(t));
          rows.push_back({r, t, tagged("w1_local", tag), w1});
        });
      }
    }
    return rows;
  }

  json summarize(const std::vector<StatRow>& rows) const override {
    const double T = final_time(c_);
    json out;
    std::vector<double> ln_n, g_mean, l_mean, ln_g, ln_l;
    for (size_t n : n_list(c_)) {
      const std::string tag = "n=" + std::to_string(n);
      const auto g = select(rows, tagged("w1_global", tag), T);
      const auto l = select(rows, tagged("w1_local", tag), T);
      const auto m = select(rows, tagged("local_mass", tag), T);
      size_t within = 0;
      for (double v : m) within += std::abs(v - 1.0) <= 0.05;
      out["per_n"].push_back({{"n", n},
                              {"w1_global", summary_of(g)},
                              {"w1_local", summary_of(l)},
                              {"local_mass", summary_of(m)},
                              {"local_mass_within_5pct", m.empty() ? 0.0 : static_cast<double>(within) / m.size()}});
      if (g.empty() || l.empty()) continue;
      ln_n.push_back(std::log(static_cast<double>(n)));
      g_mean.push_back(mean(g));
      l_mean.push_back(mean(l));
      ln_g.push_back(std::log(g_mean.back()));
      ln_l.push_back(std::log(l_mean.back()));
    }
    out["time"] = T;
    out["w1_global_decreasing"] = strictly_decreasing(g_mean);
    out["w1_local_decreasing"] = strictly_decreasing(l_mean);
    if (ln_n.size() >= 2) {
      out["w1_global_slope"] = linear_regression(ln_n, ln_g).slope;
      out["w1_local_slope"] = linear_regression(ln_n, ln_l).slope;
    }
    return out;
  }

  std::vector<std::string> histogram_statistics(const std::vector<StatRow>&) const override {
    const std::string tag = "n=" + std::to_string(n_list(c_).back());
    return {tagged("w1_global", tag), tagged("w1_local", tag)};
  }

 private:
  size_t local_ = 0;
  int fp_A_ = 32;
  MuTrajectory mu_;
  std::vector<Graph> quenched_;
};

// ---------------------------------------------------------------- universality

class Universality : public Base {
 public:
  explicit Universality(const ExperimentConfig& cfg) : Base(cfg) {
    p_cmp_ = param<double>(c_, "p_compare", c_.graph.p);
    reps_ = param<size_t>(c_, "repetitions", 1);
    alpha_ = param<double>(c_, "alpha", 0.01);
    r_flag_ = param<double>(c_, "r_flag", 0.05);
    h_grid_ = param<std::vector<size_t>>(c_, "hat_eta0_grid", {});
    h_draws_ = param<size_t>(c_, "hat_eta0_draws", 200);
    if (!(p_cmp_ > 0.0 && p_cmp_ <= 1.0)) throw ConfigError("params.p_compare must lie in (0, 1]");
    if (reps_ < 1) throw ConfigError("params.repetitions must be positive");
    if (c_.init.kind == InitKind::GraphAdapted) throw ConfigError("universality needs initial data independent of the graph");
    ref_ = psi_reference(c_);
  }

  std::string arm(size_t a, size_t rep) const {
    return "p=" + num(a == 0 ? 1.0 : p_cmp_) + ",rep=" + std::to_string(rep);
  }

  std::vector<StatRow> run_chunk(uint64_t first, uint64_t count) const override {
    std::vector<StatRow> rows;
    const size_t n = c_.graph.n;
    const double T = c_.sim.T;
    for (size_t rep = 0; rep < reps_; ++rep)
      for (size_t a = 0; a < 2; ++a) {
        const double p = a == 0 ? 1.0 : p_cmp_;
        const uint64_t group = 1 + 2 * rep + a;
        std::vector<uint64_t> units;
        for (uint64_t r = first; r < first + count; ++r) units.push_back(unit_id(group, r));
        std::vector<ParticleState> finals;
        if (c_.graph.annealed) {
          for (uint64_t u : units) {
            const Graph g = experiment_graph(c_.graph, n, p, c_.seed, u);
            finals.push_back(final_state(g, sample_init(c_.init, &g, n, u), u, c_.sim.dt, T));
          }
        } else {
          const Graph g = experiment_graph(c_.graph, n, p, c_.seed, unit_id(group, kQuenched));
          finals = run_shared(g, c_.init, units, c_.sim.dt, T);
        }
        for (size_t k = 0; k < finals.size(); ++k) {
          const OrderParameter op = order_parameter(finals[k].phases);
          rows.push_back({first + k, T, tagged("psi", arm(a, rep)), psi_statistic(op, ref_, n)});
          rows.push_back({first + k, T, tagged("r", arm(a, rep)), op.r});
        }
      }
    for (size_t k = 0; k < h_grid_.size(); ++k) {
      const size_t hn = h_grid_[k];
      for (uint64_t r = first; r < first + count && r < h_draws_; ++r) {
        const uint64_t u = unit_id(1000 + k, r);
        const Graph g = experiment_graph(c_.graph, hn, p_cmp_, c_.seed, u);
        const double norm = hat_eta0_norm(sample_init(c_.init, &g, hn, u), g, 2.0, 16);
        rows.push_back({r, 0.0, tagged("hat_eta0_norm2", "n=" + std::to_string(hn)), norm * norm});
      }
    }
    return rows;
  }

  json summarize(const std::vector<StatRow>& rows) const override {
    json out;
    out["psi_limit"] = ref_.psi;
    out["r_limit"] = ref_.r;
    size_t keep = 0;
    for (size_t rep = 0; rep < reps_; ++rep) {
      size_t f0 = 0, f1 = 0;
      const auto a = usable_psi(rows, tagged("psi", arm(0, rep)), tagged("r", arm(0, rep)), r_flag_, &f0);
      const auto b = usable_psi(rows, tagged("psi", arm(1, rep)), tagged("r", arm(1, rep)), r_flag_, &f1);
      if (a.size() < 2 || b.size() < 2) continue;
      json t = two_sample(a, b, alpha_);
      t["repetition"] = rep;
      t["flagged"] = {f0, f1};
      t["samples"] = {a.size(), b.size()};
      keep += !t["ks_reject"].get<bool>();
      out["repetitions"].push_back(t);
    }
    out["non_rejections"] = keep;
    if (!h_grid_.empty()) {
      std::vector<double> means;
      for (size_t hn : h_grid_) {
        const auto v = select(rows, tagged("hat_eta0_norm2", "n=" + std::to_string(hn)));
        out["hat_eta0"]["per_n"].push_back({{"n", hn}, {"norm2", summary_of(v)}});
        if (!v.empty()) means.push_back(mean(v));
      }
      out["hat_eta0"]["decreasing"] = strictly_decreasing(means);
      out["hat_eta0"]["last_below_half_first"] = means.size() >= 2 && means.back() < 0.5 * means.front();
    }
    return out;
  }

  std::vector<std::string> histogram_statistics(const std::vector<StatRow>&) const override {
    return {tagged("psi", arm(0, 0)), tagged("psi", arm(1, 0))};
  }

 private:
  double p_cmp_ = 0.5, alpha_ = 0.01, r_flag_ = 0.05;
  size_t reps_ = 1, h_draws_ = 200;
  std::vector<size_t> h_grid_;
  OrderParameter ref_;
};

// ---------------------------------------------------------------- dephasing

class Dephasing : public Base {
 public:
  explicit Dephasing(const ExperimentConfig& cfg) : Base(cfg) {
    alpha_ = param<double>(c_, "alpha", 0.01);
    r_flag_ = param<double>(c_, "r_flag", 0.05);
    base_p_ = param<double>(c_, "baseline_p", 1.0);
    if (!(base_p_ > 0.0 && base_p_ <= 1.0)) throw ConfigError("params.baseline_p must lie in (0, 1]");
    if (!reference_is_atomic(c_.init)) throw ConfigError("dephasing compares against the two-point law");
    baseline_.kind = InitKind::IID;
    baseline_.law = IidLaw::TwoPoint;
    baseline_.seed = c_.seed;
    ref_ = psi_reference(c_);
  }

  std::vector<StatRow> run_chunk(uint64_t first, uint64_t count) const override {
    std::vector<StatRow> rows;
    const size_t n = c_.graph.n;
    const double T = c_.sim.T;
    const char* names[2] = {"adapted", "baseline"};
    for (size_t a = 0; a < 2; ++a) {
      const double p = a == 0 ? c_.graph.p : base_p_;
      const InitSpec& init = a == 0 ? c_.init : baseline_;
      GraphParams gp = c_.graph;
      if (a == 1) gp.sbm = false;
      std::vector<uint64_t> units;
      for (uint64_t r = first; r < first + count; ++r) units.push_back(unit_id(1 + a, r));
      std::vector<ParticleState> finals;
      if (gp.annealed && p < 1.0) {
        for (uint64_t u : units) {
          const Graph g = experiment_graph(gp, n, p, c_.seed, u);
          finals.push_back(final_state(g, sample_init(init, &g, n, u), u, c_.sim.dt, T));
        }
      } else {
        const Graph g = experiment_graph(gp, n, p, c_.seed, unit_id(1 + a, kQuenched));
        finals = run_shared(g, init, units, c_.sim.dt, T);
      }
      for (size_t k = 0; k < finals.size(); ++k) {
        const OrderParameter op = order_parameter(finals[k].phases);
        rows.push_back({first + k, T, tagged("psi", names[a]), psi_statistic(op, ref_, n)});
        rows.push_back({first + k, T, tagged("r", names[a]), op.r});
      }
    }
    return rows;
  }

  json summarize(const std::vector<StatRow>& rows) const override {
    size_t f0 = 0, f1 = 0;
    const auto a = usable_psi(rows, "psi[adapted]", "r[adapted]", r_flag_, &f0);
    const auto b = usable_psi(rows, "psi[baseline]", "r[baseline]", r_flag_, &f1);
    json out;
    out["psi_limit"] = ref_.psi;
    out["r_limit"] = ref_.r;
    out["flagged"] = {f0, f1};
    out["adapted"] = summary_of(a);
    out["baseline"] = summary_of(b);
    if (a.size() >= 2 && b.size() >= 2) out["comparison"] = two_sample(a, b, alpha_);
    // Same comparison for √n(rⁿ − r): both arms are symmetric under θ ↦ π/2 − θ, so a
    // graph-induced shift of the first moment shows up in the amplitude rather than the phase.
    const double rootn = std::sqrt(static_cast<double>(c_.graph.n));
    std::vector<double> ra = select(rows, "r[adapted]"), rb = select(rows, "r[baseline]");
    for (double& v : ra) v = rootn * (v - ref_.r);
    for (double& v : rb) v = rootn * (v - ref_.r);
    if (ra.size() >= 2 && rb.size() >= 2) out["amplitude_comparison"] = two_sample(ra, rb, alpha_);
    return out;
  }

  std::vector<std::string> histogram_statistics(const std::vector<StatRow>&) const override {
    return {"psi[adapted]", "psi[baseline]"};
  }

 private:
  double alpha_ = 0.01, r_flag_ = 0.05, base_p_ = 1.0;
  InitSpec baseline_;
  OrderParameter ref_;
};

// ---------------------------------------------------------------- concentration

class Concentration : public Base {
 public:
  explicit Concentration(const ExperimentConfig& cfg) : Base(cfg) {
    const auto names = param<std::vector<std::string>>(c_, "patterns", {});
    try {
      if (names.empty()) pats_ = all_patterns(0);
      for (const auto& s : names) pats_.push_back(PatternId::parse(s));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("params.patterns: ") + e.what());
    }
    const auto method = param<std::string>(c_, "method", "auto");
    try {
      opt_ = tail_options(method, param<int>(c_, "restarts", 4), param<double>(c_, "tol", 1e-9));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("params.") + e.what());
    }
    opt_.lower_triples = param<bool>(c_, "lower_triples", true);
    opt_.symmetric = c_.graph.symmetric;
    if (c_.params.contains("p_rule")) {
      const json& pr = c_.params.at("p_rule");
      if (pr.is_string() && pr.get<std::string>() == "const") {
      } else if (pr.is_object() && pr.contains("scale") && pr.contains("exponent")) {
        p_scale_ = pr.at("scale").get<double>();
        p_exp_ = pr.at("exponent").get<double>();
        power_ = true;
      } else {
        throw ConfigError("params.p_rule must be \"const\" or {\"scale\", \"exponent\"}");
      }
    }
    for (size_t n : n_list(c_)) {
      const double p = p_of(n);
      if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p_rule gives p outside (0, 1] at n = " + std::to_string(n));
      for (const auto& pat : pats_) {
        if (pat.anchored() && pat.l >= n) throw ConfigError("anchor vertex beyond n in params.patterns");
        if (method == "exact" && n > (pat.triple() ? kExactMaxTriple : kExactMaxPair))
          throw ConfigError("exact enumeration is limited to n <= " +
                            std::to_string(pat.triple() ? kExactMaxTriple : kExactMaxPair));
      }
    }
  }

  double p_of(size_t n) const {
    return power_ ? std::min(1.0, p_scale_ * std::pow(static_cast<double>(n), p_exp_)) : c_.graph.p;
  }

  std::vector<StatRow> run_chunk(uint64_t first, uint64_t count) const override {
    std::vector<StatRow> rows;
    for (size_t n : n_list(c_)) {
      const std::string tag = "n=" + std::to_string(n);
      for (uint64_t t = first; t < first + count; ++t) {
        const uint64_t unit = unit_id(n, t);
        const Graph g = gen_erdos_renyi(n, p_of(n), c_.seed, c_.graph.symmetric, c_.graph.self_loops, unit);
        for (const auto& v : tail_trial(g, pats_, opt_, mix64(c_.seed ^ unit)))
          rows.push_back({t, 0.0, tagged(v.pattern.name() + "/" + method_name(v.method), tag), v.value});
      }
    }
    return rows;
  }

  json summarize(const std::vector<StatRow>& rows) const override {
    json out;
    for (const auto& name : statistics(rows)) {
      auto v = select(rows, name);
      out["tails"].push_back({{"statistic", name},
                              {"count", v.size()},
                              {"q50", quantile(v, 0.5)},
                              {"q90", quantile(v, 0.9)},
                              {"q99", quantile(v, 0.99)},
                              {"max", *std::max_element(v.begin(), v.end())}});
    }
    return out;
  }

  std::vector<std::string> histogram_statistics(const std::vector<StatRow>& rows) const override {
    const std::string tag = "[n=" + std::to_string(n_list(c_).back()) + "]";
    std::vector<std::string> out;
    for (const auto& name : statistics(rows))
      if (name.size() > tag.size() && name.compare(name.size() - tag.size(), tag.size(), tag) == 0) out.push_back(name);
    return out;
  }

 private:
  std::vector<PatternId> pats_;
  TailOptions opt_;
  bool power_ = false;
  double p_scale_ = 1.0, p_exp_ = 0.0;
};

// ---------------------------------------------------------------- spde-compare

class SpdeCompare : public Base {
 public:
  explicit SpdeCompare(const ExperimentConfig& cfg) : Base(cfg) {
    A_ = param<int>(c_, "A", 8);
    mode_ = param<int>(c_, "mode", 1);
    spde_m_ = param<size_t>(c_, "spde_replicas", c_.replicas);
    spde_dt_ = param<double>(c_, "spde_dt", 1e-3);
    if (A_ < 1 || mode_ < 1 || mode_ > A_) throw ConfigError("params need 1 <= mode <= A");
    if (!(spde_dt_ > 0.0)) throw ConfigError("params.spde_dt must be positive");
    if (c_.init.kind == InitKind::GraphAdapted) throw ConfigError("spde-compare needs graph-independent initial data");
    mu0_ = reference_field(c_.init, A_);
    mu_ = solve_fokker_planck(mu0_, kernel_, c_.sim.T, spde_dt_, A_);
    noise_ = std::make_unique<NoiseModel>(mu_, A_, spde_dt_, mu_.steps());
    target_ = mu_.mu.back().at(-mode_);
  }

  size_t replicas() const override { return std::max(c_.replicas, spde_m_); }

  std::vector<StatRow> run_chunk(uint64_t first, uint64_t count) const override {
    std::vector<StatRow> rows;
    const size_t n = c_.graph.n;
    const double T = c_.sim.T;
    for (uint64_t r = first; r < first + count; ++r) {
      if (r < c_.replicas) {
        const uint64_t u = unit_id(1, r);
        Graph g;
        if (kernel_.is_zero() && !kernel_.has_intrinsic()) {
          GraphInfo info;  // particles do not interact, so no edges are needed
          info.n = n;
          info.p = 1.0;
          g = Graph(info);
          g.finalize();
        } else {
          g = experiment_graph(c_.graph, n, c_.graph.p, c_.seed, u);
        }
        const ParticleState s = final_state(g, sample_init(c_.init, &g, n, u), u, c_.sim.dt, T);
        cplx sum{};
        for (double x : s.phases) sum += std::polar(1.0, mode_ * x);
        const cplx z = std::sqrt(static_cast<double>(n)) * (sum / (static_cast<double>(n) * std::sqrt(kTwoPi)) - target_);
        rows.push_back({r, T, "particle_re", z.real()});
        rows.push_back({r, T, "particle_im", z.imag()});
      }
      if (r < spde_m_) {
        const InitialSample init = sample_initial(InitialLaw::GaussianCLT, mu0_, 1.0, A_, c_.seed, r);
        SpdeOptions opt;
        opt.dt = spde_dt_;
        opt.T = T;
        const LimitPath path = solve_limit_eta(init.eta, mu_, kernel_, draw_noise_path(*noise_, c_.seed, r), opt);
        const cplx z = path.eta.back()(mode_index(-mode_, A_));
        rows.push_back({r, T, "spde_re", z.real()});
        rows.push_back({r, T, "spde_im", z.imag()});
      }
    }
    return rows;
  }

  // E|Z − EZ|² with its standard error from the spread of the squared deviations.
  static std::pair<double, double> complex_variance(const std::vector<double>& re, const std::vector<double>& im) {
    const double mr = mean(re), mi = mean(im);
    std::vector<double> sq(re.size());
    for (size_t k = 0; k < re.size(); ++k) sq[k] = (re[k] - mr) * (re[k] - mr) + (im[k] - mi) * (im[k] - mi);
    const double m = static_cast<double>(re.size());
    return {mean(sq) * m / (m - 1.0), standard_error(sq)};
  }

  json summarize(const std::vector<StatRow>& rows) const override {
    json out;
    const auto pr = select(rows, "particle_re"), pi = select(rows, "particle_im");
    const auto sr = select(rows, "spde_re"), si = select(rows, "spde_im");
    if (pr.size() < 2 || sr.size() < 2) return out;
    const auto [vp, sp] = complex_variance(pr, pi);
    const auto [vs, ss] = complex_variance(sr, si);
    const double se = std::hypot(sp, ss);
    out["particle_variance"] = vp;
    out["particle_se"] = sp;
    out["spde_variance"] = vs;
    out["spde_se"] = ss;
    out["combined_se"] = se;
    out["z"] = se > 0.0 ? (vp - vs) / se : 0.0;
    out["mode"] = mode_;
    return out;
  }

  std::vector<std::string> histogram_statistics(const std::vector<StatRow>&) const override {
    return {"particle_re", "spde_re"};
  }

 private:
  int A_ = 8, mode_ = 1;
  size_t spde_m_ = 0;
  double spde_dt_ = 1e-3;
  SpectralField mu0_;
  MuTrajectory mu_;
  std::unique_ptr<NoiseModel> noise_;
  cplx target_;
};

// ---------------------------------------------------------------- local-fluct

class LocalFluct : public Base {
 public:
  explicit LocalFluct(const ExperimentConfig& cfg) : Base(cfg) {
    p_grid_ = param<std::vector<double>>(c_, "p_grid", {0.2, 1.0});
    shift_ = param<double>(c_, "f_shift", 0.5);
    qv_m_ = param<size_t>(c_, "qv_replicas", 0);
    qv_dt_ = param<double>(c_, "qv_dt", c_.sim.dt);
    if (c_.init.kind == InitKind::GraphAdapted) throw ConfigError("local-fluct needs graph-independent initial data");
    if (c_.graph.sbm) throw ConfigError("local-fluct uses the Erdős–Rényi graph");
    for (double p : p_grid_)
      if (!(p > 0.0 && p <= 1.0)) throw ConfigError("params.p_grid entries must lie in (0, 1]");
    if (c_.graph.n < 2) throw ConfigError("local-fluct needs n >= 2");
    const auto f = [this](double x) { return std::cos(x) + shift_; };
    const auto f2 = [this](double x) { return (std::cos(x) + shift_) * (std::cos(x) + shift_); };
    if (reference_is_atomic(c_.init)) {
      const AtomicMeasure m = reference_atoms(c_.init);
      mean_f_ = pair(m, f);
      var_f_ = pair(m, f2) - mean_f_ * mean_f_;
    } else {
      const SpectralField d = reference_field(c_.init, c_.limit.A_max);
      mean_f_ = pair(d, f);
      var_f_ = pair(d, f2) - mean_f_ * mean_f_;
    }
    // ∫₀ᵀ ⟨μ_u, (f′)²⟩ du along the limit, trapezoidal in time.
    if (qv_m_ > 0) {
      const MuTrajectory mu = reference_trajectory(c_, c_.limit.A_max);
      const auto fp2 = [](double x) { return std::sin(x) * std::sin(x); };
      for (size_t k = 0; k <= mu.steps(); ++k) {
        const double w = (k == 0 || k == mu.steps()) ? 0.5 : 1.0;
        const double v = k == 0 && reference_is_atomic(c_.init) ? pair(reference_atoms(c_.init), fp2) : pair(mu.mu[k], fp2, 512);
        qv_integral_ += w * mu.dt * v;
      }
    }
  }

  size_t replicas() const override { return std::max(c_.replicas, qv_m_); }

  std::vector<StatRow> run_chunk(uint64_t first, uint64_t count) const override {
    std::vector<StatRow> rows;
    const size_t n = c_.graph.n;
    const double T = c_.sim.T;
    const double nd = static_cast<double>(n);
    for (size_t k = 0; k < p_grid_.size(); ++k) {
      const double p = p_grid_[k];
      const std::string tag = "p=" + num(p);
      const double np = nd * p;
      for (uint64_t r = first; r < first + count; ++r) {
        if (r < c_.replicas) {
          const uint64_t u = unit_id(1 + k, r);
          const auto row0 = gen_erdos_renyi_row(n, p, c_.seed, u, 0, c_.graph.self_loops);
          const auto row1 = gen_erdos_renyi_row(n, p, c_.seed, u, 1, c_.graph.self_loops);
          const ParticleState s = sample_init(c_.init, nullptr, n, u);
          double s0 = 0.0, s1 = 0.0, sg = 0.0;
          for (size_t j = 0; j < n; ++j) {
            const double fj = std::cos(s.phases[j]) + shift_;
            sg += fj;
            if ((row0[j >> 6] >> (j & 63)) & 1u) s0 += fj;
            if ((row1[j >> 6] >> (j & 63)) & 1u) s1 += fj;
          }
          rows.push_back({r, 0.0, tagged("zeta1_0", tag), std::sqrt(np) * (s0 / np - mean_f_)});
          rows.push_back({r, 0.0, tagged("zeta2_0", tag), std::sqrt(np) * (s1 / np - mean_f_)});
          rows.push_back({r, 0.0, tagged("eta_0", tag), std::sqrt(nd) * (sg / nd - mean_f_)});
        }
        if (r < qv_m_) {
          const uint64_t u = unit_id(100 + k, r);
          const Graph g = experiment_graph(c_.graph, n, p, c_.seed, u);
          double qv = 0.0;
          const double inv = 1.0 / std::sqrt(np);
          simulate(g, sample_init(c_.init, &g, n, u), kernel_, sim_config(u, qv_dt_, T),
                   [&](const ParticleState& before, const std::vector<double>&, const std::vector<double>& dB, double) {
                     double w1 = 0.0, w2 = 0.0;
                     for (size_t j = 0; j < n; ++j) {
                       const double v = -std::sin(before.phases[j]) * dB[j];
                       if (g.edge(0, j)) w1 += v;
                       if (g.edge(1, j)) w2 += v;
                     }
                     qv += (w1 * inv) * (w2 * inv);
                   });
          rows.push_back({r, T, tagged("qv", tag), qv});
        }
      }
    }
    return rows;
  }

  json summarize(const std::vector<StatRow>& rows) const override {
    json out;
    out["mean_f"] = mean_f_;
    out["var_f"] = var_f_;
    out["qv_integral"] = qv_integral_;
    auto check = [](double est, double se, double target) {
      return json{{"estimate", est}, {"se", se}, {"target", target}, {"z", se > 0.0 ? (est - target) / se : 0.0}};
    };
    for (double p : p_grid_) {
      const std::string tag = "p=" + num(p);
      const auto z1 = select(rows, tagged("zeta1_0", tag)), z2 = select(rows, tagged("zeta2_0", tag));
      const auto e = select(rows, tagged("eta_0", tag));
      json j{{"p", p}};
      if (z1.size() >= 3 && z1.size() == z2.size() && z1.size() == e.size()) {
        j["zeta_zeta"] = check(variance(z1), variance_se(z1), var_f_ + (1.0 - p) * mean_f_ * mean_f_);
        j["zeta1_zeta2"] = check(covariance(z1, z2), covariance_se(z1, z2), p * var_f_);
        j["zeta1_eta"] = check(covariance(z1, e), covariance_se(z1, e), std::sqrt(p) * var_f_);
        j["zeta2_eta"] = check(covariance(z2, e), covariance_se(z2, e), std::sqrt(p) * var_f_);
      }
      const auto qv = select(rows, tagged("qv", tag));
      if (qv.size() >= 2) j["qv"] = check(mean(qv), standard_error(qv), p * qv_integral_);
      out["per_p"].push_back(j);
    }
    return out;
  }

  std::vector<std::string> histogram_statistics(const std::vector<StatRow>&) const override {
    std::vector<std::string> out;
    for (double p : p_grid_) out.push_back(tagged("zeta1_0", "p=" + num(p)));
    return out;
  }

 private:
  std::vector<double> p_grid_;
  double shift_ = 0.5, qv_dt_ = 1e-2;
  size_t qv_m_ = 0;
  double mean_f_ = 0.0, var_f_ = 0.0, qv_integral_ = 0.0;
};

// ---------------------------------------------------------------- degree-renorm

class DegreeRenorm : public Base {
 public:
  explicit DegreeRenorm(const ExperimentConfig& cfg) : Base(cfg) {
    p_grid_ = param<std::vector<double>>(c_, "p_grid", {0.3, 0.7});
    bit_n_ = param<size_t>(c_, "bitwise_n", 200);
    bit_T_ = param<double>(c_, "bitwise_T", 0.2);
    for (double p : p_grid_)
      if (!(p > 0.0 && p <= 1.0)) throw ConfigError("params.p_grid entries must lie in (0, 1]");
    if (bit_n_ < 2) throw ConfigError("params.bitwise_n must be at least 2");
  }

  std::vector<StatRow> run_chunk(uint64_t first, uint64_t count) const override {
    std::vector<StatRow> rows;
    const size_t n = c_.graph.n;
    for (size_t k = 0; k < p_grid_.size(); ++k)
      for (uint64_t r = first; r < first + count; ++r) {
        const auto bits = gen_erdos_renyi_row(n, p_grid_[k], c_.seed, unit_id(1 + k, r), 0, c_.graph.self_loops);
        size_t d = 0;
        for (uint64_t w : bits) d += static_cast<size_t>(__builtin_popcountll(w));
        rows.push_back({r, 0.0, tagged("D", "p=" + num(p_grid_[k])), degree_fluctuation(d, n, p_grid_[k])});
      }
    return rows;
  }

  // Complete graph: both renormalizations divide by n, so trajectories agree bit for bit.
  bool bitwise_identical() const {
    GraphParams gp = c_.graph;
    gp.sbm = false;
    gp.self_loops = true;
    const Graph g = experiment_graph(gp, bit_n_, 1.0, c_.seed, 0);
    InitSpec init = c_.init;
    if (init.kind == InitKind::GraphAdapted) init.kind = InitKind::IID;
    const ParticleState s0 = sample_init(init, &g, bit_n_, 0);
    std::vector<std::vector<double>> states[2];
    for (int k = 0; k < 2; ++k) {
      SimConfig sc = sim_config(0, c_.sim.dt, bit_T_);
      sc.renorm = k == 0 ? Renorm::Expected : Renorm::Actual;
      const long long steps = std::llround(bit_T_ / c_.sim.dt);
      for (long long s = 0; s <= steps; ++s) sc.snapshot_times.push_back(static_cast<double>(s) * c_.sim.dt);
      simulate(g, s0, kernel_, sc, {}, [&](const ParticleState& st) { states[k].push_back(st.phases); });
    }
    if (states[0].size() != states[1].size()) return false;
    for (size_t s = 0; s < states[0].size(); ++s)
      if (std::memcmp(states[0][s].data(), states[1][s].data(), states[0][s].size() * sizeof(double)) != 0) return false;
    return true;
  }

  json summarize(const std::vector<StatRow>& rows) const override {
    json out;
    for (double p : p_grid_) {
      const auto v = select(rows, tagged("D", "p=" + num(p)));
      if (v.size() < 3) continue;
      const double var = variance(v), se = variance_se(v);
      out["per_p"].push_back(
          {{"p", p}, {"variance", var}, {"se", se}, {"target", 1.0 - p}, {"z", se > 0.0 ? (var - (1.0 - p)) / se : 0.0}});
    }
    out["bitwise_identical_p1"] = bitwise_identical();
    return out;
  }

  std::vector<std::string> histogram_statistics(const std::vector<StatRow>&) const override {
    std::vector<std::string> out;
    for (double p : p_grid_) out.push_back(tagged("D", "p=" + num(p)));
    return out;
  }

 private:
  std::vector<double> p_grid_;
  size_t bit_n_ = 200;
  double bit_T_ = 0.2;
};

// ---------------------------------------------------------------- runner

void run_chunk_safely(const Pipeline& pipe, uint64_t first, uint64_t count, std::vector<StatRow>& rows,
                      std::vector<ReplicaFailure>& failures) {
  try {
    rows = pipe.run_chunk(first, count);
    return;
  } catch (const std::exception&) {
    rows.clear();
  }
  for (uint64_t r = first; r < first + count; ++r) {
    try {
      auto part = pipe.run_chunk(r, 1);
      rows.insert(rows.end(), part.begin(), part.end());
    } catch (const std::exception& e) {
      failures.push_back({r, e.what()});
    }
  }
}

struct ChunkPlan {
  uint64_t first, count;
};

std::vector<ChunkPlan> plan_chunks(size_t replicas, size_t chunk) {
  std::vector<ChunkPlan> out;
  for (uint64_t f = 0; f < replicas; f += chunk) out.push_back({f, std::min<uint64_t>(chunk, replicas - f)});
  return out;
}

void set_workers(const ExperimentConfig& c) {
#ifdef _OPENMP
  if (c.workers > 0) omp_set_num_threads(c.workers);
#else
  (void)c;
#endif
}

std::vector<std::string> meta_lines(const ExperimentConfig& c, size_t replicas) {
  return {"experiment=" + c.experiment,
          "config_hash=" + c.hash(),
          "version=" + version_string(),
          "seed=" + std::to_string(c.seed),
          "init_seed=" + std::to_string(c.init.seed),
          "streams=graph:1,init:2,noise:3,tiebreak:4,trial:5,spde:6,search:7",
          "replicas=" + std::to_string(replicas)};
}

json row_json(const StatRow& r) { return json{{"replica", r.replica}, {"time", r.time}, {"statistic", r.statistic}, {"value", r.value}}; }

StatRow row_from_json(const json& j) {
  return {j.at("replica").get<uint64_t>(), j.at("time").get<double>(), j.at("statistic").get<std::string>(),
          j.at("value").get<double>()};
}

// Completed chunk file: header, rows, failures, trailer {"done": true}.
bool load_chunk(const std::string& path, const std::string& hash, std::vector<StatRow>& rows,
                std::vector<ReplicaFailure>& failures) {
  if (!fs::exists(path)) return false;
  std::vector<json> lines;
  try {
    lines = read_jsonl(path);
  } catch (const std::exception&) {
    return false;
  }
  if (lines.size() < 2 || lines.front().value("config_hash", "") != hash || !lines.back().value("done", false))
    return false;
  for (size_t k = 1; k + 1 < lines.size(); ++k) {
    if (lines[k].contains("failure")) failures.push_back({lines[k].at("replica").get<uint64_t>(), lines[k].at("failure")});
    else rows.push_back(row_from_json(lines[k]));
  }
  return true;
}

void save_chunk(const std::string& path, const ExperimentConfig& c, const ChunkPlan& plan,
                const std::vector<StatRow>& rows, const std::vector<ReplicaFailure>& failures) {
  const std::string tmp = path + ".tmp";
  {
    JsonlWriter w(tmp);
    w.write(json{{"config_hash", c.hash()},
                 {"version", version_string()},
                 {"seed", c.seed},
                 {"first_replica", plan.first},
                 {"count", plan.count}});
    for (const auto& r : rows) w.write(row_json(r));
    for (const auto& f : failures) w.write(json{{"replica", f.replica}, {"failure", f.error}});
    w.write(json{{"done", true}});
  }
  fs::rename(tmp, path);
}

std::string file_safe(const std::string& s) {
  std::string out;
  for (char ch : s) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') ? ch : '_';
  return out;
}

Collected finish(const Pipeline& pipe, std::vector<std::vector<StatRow>>& parts,
                 std::vector<std::vector<ReplicaFailure>>& fails) {
  Collected out;
  for (auto& p : parts) out.rows.insert(out.rows.end(), p.begin(), p.end());
  for (auto& f : fails) out.failures.insert(out.failures.end(), f.begin(), f.end());
  std::sort(out.rows.begin(), out.rows.end());
  std::sort(out.failures.begin(), out.failures.end(), [](const auto& a, const auto& b) { return a.replica < b.replica; });
  out.summary = pipe.summarize(out.rows);
  return out;
}

}  // namespace

std::unique_ptr<Pipeline> make_pipeline(const ExperimentConfig& c) {
  try {
    if (c.experiment == "lln") return std::make_unique<Lln>(c);
    if (c.experiment == "universality") return std::make_unique<Universality>(c);
    if (c.experiment == "dephasing") return std::make_unique<Dephasing>(c);
    if (c.experiment == "concentration") return std::make_unique<Concentration>(c);
    if (c.experiment == "spde-compare") return std::make_unique<SpdeCompare>(c);
    if (c.experiment == "local-fluct") return std::make_unique<LocalFluct>(c);
    if (c.experiment == "degree-renorm") return std::make_unique<DegreeRenorm>(c);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("params: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown experiment '" + c.experiment + "'");
}

Collected collect(const ExperimentConfig& c, bool parallel) {
  const auto pipe = make_pipeline(c);
  set_workers(c);
  const auto plan = plan_chunks(pipe->replicas(), c.chunk);
  std::vector<std::vector<StatRow>> parts(plan.size());
  std::vector<std::vector<ReplicaFailure>> fails(plan.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long long k = 0; k < static_cast<long long>(plan.size()); ++k)
    run_chunk_safely(*pipe, plan[k].first, plan[k].count, parts[k], fails[k]);
  return finish(*pipe, parts, fails);
}

RunResult run(const ExperimentConfig& c, bool parallel) {
  RunResult res;
  const std::string hash = c.hash();
  const fs::path dir = fs::path(c.output.dir) / (c.experiment + "-" + hash);
  res.dir = dir.string();
  const fs::path done = dir / "DONE";
  if (fs::exists(done)) {
    std::ifstream in(done);
    std::string h;
    in >> h;
    if (h == hash) {
      res.skipped = true;
      std::ifstream sj(dir / "summary.json");
      if (sj) res.data.summary = json::parse(sj, nullptr, false);
      return res;
    }
  }
  const auto pipe = make_pipeline(c);
  set_workers(c);
  fs::create_directories(dir / "chunks");
  {
    std::ofstream cfg(dir / "config.json");
    cfg << c.raw.dump(2) << '\n';
  }
  const auto plan = plan_chunks(pipe->replicas(), c.chunk);
  std::vector<std::vector<StatRow>> parts(plan.size());
  std::vector<std::vector<ReplicaFailure>> fails(plan.size());
  std::vector<std::string> errors(plan.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long long k = 0; k < static_cast<long long>(plan.size()); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "chunk-%06lld.jsonl", k);
    const std::string path = (dir / "chunks" / name).string();
    if (load_chunk(path, hash, parts[k], fails[k])) continue;
    parts[k].clear();
    fails[k].clear();
    run_chunk_safely(*pipe, plan[k].first, plan[k].count, parts[k], fails[k]);
    try {
      save_chunk(path, c, plan[k], parts[k], fails[k]);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("cannot write chunk: " + e);
  res.data = finish(*pipe, parts, fails);
  const auto& rows = res.data.rows;
  const auto meta = meta_lines(c, pipe->replicas());

  {
    CsvWriter w((dir / "stats.csv").string(), meta, {"replica", "time", "statistic", "value"});
    for (const auto& r : rows) {
      if (!c.output.statistics.empty() &&
          std::none_of(c.output.statistics.begin(), c.output.statistics.end(),
                       [&](const std::string& pre) { return r.statistic.rfind(pre, 0) == 0; }))
        continue;
      w << static_cast<size_t>(r.replica) << r.time << r.statistic << r.value;
      w.end_row();
    }
  }
  {
    CsvWriter w((dir / "summary.csv").string(), meta,
                {"statistic", "time", "count", "mean", "sd", "se", "min", "q05", "q50", "q95", "max"});
    size_t k = 0;
    while (k < rows.size()) {
      size_t e = k;
      std::vector<double> v;
      while (e < rows.size() && rows[e].statistic == rows[k].statistic && rows[e].time == rows[k].time) v.push_back(rows[e++].value);
      const Summary s = summarize(v);
      w << rows[k].statistic << rows[k].time << s.n << s.mean << s.sd << s.se << s.min << s.q05 << s.q50 << s.q95 << s.max;
      w.end_row();
      k = e;
    }
  }
  if (!res.data.failures.empty()) {
    JsonlWriter w((dir / "failures.jsonl").string());
    for (const auto& f : res.data.failures) w.write(json{{"replica", f.replica}, {"error", f.error}});
  }
  std::vector<std::string> hist_files;
  for (const auto& stat : pipe->histogram_statistics(rows)) {
    double t = -1.0;
    for (const auto& r : rows)
      if (r.statistic == stat) t = std::max(t, r.time);
    const auto v = select(rows, stat, t);
    if (v.empty()) continue;
    const std::string file = "hist-" + file_safe(stat) + ".csv";
    auto hm = meta;
    hm.push_back("statistic=" + stat);
    hm.push_back("time=" + format_double(t));
    write_histogram_csv((dir / file).string(), hm, c.output.bins > 0 ? histogram(v, c.output.bins) : histogram_fd(v));
    hist_files.push_back(file);
  }
  if (!hist_files.empty()) write_plot_script((dir / "plot.py").string(), hist_files, c.experiment);
  {
    json s = res.data.summary;
    s["config_hash"] = hash;
    s["version"] = version_string();
    s["seed"] = c.seed;
    s["replicas"] = pipe->replicas();
    s["failed_replicas"] = res.data.failures.size();
    std::ofstream out(dir / "summary.json");
    out << s.dump(2) << '\n';
  }
  if (res.data.failures.empty()) {
    std::ofstream d(done);
    d << hash << '\n';
  }
  return res;
}

}  // namespace gf
