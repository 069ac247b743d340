#include "graphfluct/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace gf {

namespace {

using Keys = std::set<std::string>;

const std::map<std::string, Keys>& param_keys() {
  static const std::map<std::string, Keys> keys = {
      {"lln", {"local_vertex", "fp_A"}},
      {"universality", {"p_compare", "repetitions", "alpha", "r_flag", "hat_eta0_grid", "hat_eta0_draws"}},
      {"dephasing", {"alpha", "r_flag", "baseline_p"}},
      {"concentration", {"patterns", "restarts", "p_rule", "method", "tol", "lower_triples"}},
      {"spde-compare", {"A", "mode", "spde_replicas", "spde_dt"}},
      {"local-fluct", {"p_grid", "f_shift", "qv_replicas", "qv_dt"}},
      {"degree-renorm", {"p_grid", "bitwise_n", "bitwise_T"}},
  };
  return keys;
}

void check_keys(const json& j, const Keys& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {"lln",          "universality", "dephasing",    "concentration",
                                               "spde-compare", "local-fluct",  "degree-renorm"};
  return ids;
}

std::string fnv1a_hex(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ExperimentConfig::hash() const {
  json canon = raw;
  canon.erase("workers");  // scheduling does not change results
  if (canon.contains("output")) {
    canon["output"].erase("dir");
    if (canon["output"].empty()) canon.erase("output");
  }
  return fnv1a_hex(canon.dump());
}

KernelSpec make_kernel(const KernelParams& k) {
  KernelSpec spec;
  if (k.type == "kuramoto") spec = kuramoto_kernel(k.K);
  else if (k.type == "zero") spec = zero_kernel();
  else if (k.type == "modes") spec = kernel_from_modes(k.modes, "modes");
  else throw ConfigError("kernel.type must be kuramoto, zero or modes");
  if (!k.intrinsic.empty()) set_intrinsic_modes(spec, k.intrinsic);
  return spec;
}

InitSpec make_init(const json& j, uint64_t seed) {
  check_keys(j, {"kind", "law", "chain_states", "locality", "chain_start", "allow_extension", "custom"}, "init");
  InitSpec s;
  s.seed = seed;
  std::string kind = "iid", law = "uniform";
  read(j, "kind", kind, "init");
  read(j, "law", law, "init");
  if (kind == "iid") s.kind = InitKind::IID;
  else if (kind == "mixing-chain") s.kind = InitKind::MixingChain;
  else if (kind == "graph-adapted") s.kind = InitKind::GraphAdapted;
  else throw ConfigError("init.kind must be iid, mixing-chain or graph-adapted");
  if (law == "uniform") s.law = IidLaw::Uniform;
  else if (law == "two-point") s.law = IidLaw::TwoPoint;
  else if (law == "custom") s.law = IidLaw::Custom;
  else throw ConfigError("init.law must be uniform, two-point or custom");
  read(j, "chain_states", s.chain_states, "init");
  read(j, "locality", s.locality, "init");
  read(j, "chain_start", s.chain_start, "init");
  read(j, "allow_extension", s.allow_extension, "init");
  if (s.law == IidLaw::Custom) {
    require(j.contains("custom"), "init.custom is required for the custom law");
    const json& c = j.at("custom");
    check_keys(c, {"A_max", "re", "im"}, "init.custom");
    const int A = c.at("A_max").get<int>();
    const auto re = c.at("re").get<std::vector<double>>();
    const auto im = c.value("im", std::vector<double>(re.size(), 0.0));
    require(static_cast<int>(re.size()) == 2 * A + 1 && im.size() == re.size(),
            "init.custom needs 2·A_max + 1 coefficients");
    s.custom = SpectralField(1, A);
    for (int a = -A; a <= A; ++a) s.custom.at(a) = cplx(re[a + A], im[a + A]);
  }
  require(s.chain_states >= 2, "init.chain_states must be at least 2");
  require(s.locality >= 0.0 && s.locality < 1.0, "init.locality must lie in [0, 1)");
  return s;
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j,
             {"experiment", "replicas", "seed", "chunk", "workers", "graph", "kernel", "init", "sim", "limit", "params",
              "output"},
             "config");
  ExperimentConfig c;
  c.raw = j;
  require(j.contains("experiment"), "config.experiment is required");
  read(j, "experiment", c.experiment, "config");
  const auto& ids = experiment_ids();
  require(std::find(ids.begin(), ids.end(), c.experiment) != ids.end(), "unknown experiment '" + c.experiment + "'");
  read(j, "replicas", c.replicas, "config");
  read(j, "seed", c.seed, "config");
  read(j, "chunk", c.chunk, "config");
  read(j, "workers", c.workers, "config");
  require(c.replicas >= 1, "replicas must be positive");
  require(c.chunk >= 1, "chunk must be positive");

  if (j.contains("graph")) {
    const json& g = j.at("graph");
    check_keys(g, {"n", "n_grid", "p", "symmetric", "self_loops", "sbm", "annealed"}, "graph");
    read(g, "n", c.graph.n, "graph");
    read(g, "n_grid", c.graph.n_grid, "graph");
    read(g, "p", c.graph.p, "graph");
    read(g, "symmetric", c.graph.symmetric, "graph");
    read(g, "self_loops", c.graph.self_loops, "graph");
    read(g, "annealed", c.graph.annealed, "graph");
    if (g.contains("sbm") && !g.at("sbm").is_null()) {
      const json& s = g.at("sbm");
      check_keys(s, {"p_intra", "q_inter"}, "graph.sbm");
      c.graph.sbm = true;
      read(s, "p_intra", c.graph.p_intra, "graph.sbm");
      read(s, "q_inter", c.graph.q_inter, "graph.sbm");
    }
  }
  require(c.graph.n >= 2, "graph.n must be at least 2");
  require(c.graph.p > 0.0 && c.graph.p <= 1.0, "graph.p must lie in (0, 1]");
  for (size_t n : c.graph.n_grid) require(n >= 2, "graph.n_grid entries must be at least 2");

  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    check_keys(k, {"type", "K", "modes", "intrinsic"}, "kernel");
    read(k, "type", c.kernel.type, "kernel");
    read(k, "K", c.kernel.K, "kernel");
    if (k.contains("modes"))
      for (const auto& m : k.at("modes")) {
        check_keys(m, {"a", "b", "re", "im"}, "kernel.modes[]");
        c.kernel.modes.push_back({m.at("a").get<int>(), m.at("b").get<int>(), cplx(m.value("re", 0.0), m.value("im", 0.0))});
      }
    if (k.contains("intrinsic"))
      for (const auto& m : k.at("intrinsic")) {
        check_keys(m, {"k", "re", "im"}, "kernel.intrinsic[]");
        c.kernel.intrinsic.push_back({m.at("k").get<int>(), cplx(m.value("re", 0.0), m.value("im", 0.0))});
      }
  }
  try {
    (void)make_kernel(c.kernel);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("kernel: ") + e.what());
  }

  c.init = make_init(j.value("init", json::object()), c.seed);

  if (j.contains("sim")) {
    const json& s = j.at("sim");
    check_keys(s, {"dt", "T", "snapshots", "renorm"}, "sim");
    read(s, "dt", c.sim.dt, "sim");
    read(s, "T", c.sim.T, "sim");
    read(s, "snapshots", c.sim.snapshots, "sim");
    std::string renorm = "expected";
    read(s, "renorm", renorm, "sim");
    if (renorm == "expected") c.sim.renorm = Renorm::Expected;
    else if (renorm == "actual") c.sim.renorm = Renorm::Actual;
    else throw ConfigError("sim.renorm must be expected or actual");
  }
  require(c.sim.dt > 0.0, "sim.dt must be positive");
  require(c.sim.T >= 0.0, "sim.T must be non-negative");
  for (double t : c.sim.snapshots) require(t >= 0.0 && t <= c.sim.T + 1e-12, "sim.snapshots must lie in [0, T]");
  require(std::is_sorted(c.sim.snapshots.begin(), c.sim.snapshots.end()), "sim.snapshots must be sorted");

  if (j.contains("limit")) {
    const json& l = j.at("limit");
    check_keys(l, {"A_max", "dt"}, "limit");
    read(l, "A_max", c.limit.A_max, "limit");
    read(l, "dt", c.limit.dt, "limit");
  }
  require(c.limit.A_max >= 1 && c.limit.dt > 0.0, "limit.A_max and limit.dt must be positive");

  if (j.contains("params")) {
    check_keys(j.at("params"), param_keys().at(c.experiment), "params");
    c.params = j.at("params");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, {"dir", "store", "A_store", "bins", "statistics"}, "output");
    read(o, "dir", c.output.dir, "output");
    read(o, "store", c.output.store, "output");
    read(o, "A_store", c.output.A_store, "output");
    read(o, "bins", c.output.bins, "output");
    read(o, "statistics", c.output.statistics, "output");
    require(c.output.store == "moments" || c.output.store == "phases", "output.store must be moments or phases");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);  // comments allowed
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace gf
