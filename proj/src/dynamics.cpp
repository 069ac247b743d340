#include "graphfluct/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "graphfluct/rng.hpp"
#include "graphfluct/rowsum.hpp"

namespace gf {

namespace {

double denominator(const Graph& g, Renorm renorm, size_t i) {
  if (renorm == Renorm::Expected) return static_cast<double>(g.n()) * g.p();
  return static_cast<double>(g.degree(i));
}

}  // namespace

DriftEngine::DriftEngine(const Graph& g, const KernelSpec& k, Renorm renorm, bool parallel)
    : g_(g), k_(k), parallel_(parallel) {
  const size_t n = g.n();
  inv_deg_.resize(n);
  degree_.resize(n);
  double ratio = 0.0;
  for (size_t i = 0; i < n; ++i) {
    degree_[i] = static_cast<double>(g.degree(i));
    const double d = denominator(g, renorm, i);
    if (d > 0.0) {
      inv_deg_[i] = 1.0 / d;
      ratio = std::max(ratio, degree_[i] / d);
    } else {
      inv_deg_[i] = 0.0;
      ++zero_degree_;
    }
  }
  bound_ = k.intrinsic_sup + k.gamma_sup * ratio;
  if (k.spectral()) {
    for (const auto& m : k.modes) {
      if (m.b == 0) needs_degree_ = true;
      else if (std::find(freqs_.begin(), freqs_.end(), std::abs(m.b)) == freqs_.end()) freqs_.push_back(std::abs(m.b));
    }
    std::sort(freqs_.begin(), freqs_.end());
    const size_t len = padded_len(g);
    cols_.assign(2 * freqs_.size() * len, 0.0);
    sums_.assign(2 * freqs_.size() * n, 0.0);
  }
}

void DriftEngine::operator()(const std::vector<double>& phases, std::vector<double>& out) {
  out.assign(g_.n(), 0.0);
  if (!k_.is_zero()) {
    if (k_.spectral()) interaction_spectral(phases, out);
    else interaction_generic(phases, out);
  }
  if (k_.has_intrinsic())
    for (size_t i = 0; i < g_.n(); ++i) out[i] += k_.intrinsic(phases[i]);
}

void DriftEngine::interaction_spectral(const std::vector<double>& phases, std::vector<double>& out) {
  const size_t n = g_.n(), len = padded_len(g_), nf = freqs_.size();
  // S_{i,β} = Σ_j ξ_ij e^{iβθ_j} for β in freqs_, stored as cos/sin row sums.
  if (g_.complete()) {
    for (size_t f = 0; f < nf; ++f) {
      double c = 0.0, s = 0.0;
      for (size_t j = 0; j < n; ++j) {
        c += std::cos(freqs_[f] * phases[j]);
        s += std::sin(freqs_[f] * phases[j]);
      }
      std::fill_n(sums_.begin() + (2 * f) * n, n, c);
      std::fill_n(sums_.begin() + (2 * f + 1) * n, n, s);
    }
  } else if (nf > 0) {
    for (size_t f = 0; f < nf; ++f) {
      double* cc = cols_.data() + (2 * f) * len;
      double* ss = cols_.data() + (2 * f + 1) * len;
      for (size_t j = 0; j < n; ++j) {
        cc[j] = std::cos(freqs_[f] * phases[j]);
        ss[j] = std::sin(freqs_[f] * phases[j]);
      }
    }
    if (parallel_) row_sums_omp(g_, cols_.data(), len, static_cast<int>(2 * nf), sums_.data(), n);
    else row_sums_serial(g_, cols_.data(), len, static_cast<int>(2 * nf), sums_.data(), n);
  }
  for (size_t i = 0; i < n; ++i) {
    cplx acc{0.0, 0.0};
    for (const auto& m : k_.modes) {
      cplx s;
      if (m.b == 0) {
        s = degree_[i];
      } else {
        const size_t f = static_cast<size_t>(std::lower_bound(freqs_.begin(), freqs_.end(), std::abs(m.b)) - freqs_.begin());
        s = cplx(sums_[(2 * f) * n + i], sums_[(2 * f + 1) * n + i]);
        if (m.b < 0) s = std::conj(s);
      }
      acc += m.c * std::polar(1.0, m.a * phases[i]) * s;
    }
    out[i] = acc.real() * inv_deg_[i];
  }
}

void DriftEngine::interaction_generic(const std::vector<double>& phases, std::vector<double>& out) {
  const auto n = static_cast<long long>(g_.n());
  const size_t words = g_.words();
#pragma omp parallel for schedule(static) if (parallel_)
  for (long long ii = 0; ii < n; ++ii) {
    const auto i = static_cast<size_t>(ii);
    const uint64_t* r = g_.row(i);
    double acc = 0.0;
    for (size_t w = 0; w < words; ++w) {
      uint64_t b = r[w];
      while (b) {
        const size_t j = w * 64 + static_cast<size_t>(__builtin_ctzll(b));
        acc += k_.gamma(phases[i], phases[j]);
        b &= b - 1;
      }
    }
    out[i] = acc * inv_deg_[i];
  }
}

void drift_reference(const Graph& g, const KernelSpec& k, Renorm renorm, const std::vector<double>& phases,
                     std::vector<double>& out) {
  const size_t n = g.n();
  out.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double d = denominator(g, renorm, i);
    double acc = 0.0;
    for (size_t j = 0; j < n; ++j)
      if (g.edge(i, j)) acc += k.gamma_at(phases[i], phases[j]);
    out[i] = (d > 0.0 ? acc / d : 0.0) + k.intrinsic_at(phases[i]);
  }
}

ParticleState step(const ParticleState& state, const Graph& g, const KernelSpec& k, const SimConfig& cfg,
                   const std::vector<double>& increments) {
  if (state.n() != g.n()) throw std::invalid_argument("state size does not match the graph");
  if (increments.size() != state.n()) throw std::invalid_argument("one increment per particle required");
  DriftEngine drift(g, k, cfg.renorm, cfg.parallel);
  std::vector<double> b;
  drift(state.phases, b);
  ParticleState next;
  next.t = state.t + cfg.dt;
  next.phases.resize(state.n());
  for (size_t i = 0; i < state.n(); ++i) next.phases[i] = wrap_angle(state.phases[i] + b[i] * cfg.dt + increments[i]);
  return next;
}

Trajectory simulate(const Graph& g, const ParticleState& init, const KernelSpec& k, const SimConfig& cfg,
                    const StepObserver& on_step, const SnapshotObserver& on_snapshot) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (init.n() != g.n()) throw std::invalid_argument("initial state size does not match the graph");
  std::vector<double> times = cfg.snapshot_times.empty() ? std::vector<double>{cfg.t_final} : cfg.snapshot_times;
  std::vector<long long> at_step;
  for (double t : times) {
    if (t < 0.0 || t > cfg.t_final + 1e-12) throw std::invalid_argument("snapshot time outside [0, T]");
    const auto s = std::llround(t / cfg.dt);
    if (!at_step.empty() && s <= at_step.back()) throw std::invalid_argument("snapshot times must map to increasing steps");
    at_step.push_back(s);
  }
  Trajectory traj;
  traj.provenance.noise_seed = cfg.seed;
  traj.provenance.replica = cfg.replica;
  traj.provenance.graph_seed = g.info().seed;

  DriftEngine drift(g, k, cfg.renorm, cfg.parallel);
  traj.zero_degree_vertices = drift.zero_degree_vertices();
  Rng rng(cfg.seed, Stream::Noise, cfg.replica);
  const double sdt = std::sqrt(cfg.dt);
  const size_t n = g.n();

  ParticleState cur = init;
  cur.t = 0.0;
  for (double& x : cur.phases) x = wrap_angle(x);
  std::vector<double> b(n), dB(n);
  size_t next_snap = 0;
  auto record = [&](long long s) {
    while (next_snap < at_step.size() && at_step[next_snap] == s) {
      traj.times.push_back(static_cast<double>(s) * cfg.dt);
      if (cfg.keep_states) traj.states.push_back(cur);
      if (on_snapshot) on_snapshot(cur);
      ++next_snap;
    }
  };
  record(0);
  const long long last = at_step.back();
  for (long long s = 1; s <= last; ++s) {
    drift(cur.phases, b);
    if (cfg.check_bounds) {
      const double lim = drift.drift_bound() * (1.0 + 1e-9) + 1e-12;
      for (double v : b)
        if (std::abs(v) > lim) throw std::runtime_error("drift exceeds its a priori bound");
    }
    for (size_t i = 0; i < n; ++i) dB[i] = sdt * rng.normal();
    if (on_step) on_step(cur, b, dB, cfg.dt);
    for (size_t i = 0; i < n; ++i) cur.phases[i] = wrap_angle(cur.phases[i] + b[i] * cfg.dt + dB[i]);
    cur.t = static_cast<double>(s) * cfg.dt;
    record(s);
  }
  return traj;
}

std::vector<ParticleState> simulate_batch(const Graph& g, const std::vector<ParticleState>& inits,
                                          const std::vector<uint64_t>& replicas, const KernelSpec& k,
                                          const SimConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!k.spectral()) throw std::invalid_argument("batched simulation needs a spectral kernel");
  if (inits.size() != replicas.size()) throw std::invalid_argument("one replica id per initial state");
  const size_t n = g.n(), B = inits.size();
  for (const auto& s : inits)
    if (s.n() != n) throw std::invalid_argument("initial state size does not match the graph");

  std::vector<int> freqs;
  for (const auto& m : k.modes)
    if (m.b != 0 && std::find(freqs.begin(), freqs.end(), std::abs(m.b)) == freqs.end()) freqs.push_back(std::abs(m.b));
  std::sort(freqs.begin(), freqs.end());
  const size_t nf = freqs.size();
  std::vector<double> inv_deg(n), degree(n);
  for (size_t i = 0; i < n; ++i) {
    degree[i] = static_cast<double>(g.degree(i));
    const double d = denominator(g, cfg.renorm, i);
    inv_deg[i] = d > 0.0 ? 1.0 / d : 0.0;
  }
  Eigen::MatrixXd adj(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) adj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g.edge(i, j);

  std::vector<ParticleState> cur = inits;
  for (auto& s : cur) {
    s.t = 0.0;
    for (double& x : s.phases) x = wrap_angle(x);
  }
  std::vector<Rng> rng;
  rng.reserve(B);
  for (uint64_t r : replicas) rng.emplace_back(cfg.seed, Stream::Noise, r);

  const long long steps = std::llround(cfg.t_final / cfg.dt);
  const double sdt = std::sqrt(cfg.dt);
  const auto cols = static_cast<Eigen::Index>(2 * nf * B);
  Eigen::MatrixXd X(n, cols), Y(n, cols);
  for (long long s = 1; s <= steps; ++s) {
    if (nf > 0 && !k.is_zero()) {
#pragma omp parallel for schedule(static) if (cfg.parallel)
      for (long long rr = 0; rr < static_cast<long long>(B); ++rr) {
        const auto r = static_cast<size_t>(rr);
        for (size_t f = 0; f < nf; ++f) {
          const auto c = static_cast<Eigen::Index>(2 * (r * nf + f));
          for (size_t j = 0; j < n; ++j) {
            X(static_cast<Eigen::Index>(j), c) = std::cos(freqs[f] * cur[r].phases[j]);
            X(static_cast<Eigen::Index>(j), c + 1) = std::sin(freqs[f] * cur[r].phases[j]);
          }
        }
      }
      Y.noalias() = adj * X;
    }
#pragma omp parallel for schedule(static) if (cfg.parallel)
    for (long long rr = 0; rr < static_cast<long long>(B); ++rr) {
      const auto r = static_cast<size_t>(rr);
      std::vector<double>& ph = cur[r].phases;
      std::vector<double> b(n, 0.0);
      for (size_t i = 0; i < n; ++i) {
        if (k.is_zero()) break;
        cplx acc{0.0, 0.0};
        for (const auto& m : k.modes) {
          cplx sum;
          if (m.b == 0) {
            sum = degree[i];
          } else {
            const size_t f = static_cast<size_t>(std::lower_bound(freqs.begin(), freqs.end(), std::abs(m.b)) - freqs.begin());
            const auto c = static_cast<Eigen::Index>(2 * (r * nf + f));
            sum = cplx(Y(static_cast<Eigen::Index>(i), c), Y(static_cast<Eigen::Index>(i), c + 1));
            if (m.b < 0) sum = std::conj(sum);
          }
          acc += m.c * std::polar(1.0, m.a * ph[i]) * sum;
        }
        b[i] = acc.real() * inv_deg[i];
      }
      if (k.has_intrinsic())
        for (size_t i = 0; i < n; ++i) b[i] += k.intrinsic(ph[i]);
      for (size_t i = 0; i < n; ++i) ph[i] = wrap_angle(ph[i] + b[i] * cfg.dt + sdt * rng[r].normal());
      cur[r].t = static_cast<double>(s) * cfg.dt;
    }
  }
  return cur;
}

OrderParameter order_parameter(const AtomicMeasure& m) {
  if (m.dim != 1) throw std::invalid_argument("order parameter needs a measure on the circle");
  double mass = 0.0, c = 0.0, s = 0.0;
  for (size_t k = 0; k < m.size(); ++k) {
    mass += m.w[k];
    c += m.w[k] * std::cos(m.x[k]);
    s += m.w[k] * std::sin(m.x[k]);
  }
  if (mass == 0.0) throw std::invalid_argument("order parameter of a zero-mass measure");
  OrderParameter op;
  op.r = std::hypot(c, s) / std::abs(mass);
  op.psi = wrap_angle(std::atan2(s / mass, c / mass));
  return op;
}

OrderParameter order_parameter(const std::vector<double>& phases) {
  if (phases.empty()) throw std::invalid_argument("order parameter of an empty state");
  double c = 0.0, s = 0.0;
  for (double x : phases) {
    c += std::cos(x);
    s += std::sin(x);
  }
  const double n = static_cast<double>(phases.size());
  OrderParameter op;
  op.r = std::hypot(c, s) / n;
  op.psi = wrap_angle(std::atan2(s, c));
  return op;
}

}  // namespace gf
