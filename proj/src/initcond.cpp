#include "graphfluct/initcond.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "graphfluct/rng.hpp"

namespace gf {

std::string InitSpec::label() const {
  switch (kind) {
    case InitKind::IID:
      return law == IidLaw::Uniform ? "iid-uniform" : law == IidLaw::TwoPoint ? "iid-two-point" : "iid-custom";
    case InitKind::MixingChain: return "mixing-chain";
    case InitKind::GraphAdapted: return "graph-adapted";
  }
  return "?";
}

namespace {

constexpr double kHalfPi = 0.5 * kPi;

// Inverse-CDF sampler for a density given by Fourier coefficients.
class DensitySampler {
 public:
  explicit DensitySampler(const SpectralField& f, int grid = 4096) : x_(grid + 1), F_(grid + 1) {
    if (f.dim != 1) throw std::invalid_argument("custom initial law must be a density on the circle");
    const double mass = f.mass();
    if (!(mass > 0.0)) throw std::invalid_argument("custom initial density has no mass");
    for (int k = 0; k <= grid; ++k) {
      x_[k] = kTwoPi * k / grid;
      F_[k] = f.cdf_at(x_[k]) / mass;
      if (k > 0 && F_[k] < F_[k - 1] - 1e-9) throw std::invalid_argument("custom initial density is negative");
      if (k > 0) F_[k] = std::max(F_[k], F_[k - 1]);
    }
    F_.back() = 1.0;
  }

  double operator()(double u) const {
    const auto it = std::upper_bound(F_.begin(), F_.end(), u);
    const size_t k = std::clamp<size_t>(static_cast<size_t>(it - F_.begin()), 1, F_.size() - 1);
    const double span = F_[k] - F_[k - 1];
    const double frac = span > 0.0 ? (u - F_[k - 1]) / span : 0.0;
    return wrap_angle(x_[k - 1] + frac * (x_[k] - x_[k - 1]));
  }

 private:
  std::vector<double> x_, F_;
};

ParticleState sample_graph_adapted(const InitSpec& spec, const Graph& g, uint64_t replica) {
  const size_t n = g.n();
  if (!g.symmetric() || std::abs(g.p() - 0.5) > 1e-12 || g.info().sbm) {
    if (!spec.allow_extension)
      throw std::invalid_argument("graph-adapted initial data needs a symmetric graph with p = 1/2");
    std::cerr << "warning: graph-adapted initial data outside the symmetric p = 1/2 setting\n";
  }
  Rng tie(spec.seed, Stream::TieBreak, replica);
  ParticleState s;
  s.phases.assign(n, 0.0);
  if (n == 0) return s;
  // Set of vertices placed at 0, as a bit row.
  std::vector<uint64_t> at_zero(g.words(), 0);
  size_t zeros = 0;
  auto place = [&](size_t k, bool zero) {
    if (zero) {
      at_zero[k >> 6] |= uint64_t{1} << (k & 63);
      ++zeros;
    } else {
      s.phases[k] = kHalfPi;
    }
  };
  place(0, tie.bernoulli(0.5));
  const double inv_p = 1.0 / g.p();
  for (size_t k = 1; k < n; ++k) {
    // Column k restricted to i < k; the graph is symmetric, so read row k.
    const uint64_t* row = g.row(k);
    size_t e_zero = 0, e_all = 0;
    for (size_t w = 0; w <= (k - 1) >> 6; ++w) {
      uint64_t mask = ~uint64_t{0};
      if (w == (k - 1) >> 6 && ((k - 1) & 63) != 63) mask = (uint64_t{1} << (((k - 1) & 63) + 1)) - 1;
      const uint64_t bits = row[w] & mask;
      e_all += static_cast<size_t>(__builtin_popcountll(bits));
      e_zero += static_cast<size_t>(__builtin_popcountll(bits & at_zero[w]));
    }
    const size_t halfpi = k - zeros;
    const double r0 = static_cast<double>(e_zero) * inv_p - static_cast<double>(zeros);
    const double rh = static_cast<double>(e_all - e_zero) * inv_p - static_cast<double>(halfpi);
    if (rh > r0) place(k, true);
    else if (rh < r0) place(k, false);
    else place(k, tie.bernoulli(0.5));
  }
  return s;
}

}  // namespace

ParticleState sample_init(const InitSpec& spec, const Graph* g, size_t n, uint64_t replica) {
  if (g != nullptr && g->n() != n) throw std::invalid_argument("graph size does not match n");
  if (spec.kind == InitKind::GraphAdapted) {
    if (g == nullptr) throw std::invalid_argument("graph-adapted initial data needs the graph");
    return sample_graph_adapted(spec, *g, replica);
  }
  Rng rng(spec.seed, Stream::Init, replica);
  ParticleState s;
  s.phases.resize(n);
  if (spec.kind == InitKind::MixingChain) {
    const int m = spec.chain_states;
    if (m < 2) throw std::invalid_argument("mixing chain needs at least two states");
    if (spec.locality < 0.0 || spec.locality >= 1.0) throw std::invalid_argument("locality must lie in [0, 1)");
    auto uniform_state = [&] { return static_cast<int>(std::min<double>(rng.uniform() * m, m - 1)); };
    int state = spec.chain_start >= 0 ? spec.chain_start % m : uniform_state();
    for (size_t i = 0; i < n; ++i) {
      if (i > 0) {
        if (rng.uniform() < spec.locality) state = (state + (rng.bernoulli(0.5) ? 1 : m - 1)) % m;
        else state = uniform_state();
      }
      s.phases[i] = kTwoPi * state / m;
    }
    return s;
  }
  switch (spec.law) {
    case IidLaw::Uniform:
      for (double& x : s.phases) x = kTwoPi * rng.uniform();
      break;
    case IidLaw::TwoPoint:
      for (double& x : s.phases) x = rng.bernoulli(0.5) ? 0.0 : kHalfPi;
      break;
    case IidLaw::Custom: {
      const DensitySampler draw(spec.custom);
      for (double& x : s.phases) x = draw(rng.uniform());
      break;
    }
  }
  return s;
}

bool reference_is_atomic(const InitSpec& spec) {
  return spec.kind == InitKind::GraphAdapted || (spec.kind == InitKind::IID && spec.law == IidLaw::TwoPoint);
}

AtomicMeasure reference_atoms(const InitSpec& spec) {
  if (!reference_is_atomic(spec)) throw std::invalid_argument("initial law has no atomic reference");
  AtomicMeasure m;
  m.add(0.0, 0.5);
  m.add(kHalfPi, 0.5);
  m.label = "mu0";
  return m;
}

SpectralField reference_density(const InitSpec& spec, int a_max) {
  if (reference_is_atomic(spec)) return fourier_coeffs(reference_atoms(spec), a_max);
  if (spec.kind == InitKind::IID && spec.law == IidLaw::Custom) return spec.custom.truncated(a_max);
  return SpectralField::uniform_density(a_max);  // uniform and the stationary chain law
}

FluctuationField eta0(const ParticleState& s, const InitSpec& spec, int a_max) {
  const double scale = std::sqrt(static_cast<double>(s.n()));
  if (reference_is_atomic(spec)) return FluctuationField(empirical_global(s), reference_atoms(spec), scale);
  return FluctuationField(empirical_global(s), reference_density(spec, a_max), scale);
}

PairGraphMeasure hat_eta0(const ParticleState& s, const Graph& g) {
  return PairGraphMeasure(g, s.phases, std::sqrt(static_cast<double>(g.n())));
}

double hat_eta0_norm(const ParticleState& s, const Graph& g, double r, int a_max) {
  return sobolev_norm(hat_eta0(s, g).coeffs(a_max), r);
}

PairGraphMeasure varpi0(const ParticleState& s, const Graph& g, size_t l) {
  if (l >= g.n()) throw std::invalid_argument("vertex out of range");
  std::vector<double> u(g.n());
  for (size_t i = 0; i < g.n(); ++i) u[i] = g.centered(l, i);
  return PairGraphMeasure(g, s.phases, std::sqrt(static_cast<double>(g.n()) * g.p()), std::move(u));
}

double gamma_hat_eta0(const ParticleState& s, const Graph& g, const KernelSpec& k,
                      const std::function<double(double)>& f) {
  return hat_eta0(s, g).pair([&](double x, double y) { return k.gamma_at(x, y) * f(x); });
}

}  // namespace gf
