#include "graphfluct/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "graphfluct/rowsum.hpp"

namespace gf {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(kTwoPi);

void require_probability(double mass, const char* who) {
  if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument(std::string(who) + ": probability measure required");
}

// ∫ |h − c| over a segment where h moves linearly from h0 to h1.
double abs_linear(double h0, double h1, double c, double len) {
  const double d0 = h0 - c, d1 = h1 - c;
  if ((d0 >= 0.0) == (d1 >= 0.0)) return len * std::abs(0.5 * (d0 + d1));
  return len * (d0 * d0 + d1 * d1) / (2.0 * (std::abs(d0) + std::abs(d1)));
}

// Length of the part of a linear segment where h < c, minus the part where h > c.
double sign_balance(double h0, double h1, double c, double len) {
  if (h0 == h1) return h0 < c ? len : (h0 > c ? -len : 0.0);
  const double lo = std::min(h0, h1), hi = std::max(h0, h1);
  double below = (c - lo) / (hi - lo);
  below = std::clamp(below, 0.0, 1.0);
  return len * (2.0 * below - 1.0);
}

struct Segment {
  double len, h0, h1;
};

double w1_from_segments(const std::vector<Segment>& segs) {
  double lo = 0.0, hi = 0.0;
  for (const auto& s : segs) {
    lo = std::min({lo, s.h0, s.h1});
    hi = std::max({hi, s.h0, s.h1});
  }
  // The objective is convex in c; bisect on its derivative.
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    double bal = 0.0;
    for (const auto& s : segs) bal += sign_balance(s.h0, s.h1, mid, s.len);
    if (bal > 0.0) hi = mid;
    else lo = mid;
  }
  const double c = 0.5 * (lo + hi);
  double total = 0.0;
  for (const auto& s : segs) total += abs_linear(s.h0, s.h1, c, s.len);
  return total;
}

}  // namespace

double AtomicMeasure::mass() const { return std::accumulate(w.begin(), w.end(), 0.0); }

void AtomicMeasure::add(double at, double weight) {
  x.push_back(wrap_angle(at));
  w.push_back(weight);
}

void AtomicMeasure::add(double at_x, double at_y, double weight) {
  x.push_back(wrap_angle(at_x));
  y.push_back(wrap_angle(at_y));
  w.push_back(weight);
}

SpectralField::SpectralField(int dimension, int a_max) : dim(dimension), A(a_max) {
  if (dimension != 1 && dimension != 2) throw std::invalid_argument("spectral fields live on T or T^2");
  if (a_max < 0) throw std::invalid_argument("mode cutoff must be non-negative");
  const size_t s = static_cast<size_t>(2 * a_max + 1);
  c.assign(dimension == 1 ? s : s * s, cplx{});
}

double SpectralField::mass() const { return std::sqrt(kTwoPi) * at(0).real(); }

double SpectralField::value_at(double x) const {
  cplx acc{};
  for (int a = -A; a <= A; ++a) acc += at(a) * std::polar(kInvSqrt2Pi, a * x);
  return acc.real();
}

double SpectralField::cdf_at(double x) const {
  cplx acc = at(0) * kInvSqrt2Pi * x;
  for (int a = -A; a <= A; ++a) {
    if (a == 0) continue;
    acc += at(a) * kInvSqrt2Pi * (std::polar(1.0, a * x) - 1.0) / cplx(0.0, a);
  }
  return acc.real();
}

SpectralField SpectralField::truncated(int a_max) const {
  SpectralField out(dim, a_max);
  out.r = r;
  if (dim == 1) {
    for (int a = -a_max; a <= a_max; ++a) out.at(a) = at(a);
  } else {
    for (int a = -a_max; a <= a_max; ++a)
      for (int b = -a_max; b <= a_max; ++b) out.at(a, b) = at(a, b);
  }
  return out;
}

SpectralField SpectralField::uniform_density(int a_max) {
  SpectralField f(1, a_max);
  f.at(0) = kInvSqrt2Pi;
  return f;
}

SpectralField operator-(const SpectralField& u, const SpectralField& v) {
  if (u.dim != v.dim) throw std::invalid_argument("dimension mismatch");
  SpectralField out(u.dim, std::max(u.A, v.A));
  if (u.dim == 1) {
    for (int a = -out.A; a <= out.A; ++a) out.at(a) = u.at(a) - v.at(a);
  } else {
    for (int a = -out.A; a <= out.A; ++a)
      for (int b = -out.A; b <= out.A; ++b) out.at(a, b) = u.at(a, b) - v.at(a, b);
  }
  return out;
}

SpectralField operator*(double s, const SpectralField& u) {
  SpectralField out = u;
  for (auto& z : out.c) z *= s;
  return out;
}

double TrigPoly2::operator()(double x, double y) const {
  cplx acc{};
  for (const auto& t : terms) acc += t.c * std::polar(1.0, t.a * x + t.b * y);
  return acc.real();
}

double TrigPoly2::d1(double x, double y) const {
  cplx acc{};
  for (const auto& t : terms) acc += cplx(0.0, t.a) * t.c * std::polar(1.0, t.a * x + t.b * y);
  return acc.real();
}

double TrigPoly2::d2(double x, double y) const {
  cplx acc{};
  for (const auto& t : terms) acc += cplx(0.0, t.b) * t.c * std::polar(1.0, t.a * x + t.b * y);
  return acc.real();
}

double TrigPoly2::sobolev_norm(double r) const {
  std::map<std::pair<int, int>, cplx> merged;
  for (const auto& t : terms) merged[{t.a, t.b}] += t.c;
  double s = 0.0;
  for (const auto& [ab, c] : merged) {
    const double w = std::pow(1.0 + ab.first * ab.first + ab.second * ab.second, r);
    s += w * std::norm(kTwoPi * c);
  }
  return std::sqrt(s);
}

AtomicMeasure empirical_global(const ParticleState& s) {
  AtomicMeasure m;
  m.label = "global";
  const double w = 1.0 / static_cast<double>(s.n());
  for (double x : s.phases) m.add(x, w);
  return m;
}

AtomicMeasure empirical_local(const ParticleState& s, const Graph& g, size_t l, Renorm renorm, bool* empty) {
  if (l >= g.n() || s.n() != g.n()) throw std::invalid_argument("vertex out of range");
  AtomicMeasure m;
  m.label = "local";
  const double d = renorm == Renorm::Expected ? static_cast<double>(g.n()) * g.p() : static_cast<double>(g.degree(l));
  if (empty) *empty = d == 0.0;
  if (d == 0.0) return m;
  for (size_t i = 0; i < g.n(); ++i)
    if (g.edge(l, i)) m.add(s.phases[i], 1.0 / d);
  return m;
}

AtomicMeasure empirical_pair(const ParticleState& s, const Graph& g, size_t l1, size_t l2) {
  AtomicMeasure m;
  m.label = "pair";
  const double w = 1.0 / (static_cast<double>(g.n()) * g.p() * g.p());
  for (size_t i = 0; i < g.n(); ++i)
    if (g.edge(l1, i) && g.edge(l2, i)) m.add(s.phases[i], w);
  return m;
}

double pair(const AtomicMeasure& m, const std::function<double(double)>& f) {
  double s = 0.0;
  for (size_t k = 0; k < m.size(); ++k) s += m.w[k] * f(m.x[k]);
  return s;
}

cplx pair_complex(const AtomicMeasure& m, const std::function<cplx(double)>& f) {
  cplx s{};
  for (size_t k = 0; k < m.size(); ++k) s += m.w[k] * f(m.x[k]);
  return s;
}

double pair(const SpectralField& density, const std::function<double(double)>& f, int grid) {
  grid = std::max(grid, 4 * density.A + 8);
  const double h = kTwoPi / grid;
  double s = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double x = k * h;
    s += density.value_at(x) * f(x);
  }
  return s * h;
}

SpectralField fourier_coeffs(const AtomicMeasure& m, int a_max) {
  SpectralField f(m.dim, a_max);
  if (m.dim == 1) {
    for (size_t k = 0; k < m.size(); ++k) {
      const cplx step = std::polar(1.0, -m.x[k]);
      cplx z = m.w[k] * kInvSqrt2Pi;
      f.at(0) += z;
      cplx zp = z, zm = z;
      for (int a = 1; a <= a_max; ++a) {
        zp *= step;
        zm *= std::conj(step);
        f.at(a) += zp;
        f.at(-a) += zm;
      }
    }
    return f;
  }
  const int side = f.side();
  std::vector<cplx> ex(static_cast<size_t>(side)), ey(static_cast<size_t>(side));
  for (size_t k = 0; k < m.size(); ++k) {
    for (int a = -a_max; a <= a_max; ++a) {
      ex[static_cast<size_t>(a + a_max)] = std::polar(1.0, -a * m.x[k]);
      ey[static_cast<size_t>(a + a_max)] = std::polar(1.0, -a * m.y[k]);
    }
    const double w = m.w[k] / kTwoPi;
    for (int a = 0; a < side; ++a)
      for (int b = 0; b < side; ++b) f.c[static_cast<size_t>(a * side + b)] += w * ex[static_cast<size_t>(a)] * ey[static_cast<size_t>(b)];
  }
  return f;
}

FluctuationField::FluctuationField(AtomicMeasure m, AtomicMeasure reference, double scale)
    : m_(std::move(m)), atomic_ref_(true), ref_atoms_(std::move(reference)), scale_(scale) {}

FluctuationField::FluctuationField(AtomicMeasure m, SpectralField reference, double scale)
    : m_(std::move(m)), atomic_ref_(false), ref_field_(std::move(reference)), scale_(scale) {}

double FluctuationField::pair(const std::function<double(double)>& f) const {
  const double ref = atomic_ref_ ? gf::pair(ref_atoms_, f) : gf::pair(ref_field_, f);
  return scale_ * (gf::pair(m_, f) - ref);
}

cplx FluctuationField::pair_mode(int b) const {
  auto eb = [b](double x) { return std::polar(kInvSqrt2Pi, b * x); };
  const cplx ref = atomic_ref_ ? pair_complex(ref_atoms_, eb) : ref_field_.at(-b);
  return scale_ * (pair_complex(m_, eb) - ref);
}

SpectralField FluctuationField::coeffs(int a_max) const {
  const SpectralField ref = atomic_ref_ ? fourier_coeffs(ref_atoms_, a_max) : ref_field_.truncated(a_max);
  return scale_ * (fourier_coeffs(m_, a_max) - ref);
}

PairGraphMeasure::PairGraphMeasure(const Graph& g, std::vector<double> phases, double scale,
                                   std::vector<double> row_weights)
    : g_(g), x_(std::move(phases)), scale_(scale), u_(std::move(row_weights)) {
  if (x_.size() != g.n()) throw std::invalid_argument("phase vector does not match the graph");
  if (u_.empty()) u_.assign(g.n(), 1.0);
}

double PairGraphMeasure::pair(const std::function<double(double, double)>& f) const {
  const size_t n = g_.n();
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (u_[i] == 0.0) continue;
    double row = 0.0;
    for (size_t j = 0; j < n; ++j) row += g_.centered(i, j) * f(x_[i], x_[j]);
    total += u_[i] * row;
  }
  return scale_ * total / (static_cast<double>(n) * static_cast<double>(n));
}

SpectralField PairGraphMeasure::coeffs(int a_max) const {
  const size_t n = g_.n(), len = padded_len(g_);
  const bool sbm = g_.info().sbm;
  const int blocks = sbm ? 2 : 1;
  const size_t half = n / 2;
  const int nb = a_max + 1;
  const int per_block = 2 * nb;
  std::vector<double> cols(static_cast<size_t>(blocks * per_block) * len, 0.0);
  std::vector<double> sums(static_cast<size_t>(blocks * per_block) * n, 0.0);
  for (int c = 0; c < blocks; ++c)
    for (size_t j = 0; j < n; ++j) {
      if (sbm && (j >= half) != (c == 1)) continue;
      for (int b = 0; b < nb; ++b) {
        cols[static_cast<size_t>(c * per_block + 2 * b) * len + j] = std::cos(b * x_[j]);
        cols[static_cast<size_t>(c * per_block + 2 * b + 1) * len + j] = std::sin(b * x_[j]);
      }
    }
  row_sums_omp(g_, cols.data(), len, blocks * per_block, sums.data(), n);

  std::vector<cplx> all(static_cast<size_t>(nb), cplx{});  // Σ_j ē_b(θ_j)
  for (size_t j = 0; j < n; ++j)
    for (int b = 0; b < nb; ++b) all[static_cast<size_t>(b)] += std::polar(kInvSqrt2Pi, -b * x_[j]);

  const int side = 2 * a_max + 1;
  Eigen::MatrixXcd T(n, side), E(n, side);
  for (size_t i = 0; i < n; ++i) {
    for (int b = 0; b < nb; ++b) {
      cplx t = -all[static_cast<size_t>(b)];
      for (int c = 0; c < blocks; ++c) {
        const double p = sbm ? g_.p_ij(i, c == 0 ? 0 : n - 1) : g_.p();
        if (p <= 0.0) continue;
        const double cr = sums[static_cast<size_t>(c * per_block + 2 * b) * n + i];
        const double sr = sums[static_cast<size_t>(c * per_block + 2 * b + 1) * n + i];
        t += cplx(cr, -sr) * kInvSqrt2Pi / p;
      }
      T(static_cast<Eigen::Index>(i), b + a_max) = t;
      T(static_cast<Eigen::Index>(i), a_max - b) = std::conj(t);
    }
    for (int a = -a_max; a <= a_max; ++a)
      E(static_cast<Eigen::Index>(i), a + a_max) = u_[i] * std::polar(kInvSqrt2Pi, -a * x_[i]);
  }
  const Eigen::MatrixXcd C = E.transpose() * T;
  SpectralField out(2, a_max);
  const double s = scale_ / (static_cast<double>(n) * static_cast<double>(n));
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) out.c[static_cast<size_t>(a * side + b)] = s * C(a, b);
  return out;
}

double sobolev_norm(const SpectralField& f, double r) {
  double s = 0.0;
  if (f.dim == 1) {
    for (int a = -f.A; a <= f.A; ++a) s += std::pow(1.0 + a * a, -r) * std::norm(f.at(a));
  } else {
    for (int a = -f.A; a <= f.A; ++a)
      for (int b = -f.A; b <= f.A; ++b) s += std::pow(1.0 + a * a + b * b, -r) * std::norm(f.at(a, b));
  }
  return std::sqrt(s);
}

double w1_circle(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  require_probability(mu.mass(), "w1_circle");
  require_probability(nu.mass(), "w1_circle");
  std::vector<std::pair<double, double>> ev;
  ev.reserve(mu.size() + nu.size());
  for (size_t k = 0; k < mu.size(); ++k) ev.emplace_back(mu.x[k], mu.w[k]);
  for (size_t k = 0; k < nu.size(); ++k) ev.emplace_back(nu.x[k], -nu.w[k]);
  std::sort(ev.begin(), ev.end());
  // h = F_μ − F_ν is constant between consecutive atoms; the optimal shift is its weighted median.
  std::vector<std::pair<double, double>> hw;  // (h, length)
  double h = 0.0, prev = 0.0;
  for (const auto& [x, w] : ev) {
    if (x > prev) hw.emplace_back(h, x - prev);
    h += w;
    prev = x;
  }
  if (kTwoPi > prev) hw.emplace_back(h, kTwoPi - prev);
  std::vector<std::pair<double, double>> sorted = hw;
  std::sort(sorted.begin(), sorted.end());
  double acc = 0.0, c = sorted.empty() ? 0.0 : sorted.back().first;
  for (const auto& [hv, len] : sorted) {
    acc += len;
    if (acc >= 0.5 * kTwoPi) {
      c = hv;
      break;
    }
  }
  double total = 0.0;
  for (const auto& [hv, len] : hw) total += len * std::abs(hv - c);
  return total;
}

double w1_circle(const AtomicMeasure& mu, const SpectralField& nu, int grid) {
  require_probability(mu.mass(), "w1_circle");
  require_probability(nu.mass(), "w1_circle");
  std::vector<std::pair<double, double>> pts;  // (x, atom weight)
  pts.reserve(mu.size() + static_cast<size_t>(grid) + 1);
  for (size_t k = 0; k < mu.size(); ++k) pts.emplace_back(mu.x[k], mu.w[k]);
  for (int k = 0; k <= grid; ++k) pts.emplace_back(kTwoPi * k / grid, 0.0);
  std::sort(pts.begin(), pts.end());
  std::vector<Segment> segs;
  segs.reserve(pts.size());
  double F = 0.0, prev = 0.0, G_prev = 0.0;
  for (const auto& [x, w] : pts) {
    if (x > prev) {
      const double G = nu.cdf_at(x);
      segs.push_back({x - prev, F - G_prev, F - G});
      G_prev = G;
      prev = x;
    }
    F += w;
  }
  return w1_from_segments(segs);
}

double fourier_dual(const SpectralField& diff, int iterations) {
  if (diff.dim != 1) throw std::invalid_argument("fourier_dual works on the circle");
  const int A = diff.A;
  if (A == 0) return 0.0;
  // f = Σ_{a≥1} α_a cos(aθ) + β_a sin(aθ); objective ⟨diff, f⟩ = Σ g·(α, β).
  std::vector<double> g(static_cast<size_t>(2 * A));
  const double s2p = std::sqrt(kTwoPi);
  for (int a = 1; a <= A; ++a) {
    g[static_cast<size_t>(2 * (a - 1))] = s2p * diff.at(a).real();
    g[static_cast<size_t>(2 * (a - 1) + 1)] = -s2p * diff.at(a).imag();
  }
  double gn = 0.0;
  for (double v : g) gn += v * v;
  gn = std::sqrt(gn);
  if (gn == 0.0) return 0.0;
  const int N = 64 * A;
  // Bernstein: ‖T‖∞ ≤ max_grid |T| / (1 − πA/N) for a degree-A trigonometric polynomial.
  const double safety = 1.0 / (1.0 - kPi * A / N);
  std::vector<double> cs(static_cast<size_t>(N * A)), sn(static_cast<size_t>(N * A));
  for (int k = 0; k < N; ++k)
    for (int a = 1; a <= A; ++a) {
      cs[static_cast<size_t>(k * A + a - 1)] = std::cos(a * kTwoPi * k / N);
      sn[static_cast<size_t>(k * A + a - 1)] = std::sin(a * kTwoPi * k / N);
    }
  auto feasible_scale = [&](const std::vector<double>& f) {
    double mf = 0.0, md = 0.0;
    for (int k = 0; k < N; ++k) {
      double v = 0.0, d = 0.0;
      for (int a = 1; a <= A; ++a) {
        const double al = f[static_cast<size_t>(2 * (a - 1))], be = f[static_cast<size_t>(2 * (a - 1) + 1)];
        const double c = cs[static_cast<size_t>(k * A + a - 1)], s = sn[static_cast<size_t>(k * A + a - 1)];
        v += al * c + be * s;
        d += a * (-al * s + be * c);
      }
      mf = std::max(mf, std::abs(v));
      md = std::max(md, std::abs(d));
    }
    return std::max({mf * safety, md * safety, 1e-300});
  };
  auto value = [&](const std::vector<double>& f) {
    double v = 0.0;
    for (size_t q = 0; q < f.size(); ++q) v += g[q] * f[q];
    return v;
  };
  std::vector<double> f(g.size());
  for (size_t q = 0; q < g.size(); ++q) f[q] = g[q] / gn;
  double sc = feasible_scale(f);
  for (double& v : f) v /= sc;
  double best = value(f);

  // Second start: the W1 potential of the band-limited difference (φ' = ∓sign(F − median F)),
  // clipped to [−1, 1] around its midrange and smoothed by the Fejér kernel of degree A.
  // Both operations keep |φ| ≤ 1 and Lip φ ≤ 1.
  {
    const double h = kTwoPi / N;
    std::vector<double> F(static_cast<size_t>(N)), sorted;
    double acc = 0.0;
    for (int k = 0; k < N; ++k) {
      double d = 0.0;
      for (int a = 1; a <= A; ++a)
        d += g[static_cast<size_t>(2 * (a - 1))] * cs[static_cast<size_t>(k * A + a - 1)] +
             g[static_cast<size_t>(2 * (a - 1) + 1)] * sn[static_cast<size_t>(k * A + a - 1)];
      F[static_cast<size_t>(k)] = acc;
      acc += d / kPi * h;  // density of the difference in the cos/sin basis
    }
    sorted = F;
    std::nth_element(sorted.begin(), sorted.begin() + N / 2, sorted.end());
    const double med = sorted[static_cast<size_t>(N / 2)];
    std::vector<double> phi(static_cast<size_t>(N));
    double run = 0.0, lo = 0.0, hi = 0.0;
    for (int k = 0; k < N; ++k) {
      phi[static_cast<size_t>(k)] = run;
      lo = std::min(lo, run);
      hi = std::max(hi, run);
      run -= (F[static_cast<size_t>(k)] > med ? 1.0 : -1.0) * h;
    }
    const double mid = 0.5 * (lo + hi);
    for (double& v : phi) v = std::clamp(v - mid, -1.0, 1.0);
    for (double sign : {1.0, -1.0}) {
      std::vector<double> cand(g.size());
      for (int a = 1; a <= A; ++a) {
        double ca = 0.0, sa = 0.0;
        for (int k = 0; k < N; ++k) {
          ca += phi[static_cast<size_t>(k)] * cs[static_cast<size_t>(k * A + a - 1)];
          sa += phi[static_cast<size_t>(k)] * sn[static_cast<size_t>(k * A + a - 1)];
        }
        const double fejer = 1.0 - static_cast<double>(a) / (A + 1);
        cand[static_cast<size_t>(2 * (a - 1))] = sign * fejer * 2.0 * ca / N;
        cand[static_cast<size_t>(2 * (a - 1) + 1)] = sign * fejer * 2.0 * sa / N;
      }
      const double cs_scale = std::max(1.0, feasible_scale(cand));
      for (double& v : cand) v /= cs_scale;
      if (value(cand) > best) {
        best = value(cand);
        f = cand;
      }
    }
  }

  for (int it = 1; it <= iterations; ++it) {
    const double eta = 1.0 / std::sqrt(static_cast<double>(it));
    for (size_t q = 0; q < f.size(); ++q) f[q] += eta * g[q] / gn;
    sc = std::max(1.0, feasible_scale(f));
    for (double& v : f) v /= sc;
    best = std::max(best, value(f));
  }
  return best;
}

BLInterval bl_distance(const AtomicMeasure& mu, const AtomicMeasure& nu, int a_max) {
  BLInterval out;
  out.upper = w1_circle(mu, nu);
  out.lower = fourier_dual(fourier_coeffs(mu, a_max) - fourier_coeffs(nu, a_max));
  return out;
}

BLInterval bl_distance(const AtomicMeasure& mu, const SpectralField& nu, int a_max) {
  BLInterval out;
  out.upper = w1_circle(mu, nu);
  out.lower = fourier_dual(fourier_coeffs(mu, a_max) - nu.truncated(a_max));
  return out;
}

double cn_integrand(const std::vector<double>& phases, const Graph& g, const TrigPoly2& test, const KernelSpec& k) {
  const size_t n = g.n();
  std::vector<double> H(n, 0.0), G1(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double h = 0.0, g1 = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double c = g.centered(i, j);
      h += c * k.gamma_at(phases[i], phases[j]);
      g1 += c * test.d1(phases[i], phases[j]);
    }
    H[i] = h;
    G1[i] = g1;
  }
  double first = 0.0, second = 0.0;
  for (size_t i = 0; i < n; ++i) {
    first += G1[i] * H[i];
    for (size_t j = 0; j < n; ++j) second += g.centered(i, j) * test.d2(phases[i], phases[j]) * H[j];
  }
  const double nn = static_cast<double>(n);
  return (first + second) / (nn * nn * nn);
}

double cn_remainder(const std::vector<double>& times, const std::vector<std::vector<double>>& snapshots,
                    const Graph& g, const TrigPoly2& test, const KernelSpec& k, double t) {
  if (times.size() != snapshots.size()) throw std::invalid_argument("one time per snapshot");
  if (k.is_zero()) return 0.0;
  double total = 0.0, prev_t = 0.0, prev_v = 0.0;
  bool have = false;
  for (size_t s = 0; s < times.size() && times[s] <= t + 1e-12; ++s) {
    const double v = cn_integrand(snapshots[s], g, test, k);
    if (have) total += 0.5 * (times[s] - prev_t) * (v + prev_v);
    prev_t = times[s];
    prev_v = v;
    have = true;
  }
  return total;
}

}  // namespace gf
