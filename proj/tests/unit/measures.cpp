#include <cmath>

#include "doctest.h"
#include "graphfluct/measures.hpp"
#include "helpers.hpp"

using namespace gf;

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(kTwoPi);

ParticleState state_of(std::vector<double> x) {
  ParticleState s;
  s.phases = std::move(x);
  return s;
}

const std::vector<std::vector<int>> kHand4{{1, 1, 0, 1}, {0, 1, 1, 0}, {1, 1, 1, 1}, {0, 0, 1, 0}};

}  // namespace

TEST_SUITE("measures") {
  TEST_CASE("global empirical measure") {
    const AtomicMeasure one = empirical_global(state_of({0.0}));
    REQUIRE(one.size() == 1);
    CHECK(one.x[0] == 0.0);
    CHECK(one.w[0] == 1.0);
    const auto x = testing::uniform_phases(37, 1);
    const AtomicMeasure m = empirical_global(state_of(x));
    CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-14));
    const cplx moment = pair_complex(m, [](double t) { return std::exp(cplx(0, t)); });
    const OrderParameter op = order_parameter(x);
    CHECK(std::abs(moment - std::polar(op.r, op.psi)) < 1e-14);
  }

  TEST_CASE("local empirical measure on a hand graph") {
    const Graph g = Graph::from_matrix(kHand4, 0.5);
    const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
    for (size_t l = 0; l < 4; ++l) {
      const AtomicMeasure m = empirical_local(state_of(x), g, l, Renorm::Expected);
      CHECK(m.mass() == doctest::Approx(g.degree(l) / 2.0).epsilon(1e-15));
      // weight ξ_li / (n p) = 1/2 on each neighbour
      double f = 0;
      for (size_t i = 0; i < 4; ++i) f += kHand4[l][i] * 0.5 * std::cos(x[i]);
      CHECK(pair(m, [](double t) { return std::cos(t); }) == doctest::Approx(f).epsilon(1e-15));
      const AtomicMeasure a = empirical_local(state_of(x), g, l, Renorm::Actual);
      CHECK(a.mass() == doctest::Approx(1.0).epsilon(1e-15));
    }
    const Graph full = gen_erdos_renyi(4, 1.0, 0, false);
    const AtomicMeasure loc = empirical_local(state_of(x), full, 2, Renorm::Expected);
    const AtomicMeasure glob = empirical_global(state_of(x));
    CHECK(pair(loc, [](double t) { return std::sin(t); }) ==
          doctest::Approx(pair(glob, [](double t) { return std::sin(t); })).epsilon(1e-15));
  }

  TEST_CASE("pair empirical measure") {
    const auto x = testing::uniform_phases(4, 2);
    CHECK(empirical_pair(state_of(x), gen_erdos_renyi(4, 1.0, 0, false)).mass() == doctest::Approx(1.0));
    const std::vector<std::vector<int>> disjoint{{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}};
    CHECK(empirical_pair(state_of(x), Graph::from_matrix(disjoint, 0.5)).mass() == 0.0);
    // mass tends to 1 as n grows
    double prev = 1e9;
    for (size_t n : {200u, 3200u}) {
      double dev = 0;
      for (uint64_t r = 0; r < 40; ++r) {
        const Graph g = gen_erdos_renyi(n, 0.5, 3, false, true, r);
        dev += std::abs(empirical_pair(state_of(testing::uniform_phases(n, r)), g).mass() - 1.0) / 40;
      }
      CHECK(dev < prev);
      prev = dev;
    }
  }

  TEST_CASE("centered pair field") {
    const auto x = testing::uniform_phases(4, 3);
    const Graph full = gen_erdos_renyi(4, 1.0, 0, false);
    CHECK(PairGraphMeasure(full, x, 1.0).pair([](double a, double b) { return std::cos(a - 2 * b); }) == 0.0);
    const Graph g = Graph::from_matrix(kHand4, 0.5);
    double s = 0, t = 0;
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) {
        s += g.centered(i, j);
        t += g.centered(i, j) * std::sin(x[i]) * std::cos(x[j]);
      }
    const PairGraphMeasure pm(g, x, 1.0);
    CHECK(pm.pair([](double, double) { return 1.0; }) == doctest::Approx(s / 16).epsilon(1e-14));
    CHECK(pm.pair([](double a, double b) { return std::sin(a) * std::cos(b); }) == doctest::Approx(t / 16).epsilon(1e-14));
  }

  TEST_CASE("fluctuation fields") {
    const auto x = testing::uniform_phases(50, 4);
    const AtomicMeasure m = empirical_global(state_of(x));
    const FluctuationField zero(m, m, 3.0);
    CHECK(zero.pair([](double t) { return std::cos(3 * t); }) == doctest::Approx(0.0).scale(1.0));
    const SpectralField ref = SpectralField::uniform_density(8);
    const FluctuationField eta(m, ref, std::sqrt(50.0));
    const cplx direct = std::sqrt(50.0) * fourier_coeffs(m, 8).at(-1);
    CHECK(std::abs(eta.pair_mode(1) - direct) < 1e-13);
  }

  TEST_CASE("Fourier coefficients") {
    AtomicMeasure d0;
    d0.add(0.0, 1.0);
    const SpectralField f = fourier_coeffs(d0, 6);
    for (int a = -6; a <= 6; ++a) CHECK(std::abs(f.at(a) - kInvSqrt2Pi) < 1e-15);
    const SpectralField u = SpectralField::uniform_density(6);
    for (int a = -6; a <= 6; ++a)
      if (a != 0) CHECK(std::abs(u.at(a)) == 0.0);
    CHECK(u.mass() == doctest::Approx(1.0));
    AtomicMeasure five;
    Rng rng(4, Stream::Trial);
    for (int k = 0; k < 5; ++k) five.add(kTwoPi * rng.uniform(), rng.normal());
    const SpectralField g = fourier_coeffs(five, 10);
    for (int a = -10; a <= 10; ++a) {
      cplx s{};
      for (int k = 0; k < 5; ++k) s += five.w[k] * std::exp(cplx(0, -a * five.x[k]));
      CHECK(std::abs(g.at(a) - s * kInvSqrt2Pi) < 1e-14);
    }
  }

  TEST_CASE("negative Sobolev norms") {
    CHECK(sobolev_norm(SpectralField(1, 5), 1.0) == 0.0);
    for (double theta : {0.0, 1.3}) {
      AtomicMeasure d;
      d.add(theta, 1.0);
      const double v = std::pow(sobolev_norm(fourier_coeffs(d, 20000), 1.0), 2);
      CHECK(v == doctest::Approx(0.5 / std::tanh(kPi)).epsilon(1e-4));
    }
    const AtomicMeasure m = empirical_global(state_of(testing::uniform_phases(20, 8)));
    const SpectralField h = fourier_coeffs(m, 16) - SpectralField::uniform_density(16);
    double prev = 1e9;
    for (double r : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      const double v = sobolev_norm(h, r);
      CHECK(v <= prev);
      prev = v;
    }
  }

  TEST_CASE("Wasserstein and bounded-Lipschitz distances") {
    AtomicMeasure a, b;
    a.add(0.0, 1.0);
    b.add(0.7, 1.0);
    CHECK(w1_circle(a, b) == doctest::Approx(0.7).epsilon(1e-12));
    AtomicMeasure c;
    c.add(kTwoPi - 0.2, 1.0);
    CHECK(w1_circle(a, c) == doctest::Approx(0.2).epsilon(1e-12));
    const AtomicMeasure m = empirical_global(state_of(testing::uniform_phases(30, 9)));
    const BLInterval self = bl_distance(m, m);
    CHECK(self.lower == doctest::Approx(0.0).scale(1.0));
    CHECK(self.upper == doctest::Approx(0.0).scale(1.0));
    const BLInterval ab = bl_distance(a, b);
    CHECK(ab.lower <= ab.upper + 1e-12);
    CHECK(ab.lower > 0.55);
    AtomicMeasure far;
    far.add(2.5, 1.0);
    const BLInterval af = bl_distance(a, far);
    CHECK(af.lower <= 2.0);  // |f| <= 1 caps the pairing of two unit atoms
    CHECK(af.lower > 1.5);
  }

  TEST_CASE("empirical samples approach the uniform law at rate one over root n") {
    const SpectralField u = SpectralField::uniform_density(32);
    std::vector<double> means;
    for (size_t n : {100u, 400u, 1600u}) {
      double s = 0;
      for (uint64_t r = 0; r < 30; ++r) s += w1_circle(empirical_global(state_of(testing::uniform_phases(n, 50 + r))), u) / 30;
      means.push_back(s);
    }
    CHECK(means[1] / means[0] == doctest::Approx(0.5).epsilon(0.25));
    CHECK(means[2] / means[1] == doctest::Approx(0.5).epsilon(0.25));
  }

  TEST_CASE("graph remainder integrand") {
    const TrigPoly2 test{{{1, -2, cplx(0.5, 0)}, {-1, 2, cplx(0.5, 0)}, {1, 1, cplx(0, -0.25)}, {-1, -1, cplx(0, 0.25)}}};
    const KernelSpec k = kuramoto_kernel(2.0);
    const auto x = testing::uniform_phases(5, 10);
    CHECK(cn_integrand(x, gen_erdos_renyi(5, 1.0, 0, false), test, k) == 0.0);
    const Graph g = Graph::from_matrix(testing::random_adjacency(5, 0.5, 3), 0.5);
    double s = 0;
    for (size_t i = 0; i < 5; ++i)
      for (size_t j = 0; j < 5; ++j)
        for (size_t l = 0; l < 5; ++l) {
          s += g.centered(i, j) * g.centered(i, l) * test.d1(x[i], x[j]) * k.gamma_at(x[i], x[l]);
          s += g.centered(i, j) * g.centered(j, l) * test.d2(x[i], x[j]) * k.gamma_at(x[j], x[l]);
        }
    CHECK(cn_integrand(x, g, test, k) == doctest::Approx(s / 125).epsilon(1e-12));
    // constant integrand over two snapshots
    CHECK(cn_remainder({0.0, 0.5}, {x, x}, g, test, k, 0.5) == doctest::Approx(0.5 * s / 125).epsilon(1e-12));
  }

  TEST_CASE("trigonometric test polynomial derivatives") {
    const TrigPoly2 p{{{2, -1, cplx(0.3, 0.2)}, {-2, 1, cplx(0.3, -0.2)}}};
    const double x = 0.7, y = 2.1, h = 1e-6;
    CHECK(p.d1(x, y) == doctest::Approx((p(x + h, y) - p(x - h, y)) / (2 * h)).epsilon(1e-7));
    CHECK(p.d2(x, y) == doctest::Approx((p(x, y + h) - p(x, y - h)) / (2 * h)).epsilon(1e-7));
  }
}
