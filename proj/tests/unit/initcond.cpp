#include <cmath>

#include "doctest.h"
#include "graphfluct/initcond.hpp"
#include "graphfluct/stats.hpp"
#include "helpers.hpp"

using namespace gf;

namespace {

InitSpec spec_of(InitKind kind, IidLaw law = IidLaw::Uniform, uint64_t seed = 5) {
  InitSpec s;
  s.kind = kind;
  s.law = law;
  s.seed = seed;
  return s;
}

double cosine(double t) { return std::cos(t); }

}  // namespace

TEST_SUITE("initcond") {
  TEST_CASE("two-point draws split evenly") {
    const size_t n = 1000000;
    const ParticleState s = sample_init(spec_of(InitKind::IID, IidLaw::TwoPoint), nullptr, n);
    size_t zeros = 0;
    for (double x : s.phases) {
      REQUIRE((x == 0.0 || x == doctest::Approx(kPi / 2)));
      zeros += x == 0.0;
    }
    CHECK(std::abs(zeros / double(n) - 0.5) < 3 * std::sqrt(0.25 / n));
  }

  TEST_CASE("i.i.d. draws ignore the graph") {
    const InitSpec spec = spec_of(InitKind::IID);
    const Graph a = gen_erdos_renyi(50, 0.5, 1, true), b = gen_erdos_renyi(50, 0.5, 2, true);
    CHECK(sample_init(spec, &a, 50, 3).phases == sample_init(spec, &b, 50, 3).phases);
    CHECK(sample_init(spec, &a, 50, 3).phases != sample_init(spec, &a, 50, 4).phases);
  }

  TEST_CASE("mixing chain stays on its grid") {
    InitSpec spec = spec_of(InitKind::MixingChain);
    spec.chain_states = 8;
    const ParticleState s = sample_init(spec, nullptr, 500);
    for (double x : s.phases) {
      const double k = x / (kTwoPi / 8);
      CHECK(std::abs(k - std::round(k)) < 1e-12);
    }
    spec.locality = 1.0;
    CHECK_THROWS_AS(sample_init(spec, nullptr, 10), std::invalid_argument);
  }

  TEST_CASE("graph-adapted recursion on the all-ones graph alternates in pairs") {
    const Graph g = Graph::from_matrix(std::vector<std::vector<int>>(6, std::vector<int>(6, 1)), 0.5);
    REQUIRE(g.symmetric());
    for (uint64_t r = 0; r < 20; ++r) {
      const ParticleState s = sample_init(spec_of(InitKind::GraphAdapted), &g, 6, r);
      // centered weights are all +1, so R_0 and R_π/2 count the earlier vertices at each site
      for (size_t k = 0; k + 1 < 6; k += 2) CHECK(s.phases[k + 1] != s.phases[k]);
    }
  }

  TEST_CASE("graph-adapted marginals are uniform on the two sites") {
    const size_t n = 60, draws = 800;
    std::vector<double> first(draws), last(draws);
    for (uint64_t r = 0; r < draws; ++r) {
      const Graph g = gen_erdos_renyi(n, 0.5, 13, true, true, r);
      const ParticleState s = sample_init(spec_of(InitKind::GraphAdapted), &g, n, r);
      first[r] = s.phases[0] == 0.0;
      last[r] = s.phases[n - 1] == 0.0;
    }
    CHECK(std::abs(mean(first) - 0.5) < 3 * std::sqrt(0.25 / draws));
    CHECK(std::abs(mean(last) - 0.5) < 3 * std::sqrt(0.25 / draws));
  }

  TEST_CASE("graph-adapted sampling rejects asymmetric graphs") {
    const Graph g = gen_erdos_renyi(10, 0.5, 1, false);
    CHECK_THROWS_AS(sample_init(spec_of(InitKind::GraphAdapted), &g, 10), std::invalid_argument);
    InitSpec ext = spec_of(InitKind::GraphAdapted);
    ext.allow_extension = true;
    CHECK(sample_init(ext, &g, 10).phases.size() == 10);
  }

  TEST_CASE("initial fluctuation variance under two-point data") {
    const size_t n = 400;
    std::vector<double> iid, adapted_z;
    for (uint64_t r = 0; r < 2000; ++r) {
      const InitSpec tp = spec_of(InitKind::IID, IidLaw::TwoPoint);
      iid.push_back(eta0(sample_init(tp, nullptr, n, r), tp).pair(cosine));
      const Graph g = gen_erdos_renyi(n, 0.5, 17, true, true, r);
      const InitSpec ga = spec_of(InitKind::GraphAdapted);
      adapted_z.push_back(eta0(sample_init(ga, &g, n, r), ga).pair(cosine));
    }
    CHECK(std::abs(variance(iid) - 0.25) < 3 * variance_se(iid));
    // the atom at π/2 carries −Z₁, so Var Z₁ = Var Z₂ = −Cov = 1/4
    CHECK(std::abs(variance(adapted_z) - 0.25) < 3 * variance_se(adapted_z));
    const InitSpec ga = spec_of(InitKind::GraphAdapted);
    const Graph g = gen_erdos_renyi(n, 0.5, 17, true);
    CHECK(eta0(sample_init(ga, &g, n), ga).pair([](double) { return 1.0; }) == doctest::Approx(0.0).scale(1.0));
  }

  TEST_CASE("pair fields vanish on the complete graph") {
    const Graph g = gen_erdos_renyi(30, 1.0, 0, false);
    const ParticleState s = sample_init(spec_of(InitKind::IID), nullptr, 30);
    CHECK(hat_eta0_norm(s, g, 2.0) < 1e-14);
    CHECK(std::abs(varpi0(s, g, 3).pair([](double a, double b) { return std::cos(a + b); })) < 1e-14);
  }

  TEST_CASE("anchored pair field on a hand graph") {
    const size_t n = 5;
    const Graph g = Graph::from_matrix(testing::random_adjacency(n, 0.5, 8), 0.5);
    const ParticleState s = sample_init(spec_of(InitKind::IID), nullptr, n, 2);
    auto f = [](double a, double b) { return std::sin(a) * std::cos(2 * b) + 0.3; };
    for (size_t l = 0; l < n; ++l) {
      double want = 0;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) want += g.centered(l, i) * g.centered(i, j) * f(s.phases[i], s.phases[j]);
      want *= std::sqrt(n * 0.5) / (n * n);
      CHECK(varpi0(s, g, l).pair(f) == doctest::Approx(want).epsilon(1e-13));
    }
  }

  TEST_CASE("pair field norm decreases with n for i.i.d. data") {
    std::vector<double> means;
    for (size_t n : {100u, 400u}) {
      double m = 0;
      for (uint64_t r = 0; r < 40; ++r) {
        const Graph g = gen_erdos_renyi(n, 0.5, 19, false, true, r);
        m += std::pow(hat_eta0_norm(sample_init(spec_of(InitKind::IID), nullptr, n, r), g, 2.0), 2) / 40;
      }
      means.push_back(m);
    }
    CHECK(means[1] < means[0]);
  }

  TEST_CASE("graph-adapted data bias the interaction towards negative values at a quarter turn") {
    const size_t n = 400;
    std::vector<double> v;
    for (uint64_t r = 0; r < 300; ++r) {
      const Graph g = gen_erdos_renyi(n, 0.5, 23, true, true, r);
      v.push_back(gamma_hat_eta0(sample_init(spec_of(InitKind::GraphAdapted), &g, n, r), g, kuramoto_kernel(2.0),
                                 [](double t) { return std::sin(t); }));
    }
    CHECK(mean(v) < -3 * standard_error(v));
  }
}
