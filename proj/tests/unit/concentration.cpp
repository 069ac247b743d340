#include <cmath>

#include "doctest.h"
#include "graphfluct/concentration.hpp"
#include "graphfluct/measures.hpp"
#include "graphfluct/stats.hpp"
#include "helpers.hpp"

using namespace gf;

TEST_SUITE("concentration") {
  TEST_CASE("complete graph has zero suprema") {
    const Graph g = gen_erdos_renyi(6, 1.0, 0, false);
    const Eigen::MatrixXd a = g.centered_dense();
    for (const PatternId& p : all_patterns()) {
      CHECK(sn_exact(a, p).value == 0.0);
      CHECK(sn_lower(centered_input(g), p, 2, 1).value == 0.0);
      CHECK(sn_upper(centered_input(a), p).value == doctest::Approx(0.0).scale(1.0));
    }
    const std::vector<double> v(6, 1.0);
    for (BernsteinStat b : {BernsteinStat::U1ij, BernsteinStat::U1vZT, BernsteinStat::U2ij, BernsteinStat::V2uDD})
      CHECK(bernstein_stat(g, b, v, v) == 0.0);
  }

  TEST_CASE("two-vertex hand case") {
    Eigen::MatrixXd a(2, 2);
    a << 1, -1, -1, 1;
    const PatternId pair{Pattern::Pair, 0};
    CHECK(sn_exact(a, pair).value == doctest::Approx(1.0));
    CHECK(sn_naive(a, pair).value == doctest::Approx(1.0));
  }

  TEST_CASE("exact enumeration matches the naive one and its witnesses") {
    for (uint64_t seed = 1; seed <= 3; ++seed) {
      const Eigen::MatrixXd a = Graph::from_matrix(testing::random_adjacency(6, 0.5, seed), 0.5).centered_dense();
      for (const PatternId& p : all_patterns(2)) {
        const SnResult e = sn_exact(a, p), nv = sn_naive(a, p);
        CHECK(e.value == doctest::Approx(nv.value).epsilon(1e-12));
        CHECK(std::abs(pattern_value(a, p, e.r, e.s, e.t)) == doctest::Approx(e.value).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("upper bounds dominate exact values") {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      const Graph g = gen_erdos_renyi(10, 0.5, seed, false);
      const Eigen::MatrixXd a = g.centered_dense();
      const CenteredInput in = centered_input(g);
      for (const PatternId& p : all_patterns(0)) CHECK(sn_upper(in, p).value >= sn_exact(a, p).value * (1 - 1e-12));
    }
  }

  TEST_CASE("lower bounds are valid and monotone in restarts") {
    const Graph g = gen_erdos_renyi(40, 0.5, 3, false);
    const Eigen::MatrixXd a = g.centered_dense();
    const CenteredInput in = centered_input(g);
    for (const PatternId& p : all_patterns(1)) {
      double prev = 0;
      for (int restarts : {1, 2, 4, 8}) {
        const SnResult r = sn_lower(in, p, restarts, 77);
        CHECK(r.value >= prev);
        CHECK(std::abs(pattern_value(a, p, r.r, r.s, r.t)) == doctest::Approx(r.value).epsilon(1e-12));
        CHECK(r.value <= sn_upper(in, p).value * (1 + 1e-12));
        prev = r.value;
      }
    }
  }

  TEST_CASE("pattern names round trip") {
    for (const PatternId& p : all_patterns(3)) {
      const PatternId q = PatternId::parse(p.name());
      CHECK(q.kind == p.kind);
      if (p.anchored()) CHECK(q.l == p.l);
    }
    CHECK_THROWS(PatternId::parse("nope"));
  }

  TEST_CASE("bilinear statistic equals the pair field paired with one") {
    const Graph g = gen_erdos_renyi(60, 0.4, 2, false);
    const std::vector<double> one(60, 1.0);
    const PairGraphMeasure pm(g, testing::uniform_phases(60, 1), 1.0);
    CHECK(bernstein_stat(g, BernsteinStat::U2ij, one, one) ==
          doctest::Approx(pm.pair([](double, double) { return 1.0; })).epsilon(1e-12));
  }

  TEST_CASE("single-row statistic concentrates at rate root np") {
    const size_t n = 1600;
    const double p = 0.5;
    std::vector<double> scaled;
    const std::vector<double> v(n, 1.0);
    for (uint64_t r = 0; r < 200; ++r) {
      const Graph g = gen_erdos_renyi(n, p, 31, false, true, r);
      scaled.push_back(std::pow(n * p, 0.4) * std::abs(bernstein_stat(g, BernsteinStat::U1ij, v, v)));
    }
    CHECK(quantile(scaled, 0.99) <= 1.0);
  }

  TEST_CASE("tail study rows") {
    const std::vector<PatternId> pats{PatternId::parse("pair"), PatternId::parse("ulr")};
    const auto rows = tail_study(pats, {10, 20}, [](size_t) { return 0.5; }, 5, 9, tail_options("auto", 2));
    REQUIRE(!rows.empty());
    for (const TailRow& r : rows) {
      CHECK(r.normalized.size() == 5);
      CHECK(r.q50 <= r.q90);
      CHECK(r.q99 <= r.max);
    }
    CHECK(rows.front().method == SnMethod::Exact);
    CHECK_THROWS_AS(tail_options("fast"), std::invalid_argument);
  }

  TEST_CASE("normalization scales") {
    CHECK(pattern_normalization(PatternId::parse("pair"), 100, 0.25) == doctest::Approx(5.0));
    CHECK(pattern_normalization(PatternId::parse("udd"), 100, 0.5) == doctest::Approx(25.0));
  }
}
