#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "graphfluct/experiments.hpp"
#include "graphfluct/io.hpp"
#include "graphfluct/stats.hpp"
#include "helpers.hpp"

using namespace gf;

namespace {

json small_lln() {
  return {{"experiment", "lln"},
          {"replicas", 6},
          {"seed", 4},
          {"chunk", 2},
          {"graph", {{"n_grid", {40, 80}}, {"p", 0.5}}},
          {"kernel", {{"type", "kuramoto"}, {"K", 2.0}}},
          {"init", {{"kind", "iid"}, {"law", "uniform"}}},
          {"sim", {{"dt", 1e-2}, {"T", 0.2}, {"snapshots", {0.1, 0.2}}}},
          {"limit", {{"A_max", 8}, {"dt", 1e-2}}}};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config validation") {
    CHECK_NOTHROW(parse_config(small_lln()));
    json bad = small_lln();
    bad["graph"]["colour"] = "red";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = small_lln();
    bad["experiment"] = "nonsense";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = small_lln();
    bad["graph"]["p"] = 1.5;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = small_lln();
    bad["sim"]["dt"] = -1.0;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = small_lln();
    bad["init"]["law"] = "two_point";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = small_lln();
    bad["params"] = {{"p_grid", {0.5}}};
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    for (const std::string& id : experiment_ids()) CHECK(!id.empty());
  }

  TEST_CASE("config hash ignores workers and output directory") {
    json a = small_lln(), b = small_lln(), c = small_lln();
    b["workers"] = 3;
    b["output"] = {{"dir", "elsewhere"}};
    c["seed"] = 5;
    CHECK(parse_config(a).hash() == parse_config(b).hash());
    CHECK(parse_config(a).hash() != parse_config(c).hash());
    CHECK(parse_config(a).hash().size() == 16);
  }

  TEST_CASE("two-sample Kolmogorov-Smirnov") {
    const std::vector<double> x{0.1, 0.4, 0.2, 0.9, 0.5};
    const KsResult same = ks_two_sample(x, x);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == doctest::Approx(1.0));
    const KsResult apart = ks_two_sample({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {11, 12, 13, 14, 15, 16, 17, 18, 19, 20});
    CHECK(apart.statistic == 1.0);
    CHECK(apart.p_value < 1e-3);
    CHECK(kolmogorov_q(1.36) == doctest::Approx(0.0494).epsilon(0.01));
    // level calibration under the null
    Rng rng(3, Stream::Trial);
    int rejected = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> a(200), b(200);
      for (double& v : a) v = rng.normal();
      for (double& v : b) v = rng.normal();
      rejected += ks_two_sample(a, b).p_value < 0.05;
    }
    CHECK(rejected / double(trials) == doctest::Approx(0.05).epsilon(0.4));
  }

  TEST_CASE("descriptive statistics") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(mean(v) == 2.5);
    CHECK(variance(v) == doctest::Approx(5.0 / 3));
    CHECK(quantile(v, 0.5) == 2.5);
    CHECK(quantile(v, 1.0) == 4.0);
    const LinearFit fit = linear_regression({1, 2, 3}, {3, 5, 7});
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    const Histogram h = histogram(v, 2);
    CHECK(h.counts.size() == 2);
    CHECK(h.counts[0] + h.counts[1] == 4);
  }

  TEST_CASE("order parameter of the limit") {
    json j = small_lln();
    j["kernel"] = {{"type", "zero"}};
    CHECK(psi_reference(parse_config(j)).r == doctest::Approx(0.0).scale(1.0));
    j["init"] = {{"kind", "iid"}, {"law", "two-point"}};
    j["sim"]["T"] = 0.6;
    j["limit"] = {{"A_max", 8}, {"dt", 1e-3}};
    const OrderParameter op = psi_reference(parse_config(j));
    CHECK(op.r == doctest::Approx(std::exp(-0.3) / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(op.psi == doctest::Approx(kPi / 4).epsilon(1e-10));
    CHECK(psi_statistic({1.0, 0.1}, {1.0, kTwoPi - 0.1}, 100) == doctest::Approx(2.0));
    CHECK(degree_fluctuation(60, 100, 0.5) == doctest::Approx(std::sqrt(50.0) * 0.2));
  }

  TEST_CASE("single-replica law-of-large-numbers run emits one distance per snapshot") {
    json j = small_lln();
    j["replicas"] = 1;
    const Collected c = collect(parse_config(j), false);
    CHECK(c.failures.empty());
    for (size_t n : {40u, 80u}) {
      const std::string name = "w1_global[n=" + std::to_string(n) + "]";
      CHECK(select(c.rows, name).size() == 2);
      CHECK(select(c.rows, name, 0.1).size() == 1);
    }
  }

  TEST_CASE("runs are resumable and thread-count independent") {
    const auto dir = testing::scratch_dir("runner");
    json j = small_lln();
    j["output"] = {{"dir", (dir / "serial").string()}};
    const RunResult a = run(parse_config(j), false);
    CHECK_FALSE(a.skipped);
    const RunResult again = run(parse_config(j), false);
    CHECK(again.skipped);
    CHECK(again.dir == a.dir);
    j["output"] = {{"dir", (dir / "parallel").string()}};
    j["workers"] = 4;
    const RunResult b = run(parse_config(j), true);
    const std::string sa = slurp(std::filesystem::path(a.dir) / "stats.csv");
    CHECK(!sa.empty());
    CHECK(sa == slurp(std::filesystem::path(b.dir) / "stats.csv"));
    CHECK(std::filesystem::exists(std::filesystem::path(a.dir) / "summary.json"));
    CHECK(std::filesystem::exists(std::filesystem::path(a.dir) / "config.json"));
  }

  TEST_CASE("spectral fields survive a JSON round trip") {
    SpectralField f(1, 3);
    for (int a = -3; a <= 3; ++a) f.at(a) = cplx(0.1 * a, -0.2 * a * a);
    const SpectralField g = spectral_from_json(spectral_to_json(f));
    REQUIRE(g.A == 3);
    for (int a = -3; a <= 3; ++a) CHECK(g.at(a) == f.at(a));
  }
}
