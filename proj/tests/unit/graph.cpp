#include <cmath>

#include "doctest.h"
#include "graphfluct/graph.hpp"
#include "graphfluct/rng.hpp"
#include "graphfluct/rowsum.hpp"
#include "helpers.hpp"

using namespace gf;

TEST_SUITE("rng") {
  TEST_CASE("philox known answers") {
    using A4 = std::array<uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) == A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("streams are reproducible and distinct") {
    Rng a(5, Stream::Noise, 3), b(5, Stream::Noise, 3), c(5, Stream::Noise, 4), d(5, Stream::Init, 3);
    const uint64_t x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
  }

  TEST_CASE("uniform and normal moments") {
    Rng rng(11, Stream::Trial);
    const int m = 200000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < m; ++i) {
      su += rng.uniform();
      const double z = rng.normal();
      sn += z;
      sn2 += z * z;
    }
    CHECK(std::abs(su / m - 0.5) < 4 * std::sqrt(1.0 / 12 / m));
    CHECK(std::abs(sn / m) < 4 / std::sqrt(m));
    CHECK(std::abs(sn2 / m - 1.0) < 4 * std::sqrt(2.0 / m));
  }
}

TEST_SUITE("graph") {
  TEST_CASE("p = 1 gives every edge") {
    const Graph g = gen_erdos_renyi(4, 1.0, 0, false);
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j)
        if (i != j) CHECK(g.edge(i, j));
    CHECK(g.complete());
  }

  TEST_CASE("symmetric edge density within three sigma") {
    const size_t n = 1000;
    const Graph g = gen_erdos_renyi(n, 0.5, 7, true);
    CHECK(g.symmetric());
    size_t count = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        count += g.edge(i, j);
        REQUIRE(g.edge(i, j) == g.edge(j, i));
      }
    const double pairs = n * (n - 1) / 2.0;
    CHECK(std::abs(count / pairs - 0.5) < 3 * std::sqrt(0.25 / pairs));
  }

  TEST_CASE("same seed gives identical bits") {
    const Graph a = gen_erdos_renyi(500, 0.5, 7, false), b = gen_erdos_renyi(500, 0.5, 7, false);
    const Graph c = gen_erdos_renyi(500, 0.5, 8, false);
    bool same = true, differs = false;
    for (size_t i = 0; i < 500; ++i)
      for (size_t w = 0; w < a.words(); ++w) {
        same = same && a.row(i)[w] == b.row(i)[w];
        differs = differs || a.row(i)[w] != c.row(i)[w];
      }
    CHECK(same);
    CHECK(differs);
  }

  TEST_CASE("single rows regenerate the asymmetric graph") {
    const Graph g = gen_erdos_renyi(300, 0.3, 9, false, true, 4);
    for (size_t i : {0u, 17u, 299u}) {
      const auto row = gen_erdos_renyi_row(300, 0.3, 9, 4, i);
      for (size_t w = 0; w < g.words(); ++w) CHECK(row[w] == g.row(i)[w]);
    }
  }

  TEST_CASE("block model degenerate probabilities") {
    const Graph g = gen_sbm(4, 1.0, 0.0, 3);
    CHECK(g.edge(0, 1));
    CHECK(g.edge(2, 3));
    CHECK_FALSE(g.edge(0, 2));
    CHECK_FALSE(g.edge(3, 1));
  }

  TEST_CASE("block model densities") {
    const size_t n = 2000, h = n / 2;
    const Graph g = gen_sbm(n, 0.6, 0.2, 21);
    double within = 0, across = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) (g.community(i) == g.community(j) ? within : across) += g.edge(i, j);
    const double cells = 2.0 * h * h;
    CHECK(std::abs(within / cells - 0.6) < 3 * std::sqrt(0.24 / cells));
    CHECK(std::abs(across / cells - 0.2) < 3 * std::sqrt(0.16 / cells));
  }

  TEST_CASE("block model with equal probabilities reproduces Erdos-Renyi") {
    for (bool sym : {false, true}) {
      const Graph a = gen_sbm(130, 0.4, 0.4, 5, sym), b = gen_erdos_renyi(130, 0.4, 5, sym);
      bool same = true;
      for (size_t i = 0; i < 130; ++i)
        for (size_t w = 0; w < a.words(); ++w) same = same && a.row(i)[w] == b.row(i)[w];
      CHECK(same);
    }
  }

  TEST_CASE("spectral norm") {
    CHECK(spectral_norm(dense_operator(Eigen::MatrixXd::Zero(5, 5))).value == 0.0);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = -1;
    CHECK(spectral_norm(dense_operator(d)).value == doctest::Approx(3.0).epsilon(1e-8));
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      const Graph g = Graph::from_matrix(testing::random_adjacency(8, 0.5, seed), 0.5);
      const Eigen::MatrixXd a = g.centered_dense();
      const double oracle = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
      const SpectralNormResult r = spectral_norm(centered_operator(g), 1e-12);
      CHECK(r.converged);
      CHECK(std::abs(r.value - oracle) <= 1e-8 * oracle);
    }
  }

  TEST_CASE("save and load round trip") {
    const auto dir = testing::scratch_dir("graph-io");
    const Graph g = gen_sbm(78, 0.7, 0.1, 4, true, false, 2);
    const std::string path = (dir / "g.bin").string();
    g.save(path);
    const Graph h = Graph::load(path);
    REQUIRE(h.n() == g.n());
    CHECK(h.info().sbm);
    CHECK(h.info().p_intra == 0.7);
    CHECK(h.symmetric());
    CHECK_FALSE(h.info().self_loops);
    bool same = true;
    for (size_t i = 0; i < g.n(); ++i)
      for (size_t w = 0; w < g.words(); ++w) same = same && g.row(i)[w] == h.row(i)[w];
    CHECK(same);
  }

  TEST_CASE("masked row sums agree with the plain loop") {
    const Graph g = gen_erdos_renyi(150, 0.35, 12, false);
    const size_t ld = padded_len(g);
    const int cols = 3;
    std::vector<double> x(ld * cols, 0.0), y1(g.n() * cols), y2(g.n() * cols);
    Rng rng(1, Stream::Trial);
    for (int c = 0; c < cols; ++c)
      for (size_t j = 0; j < g.n(); ++j) x[c * ld + j] = rng.normal();
    row_sums_serial(g, x.data(), ld, cols, y1.data(), g.n());
    row_sums_omp(g, x.data(), ld, cols, y2.data(), g.n());
    for (int c = 0; c < cols; ++c)
      for (size_t i = 0; i < g.n(); ++i) {
        double s = 0;
        for (size_t j = 0; j < g.n(); ++j) s += g.edge(i, j) ? x[c * ld + j] : 0.0;
        CHECK(y1[c * g.n() + i] == doctest::Approx(s).epsilon(1e-12));
        CHECK(y1[c * g.n() + i] == y2[c * g.n() + i]);
      }
  }

  TEST_CASE("degrees and sparse lists") {
    Graph g = gen_erdos_renyi(90, 0.2, 2, false);
    g.build_sparse();
    size_t total = 0;
    for (size_t i = 0; i < g.n(); ++i) {
      CHECK(static_cast<size_t>(g.neighbors_end(i) - g.neighbors_begin(i)) == g.degree(i));
      total += g.degree(i);
    }
    CHECK(total == g.edge_count());
  }
}
