// Generate an Erdős–Rényi or two-block graph and write it in the binary format.
#include <cstdio>
#include <vector>

#include "common.hpp"
#include "graphfluct/graph.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Random graph generator"};
  size_t n = 0;
  double p = 0.5;
  uint64_t seed = 1, replica = 0;
  bool symmetric = false, no_loops = false;
  std::vector<double> sbm;
  std::string out;
  app.add_option("--n", n, "vertices")->required()->check(CLI::PositiveNumber);
  app.add_option("--p", p, "edge probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", seed, "graph seed");
  app.add_option("--replica", replica, "sub-stream index");
  app.add_flag("--symmetric", symmetric, "undirected graph");
  app.add_flag("--no-self-loops", no_loops, "exclude the diagonal");
  app.add_option("--sbm", sbm, "two-block model: intra- and inter-block probabilities")->expected(2);
  app.add_option("--out", out, "output path (sidecar written to <out>.json)")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : gf::tools::kExitConfig;
  }
  return gf::tools::guarded([&] {
    for (double q : sbm)
      if (q < 0.0 || q > 1.0) throw gf::ConfigError("--sbm probabilities must lie in [0, 1]");
    const gf::Graph g = sbm.empty() ? gf::gen_erdos_renyi(n, p, seed, symmetric, !no_loops, replica)
                                    : gf::gen_sbm(n, sbm[0], sbm[1], seed, symmetric, !no_loops, replica);
    g.save(out);
    std::printf("n=%zu edges=%zu -> %s\n", g.n(), g.edge_count(), out.c_str());
    return 0;
  });
}
