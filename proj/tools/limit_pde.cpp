// Fokker–Planck solution of the mean-field limit, as time-stamped spectral fields.
#include <cstdio>
#include <fstream>

#include "common.hpp"
#include "graphfluct/experiments.hpp"
#include "graphfluct/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mean-field limit solver"};
  std::string config_path, out = "limit.json";
  size_t every = 100;
  double alpha = -1.0;
  app.add_option("--config", config_path, "config (kernel, init, sim.T, limit)")->required();
  app.add_option("--out", out, "output JSON");
  app.add_option("--record-every", every, "steps between stored fields")->check(CLI::PositiveNumber);
  app.add_option("--sbm-alpha", alpha,
                 "two-block system with intra-block weight alpha; block 2 starts from the uniform density");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : gf::tools::kExitConfig;
  }
  return gf::tools::guarded([&] {
    json raw = gf::tools::read_json(config_path);
    if (!raw.contains("experiment")) raw["experiment"] = "lln";
    const gf::ExperimentConfig c = gf::parse_config(raw);
    const gf::KernelSpec k = gf::make_kernel(c.kernel);
    const int A = c.limit.A_max;
    const gf::SpectralField mu0 = gf::reference_field(c.init, A);
    auto dump = [&](const gf::MuTrajectory& mu) {
      json fields = json::array();
      for (size_t s = 0; s <= mu.steps(); ++s)
        if (s % every == 0 || s == mu.steps()) {
          json f = gf::spectral_to_json(mu.mu[s]);
          f["t"] = static_cast<double>(s) * mu.dt;
          fields.push_back(f);
        }
      return fields;
    };
    json doc{{"config_hash", c.hash()}, {"version", gf::version_string()}, {"dt", c.limit.dt}, {"A_max", A}};
    if (alpha >= 0.0) {
      if (alpha > 1.0) throw gf::ConfigError("--sbm-alpha must lie in [0, 1]");
      const auto [first, second] =
          gf::solve_fokker_planck_sbm(mu0, gf::SpectralField::uniform_density(A), alpha, k, c.sim.T, c.limit.dt, A);
      doc["block1"] = dump(first);
      doc["block2"] = dump(second);
    } else {
      doc["fields"] = dump(gf::solve_fokker_planck(mu0, k, c.sim.T, c.limit.dt, A));
    }
    std::ofstream(out) << doc.dump() << '\n';
    std::printf("%s\n", out.c_str());
    return 0;
  });
}
