// Monte Carlo paths of the limiting fluctuation systems.
#include <cstdio>

#include "common.hpp"
#include "graphfluct/experiments.hpp"
#include "graphfluct/io.hpp"

namespace {

json coeffs(const Eigen::VectorXcd& v) {
  std::vector<double> re(static_cast<size_t>(v.size())), im(re.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re[static_cast<size_t>(i)] = v(i).real();
    im[static_cast<size_t>(i)] = v(i).imag();
  }
  return json{{"re", re}, {"im", im}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fluctuation SPDE solver"};
  std::string config_path, system = "eta", out = "spde.jsonl", preset = "stated";
  long long replicas = -1;
  double p = -1.0;
  size_t every = 0;
  app.add_option("--config", config_path, "config (kernel, init, sim.T, limit, seed)")->required();
  app.add_option("--system", system, "eta | coupled | local")->check(CLI::IsMember({"eta", "coupled", "local"}));
  app.add_option("--replicas", replicas, "number of paths (default: config replicas)");
  app.add_option("--p", p, "edge probability of the local system (default: graph.p)");
  app.add_option("--preset", preset, "initial pair field of the coupled system: stated | recursion")
      ->check(CLI::IsMember({"stated", "recursion"}));
  app.add_option("--record-every", every, "steps between stored states (0: initial and final only)");
  app.add_option("--out", out, "output JSONL");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : gf::tools::kExitConfig;
  }
  return gf::tools::guarded([&] {
    json raw = gf::tools::read_json(config_path);
    if (!raw.contains("experiment")) raw["experiment"] = "spde-compare";
    const gf::ExperimentConfig c = gf::parse_config(raw);
    const gf::KernelSpec k = gf::make_kernel(c.kernel);
    const int A = c.limit.A_max;
    const double pl = p < 0.0 ? c.graph.p : p;
    if (!(pl > 0.0 && pl <= 1.0)) throw gf::ConfigError("--p must lie in (0, 1]");
    if (system == "coupled" && !gf::reference_is_atomic(c.init))
      throw gf::ConfigError("the coupled system starts from the two-point law");
    const gf::SpectralField mu0 = gf::reference_field(c.init, A);
    const gf::MuTrajectory mu = gf::solve_fokker_planck(mu0, k, c.sim.T, c.limit.dt, A);
    const gf::NoiseModel noise(mu, A, c.limit.dt, mu.steps());
    gf::SpdeOptions opt;
    opt.dt = c.limit.dt;
    opt.T = c.sim.T;
    opt.record_every = every;
    const auto hp = preset == "stated" ? gf::HatEtaPreset::Stated : gf::HatEtaPreset::Recursion;

    gf::JsonlWriter w(out);
    w.write(json{{"config", c.raw}, {"config_hash", c.hash()}, {"version", gf::version_string()}, {"system", system},
                 {"seed", c.seed}, {"A_max", A}});
    const uint64_t m = replicas < 0 ? c.replicas : static_cast<uint64_t>(replicas);
    for (uint64_t r = 0; r < m; ++r) {
      if (system == "local") {
        const auto init = gf::sample_initial(gf::InitialLaw::LocalJoint, mu0, pl, A, c.seed, r);
        const gf::LocalPath path = gf::solve_local_system(init.zeta1, init.zeta2, init.eta, pl, mu, k, noise, c.seed, r, opt);
        for (size_t s = 0; s < path.times.size(); ++s)
          w.write(json{{"replica", r},
                       {"t", path.times[s]},
                       {"zeta1", coeffs(path.zeta1[s])},
                       {"zeta2", coeffs(path.zeta2[s])},
                       {"eta", coeffs(path.eta[s])}});
        continue;
      }
      const auto law = system == "eta" ? gf::InitialLaw::GaussianCLT : gf::InitialLaw::ExplicitAtoms;
      const auto init = gf::sample_initial(law, mu0, 1.0, A, c.seed, r, hp);
      const gf::NoisePath dW = gf::draw_noise_path(noise, c.seed, r);
      const gf::LimitPath path = system == "eta" ? gf::solve_limit_eta(init.eta, mu, k, dW, opt)
                                                 : gf::solve_coupled(init.eta, init.hat_eta, mu, k, dW, opt);
      for (size_t s = 0; s < path.times.size(); ++s) {
        json rec{{"replica", r}, {"t", path.times[s]}, {"eta", coeffs(path.eta[s])}};
        if (s < path.hat_eta.size()) rec["hat_eta_norm"] = path.hat_eta[s].norm();
        w.write(rec);
      }
    }
    std::printf("%s\n", out.c_str());
    return 0;
  });
}
