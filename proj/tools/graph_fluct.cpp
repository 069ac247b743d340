// Experiment runner: graph-fluct <experiment> --config <path> [--replicas M] [--seed S] [--workers W] [--out DIR]
#include <cstdio>

#include "common.hpp"
#include "graphfluct/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Experiment runner"};
  std::string experiment, config_path, out;
  long long replicas = -1, seed = -1;
  int workers = -1;
  bool serial = false;
  app.add_option("experiment", experiment, "experiment id")->required()->check(CLI::IsMember(gf::experiment_ids()));
  app.add_option("--config", config_path, "config file (JSON)")->required();
  app.add_option("--replicas", replicas, "override replicas");
  app.add_option("--seed", seed, "override seed");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("--out", out, "output root directory");
  app.add_flag("--serial", serial, "run chunks on one thread");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : gf::tools::kExitConfig;
  }
  return gf::tools::guarded([&] {
    json raw = gf::tools::read_json(config_path);
    if (raw.contains("experiment") && raw.at("experiment") != experiment)
      throw gf::ConfigError("config is for '" + raw.at("experiment").get<std::string>() + "', not '" + experiment + "'");
    raw["experiment"] = experiment;
    if (replicas >= 0) raw["replicas"] = replicas;
    if (seed >= 0) raw["seed"] = seed;
    if (workers >= 0) raw["workers"] = workers;
    if (!out.empty()) raw["output"]["dir"] = out;
    const gf::ExperimentConfig c = gf::parse_config(raw);
    const gf::RunResult res = gf::run(c, !serial);
    if (res.skipped) {
      std::printf("%s: already complete\n", res.dir.c_str());
      return 0;
    }
    std::printf("%s\n%s\n", res.dir.c_str(), res.data.summary.dump(2).c_str());
    if (!res.data.failures.empty()) {
      for (const auto& f : res.data.failures)
        std::fprintf(stderr, "replica %llu failed: %s\n", static_cast<unsigned long long>(f.replica), f.error.c_str());
      return gf::tools::kExitReplica;
    }
    return 0;
  });
}
