// Seeded experiment runner: loads a JSON config, dispatches to the library,
// prints the report, and exits 0 on all-verdicts-pass, 1 on any failure, and
// 2 on a configuration error.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qsga/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qsga - hash-based quantum group action experiment runner"};
  std::string experiment;
  std::string config_path;
  std::string out_path;
  bool want_csv = false;
  std::uint64_t seed = 0;
  bool seed_given = false;

  app.add_option("experiment", experiment,
                 "orthogonality | gmp-verify | game-distance | structured | lhs-fraction | "
                 "mh-inj | attack-simon | attack-dlog | money | qkd | hash-audit")
      ->required();
  app.add_option("--config", config_path, "JSON experiment configuration")->required();
  app.add_option("--seed", seed, "64-bit run seed (overrides the config's)")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_flag("--csv", want_csv, "also write per-trial rows next to the report (.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config '" << config_path << "'\n";
      return 2;
    }
    qsga::Json config = qsga::Json::parse(in);
    if (config.contains("experiment") && config["experiment"] != experiment) {
      std::cerr << "error: config is for experiment '"
                << config["experiment"].get<std::string>() << "', not '" << experiment << "'\n";
      return 2;
    }
    config["experiment"] = experiment;
    if (!seed_given) seed = config.value("seed", std::uint64_t{0});

    qsga::RunOutcome run = qsga::run_experiment(config, seed);
    run.report["timings"] = {{"seconds", run.seconds}};

    const std::string body = run.report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(out_path);
      out << body;
      if (!out) {
        std::cerr << "error: cannot write report to '" << out_path << "'\n";
        return 2;
      }
    }
    if (want_csv && !run.csv.empty()) {
      const std::string csv_path =
          (out_path.empty() ? "report" : out_path) + ".csv";
      std::ofstream csv(csv_path);
      for (const std::string& row : run.csv) csv << row << "\n";
    }
    return run.pass ? 0 : 1;
  } catch (const qsga::Json::exception& e) {
    std::cerr << "error: config JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
