#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "qsga_cli_tests";

int run_cli(const std::string& args) {
  const int status = std::system((std::string(QSGA_BIN) + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

fs::path write_config(const std::string& name, const Json& config) {
  fs::create_directories(kWork);
  const fs::path path = kWork / name;
  std::ofstream(path) << config.dump(2);
  return path;
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return Json::parse(in);
}

Json ddh_verify_config() {
  return Json{{"hash", {{"family", "random_table"}, {"domain_bits", 3}, {"range", 5}}},
              {"preset", "ddh"},
              {"side", "pattern"},
              {"tolerance", 1e-9}};
}

}  // namespace

TEST_CASE("a passing run exits zero and writes a well-formed report") {
  const fs::path cfg = write_config("verify.json", ddh_verify_config());
  const fs::path out = kWork / "verify_report.json";
  REQUIRE(run_cli("gmp-verify --config " + cfg.string() + " --seed 7 --out " + out.string()) == 0);

  const Json report = read_json(out);
  CHECK(report.at("schema_version") == "1");
  CHECK(report.at("experiment") == "gmp-verify");
  CHECK(report.at("seed") == 7);
  CHECK(report.at("pass") == true);
  CHECK(report.at("config").at("preset") == "ddh");
  CHECK(report.contains("metrics"));
  CHECK(report.contains("tolerances"));
  CHECK(report.contains("verdicts"));
  CHECK(report.at("timings").contains("seconds"));
  for (const auto& [_, v] : report.at("verdicts").items()) CHECK(v == true);
}

TEST_CASE("a failing verdict exits one but still reports") {
  // A constant hash cannot meet a near-zero game-distance ceiling.
  Json cfg_json{
      {"hash",
       {{"family", "small_range"}, {"domain_bits", 3}, {"range", 5}, {"small_r", 1}}},
      {"preset", "ddh"},
      {"side", "secret"},
      {"max_distance", 1e-9}};
  const fs::path cfg = write_config("fail.json", cfg_json);
  const fs::path out = kWork / "fail_report.json";
  REQUIRE(run_cli("game-distance --config " + cfg.string() + " --seed 7 --out " + out.string()) ==
          1);
  const Json report = read_json(out);
  CHECK(report.at("pass") == false);
}

TEST_CASE("bad invocations exit with the usage code") {
  CHECK(run_cli("gmp-verify --config " + (kWork / "missing.json").string()) == 2);

  fs::create_directories(kWork);
  std::ofstream(kWork / "garbage.json") << "{not json";
  CHECK(run_cli("gmp-verify --config " + (kWork / "garbage.json").string()) == 2);

  // Config written for one experiment, invoked as another.
  Json cfg_json = ddh_verify_config();
  cfg_json["experiment"] = "gmp-verify";
  const fs::path cfg = write_config("mismatch.json", cfg_json);
  CHECK(run_cli("money --config " + cfg.string()) == 2);

  CHECK(run_cli("no-such-experiment --config " + cfg.string()) == 2);
}

TEST_CASE("reruns with the same seed are byte-identical apart from timings") {
  const fs::path cfg =
      write_config("orth.json", Json{{"hash",
                                      {{"family", "random_table"},
                                       {"domain_bits", 6},
                                       {"range", 8}}},
                                     {"seeds", 10},
                                     {"max_overlap", 1.0},
                                     {"min_seeds_within", 0}});
  const fs::path out_a = kWork / "orth_a.json";
  const fs::path out_b = kWork / "orth_b.json";
  REQUIRE(run_cli("orthogonality --config " + cfg.string() + " --seed 11 --out " +
                  out_a.string()) == 0);
  REQUIRE(run_cli("orthogonality --config " + cfg.string() + " --seed 11 --out " +
                  out_b.string()) == 0);
  Json a = read_json(out_a);
  Json b = read_json(out_b);
  a.erase("timings");
  b.erase("timings");
  CHECK(a.dump() == b.dump());

  // A different seed must actually change the measured numbers.
  const fs::path out_c = kWork / "orth_c.json";
  REQUIRE(run_cli("orthogonality --config " + cfg.string() + " --seed 12 --out " +
                  out_c.string()) == 0);
  Json c = read_json(out_c);
  c.erase("timings");
  CHECK(a.dump() != c.dump());
}

TEST_CASE("constant-hash audit reports a one-point image") {
  const fs::path cfg = write_config(
      "audit.json",
      Json{{"hash",
            {{"family", "small_range"}, {"domain_bits", 4}, {"range", 7}, {"small_r", 1}}},
           {"audit", "image"}});
  const fs::path out = kWork / "audit_report.json";
  REQUIRE(run_cli("hash-audit --config " + cfg.string() + " --seed 3 --out " + out.string()) == 0);
  const Json report = read_json(out);
  CHECK(report.at("metrics").at("image_size") == 1);
}

TEST_CASE("per-trial csv rows land next to the report when asked for") {
  const fs::path cfg =
      write_config("orth_csv.json", Json{{"hash",
                                          {{"family", "random_table"},
                                           {"domain_bits", 6},
                                           {"range", 8}}},
                                         {"seeds", 5},
                                         {"max_overlap", 1.0},
                                         {"min_seeds_within", 0}});
  const fs::path out = kWork / "orth_csv_report.json";
  REQUIRE(run_cli("orthogonality --config " + cfg.string() + " --seed 3 --out " + out.string() +
                  " --csv") == 0);
  const fs::path csv = kWork / "orth_csv_report.json.csv";
  REQUIRE(fs::exists(csv));
  std::ifstream in(csv);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 6);  // header plus one row per seed
}
