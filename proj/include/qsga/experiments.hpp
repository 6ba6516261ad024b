#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace qsga {

using Json = nlohmann::ordered_json;

// One experiment run: the deterministic report body plus optional per-trial
// CSV rows.  Wall-clock time is kept outside the report so that identical
// (config, seed) pairs serialize byte-identically.
struct RunOutcome {
  Json report;
  std::vector<std::string> csv;  // header row first; empty if not tabular
  bool pass = false;
  double seconds = 0.0;
};

// Dispatches on config["experiment"]  (orthogonality | gmp-verify |
// game-distance | structured | lhs-fraction | mh-inj | attack-simon |
// attack-dlog | money | qkd | hash-audit).  A seed given here overrides any
// "seed" field in the config.  Invalid configs raise std::invalid_argument
// with the violated precondition named.
RunOutcome run_experiment(const Json& config, std::uint64_t seed);

}  // namespace qsga
