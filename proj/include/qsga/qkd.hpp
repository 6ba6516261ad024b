#pragma once

#include <cstdint>
#include <vector>

#include "qsga/group_action.hpp"

namespace qsga {

enum class AdversaryKind { none, tamper_first };

struct ProtocolConfig {
  std::size_t rounds = 0;  // n, even
  AdversaryKind adversary = AdversaryKind::none;
  std::size_t tamper_count = 0;  // tamper_first: positions 0..t-1 substituted

  void validate() const;
};

struct QkdRound {
  std::uint64_t alice_g = 0;
  std::uint64_t received_g = 0;  // after any tampering
  bool checked = false;          // i in S
  bool check_passed = true;
  // Key rounds (i not in S):
  std::uint64_t bob_h = 0;
  int bob_b = 0;
  std::uint64_t bob_u = 0;
  int alice_b = 0;
  bool decode_swap_passed = false;
};

struct QkdTranscript {
  std::vector<QkdRound> rounds;
  bool aborted = false;
  std::vector<int> bob_key;
  std::vector<int> alice_key;
};

struct DetectionReport {
  std::uint64_t trials = 0;
  std::uint64_t aborts = 0;
  double empirical = 0.0;
  double analytic = 0.0;  // subset-averaged 1 - prod pass probabilities
  double sigma = 0.0;
};

QkdTranscript run_protocol(const ActionContext& ctx, const ProtocolConfig& config, Rng& rng);

// Hamming agreement of the two raw keys; rejects aborted transcripts.
double agreement_fraction(const QkdTranscript& t);

// Empirical abort rate under tamper_first, with the exact subset-averaged
// analytic value.
DetectionReport detection_probability(const ActionContext& ctx, const ProtocolConfig& config,
                                      std::uint64_t trials, Rng& rng);

}  // namespace qsga
