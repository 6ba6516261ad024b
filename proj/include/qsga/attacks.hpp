#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsga/group_action.hpp"

namespace qsga {

enum class GroupKind { cyclic, boolean_group };

// One coset-sampling round: the 3-register state
// (|0, y0, y1> + |1, y0 - g, y1 + g>) / sqrt(2)
// (boolean case: - and + are XOR).  The hidden shift is recorded for test
// oracles only; recovery code never reads it.
struct CosetSample {
  GroupKind kind = GroupKind::cyclic;
  std::uint64_t group_order = 0;  // N, or 2^n for the boolean case
  std::uint32_t boolean_n = 0;
  PureState state;
  std::uint64_t hidden_g = 0;
};

// Draws coset samples for a cyclic hash-based action.  Construction requires
// the action to be orthogonal (overlap audit <= 1e-6): with orthogonal element
// states, discarding the two state registers of |tau_c> by measuring them in
// the {h * |psi_0>} basis collapses the first three registers exactly to the
// |phi_{y0,y1}> form with (y0, y1) uniform.
class CosetSampler {
 public:
  explicit CosetSampler(const ActionContext& ctx);
  CosetSample sample(std::uint64_t g, Rng& rng) const;
  double audit_overlap() const { return audit_overlap_; }

 private:
  std::uint64_t modulus_;
  double audit_overlap_ = 0.0;
};

// Boolean-group (Z_2^n) coset sample; the degenerate classical action on
// basis kets is exactly orthogonal, so no audit is needed.
CosetSample coset_sample_boolean(std::uint32_t n, std::uint64_t g, Rng& rng);

// Simon-style recovery over Z_2^n: Hadamard each sample over Z_2^{1+2n},
// measure, collect F_2 constraints orthogonal to the period (1, g, g), solve.
// Returns nullopt if the system stays rank-deficient.
std::optional<std::uint64_t> simon_recover(const std::vector<CosetSample>& samples, Rng& rng);

// Brute-force maximum-likelihood recovery over Z_N: QFT each sample over
// Z_2 x Z_N^2, measure, then argmax over candidates of the exact outcome
// log-likelihood; smallest candidate on ties.
std::uint64_t ml_dlog_recover(const std::vector<CosetSample>& samples, Rng& rng);

struct DlogExperimentReport {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t samples_per_trial = 0;
  std::uint64_t copies_consumed = 0;  // one |psi_0> and one |psi_g> per sample
  std::vector<std::uint64_t> planted;
  std::vector<std::int64_t> recovered;  // -1 marks declared failure
};

// End-to-end experiment for the cyclic hash-based action.
DlogExperimentReport dlog_experiment_cyclic(const ActionContext& ctx, std::uint64_t ell,
                                            std::uint64_t trials, Rng& rng);
// End-to-end experiment for the boolean group Z_2^n.
DlogExperimentReport dlog_experiment_boolean(std::uint32_t n, std::uint64_t ell,
                                             std::uint64_t trials, Rng& rng);

}  // namespace qsga
