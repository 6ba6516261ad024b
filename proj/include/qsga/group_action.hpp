#pragma once

#include <cstdint>
#include <vector>

#include "qsga/hash_families.hpp"
#include "qsga/quantum_core.hpp"

namespace qsga {

// Hash-based group action of Z_N on phase states over {0,1}^k:
// g sends |r> to w_N^{H(r) g} |r>.
struct ActionContext {
  Modulus modulus;
  std::uint32_t domain_bits = 0;
  HashFunction hash;
  PureState start_state;

  void validate() const;
};

// Uniform-start context.
ActionContext make_context(const Modulus& modulus, const HashFunction& hash);
// Custom start state (must live on a single k-bit register).
ActionContext make_context(const Modulus& modulus, const HashFunction& hash,
                           const PureState& start);
// Start state uniform over one preimage per hash output (the smallest each),
// so the output masses are exactly 1/N and the action is exactly orthogonal.
// Rejects hashes that miss an output value.
ActionContext make_balanced_context(const Modulus& modulus, const HashFunction& hash);

struct OrthogonalityReport {
  double max_offdiag_overlap = 0.0;
  double deviation_sum = 0.0;  // sum_i |p_i - 1/N| of the hash-output masses
  double lhl_bound = 0.0;
  std::vector<double> output_mass;  // p_i per hash output
};

PureState start(const ActionContext& ctx);
PureState act(const ActionContext& ctx, std::uint64_t g, const PureState& s);
PureState element_state(const ActionContext& ctx, std::uint64_t g);

// Pairwise overlap scan over all g != g'; exploits that the overlap depends
// only on g' - g, so the cost is O(N * N) after one pass over the start state.
OrthogonalityReport orthogonality_audit(const ActionContext& ctx);

}  // namespace qsga
