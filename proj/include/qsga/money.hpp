#pragma once

#include <cstdint>

#include "qsga/group_action.hpp"

namespace qsga {

enum class MoneyRoute { hash, action };

struct Banknote {
  MoneyRoute route = MoneyRoute::hash;
  std::uint64_t serial = 0;  // hash route: h; action route: sigma = -h mod N
  PureState note;            // k-bit register
};

struct VerificationVerdict {
  bool serial_match = false;
  bool test_pass = false;
  bool accept = false;
  double analytic_accept = 0.0;  // serial-match probability times projector overlap
};

struct CounterfeitReport {
  std::uint64_t trials = 0;
  std::uint64_t joint_accepts = 0;
  double empirical = 0.0;
  double analytic = 0.0;  // E[1/P^2] over the serial distribution
};

// Mint by measuring H on the start state.
Banknote gen_hash_route(const ActionContext& ctx, Rng& rng);

// Mint via the serial register: build (1/sqrt N) sum_g |g> (g * |psi_0>),
// Fourier-transform the serial register, measure it.  The collapsed note is
// supported on {x : H(x) = -sigma mod N}.
Banknote gen_action_route(const ActionContext& ctx, Rng& rng);

// The hash-route note with serial h equals the action-route note with serial
// sigma = -h mod N; maps a serial across routes.
std::uint64_t equivalent_serial(const ActionContext& ctx, std::uint64_t serial);

// Serial re-measurement plus the projector onto the genuine note.  The
// projector simulates the scheme's non-collapsing Test; a simulator may apply
// it even though a standard-model party cannot - that gap is exactly where
// the underlying hardness assumption lives.
VerificationVerdict verify(const ActionContext& ctx, std::uint64_t serial,
                           const PureState& candidate, MoneyRoute route, Rng& rng);

// Measure-and-copy counterfeiting: mint, measure the note in the
// computational basis, duplicate the classical outcome, verify both copies.
CounterfeitReport counterfeit_experiment(const ActionContext& ctx, std::uint64_t trials,
                                         Rng& rng);

}  // namespace qsga
