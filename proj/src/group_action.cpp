#include "qsga/group_action.hpp"

#include <cmath>
#include <stdexcept>

namespace qsga {

void ActionContext::validate() const {
  if (hash.spec().domain_bits != domain_bits)
    throw std::invalid_argument("ActionContext: hash domain does not match k");
  if (hash.spec().range.n != modulus.n)
    throw std::invalid_argument("ActionContext: hash range does not match N");
  if (start_state.layout.size() != 1 ||
      start_state.layout[0].kind != RegisterSpec::Kind::bits ||
      start_state.layout[0].width_bits != domain_bits)
    throw std::invalid_argument("ActionContext: start state must live on one k-bit register");
  if (std::abs(start_state.norm() - 1.0) > kNormTolerance)
    throw std::invalid_argument("ActionContext: start state not normalized");
}

ActionContext make_context(const Modulus& modulus, const HashFunction& hash) {
  PureState uniform;
  uniform.layout = {RegisterSpec{RegisterSpec::Kind::bits, hash.spec().domain_bits, 0}};
  const std::uint64_t d = hash.domain_size();
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::uint64_t x = 0; x < d; ++x) uniform.amps[{x}] = amp;
  return make_context(modulus, hash, uniform);
}

ActionContext make_context(const Modulus& modulus, const HashFunction& hash,
                           const PureState& start) {
  ActionContext ctx{modulus, hash.spec().domain_bits, hash, start};
  ctx.validate();
  return ctx;
}

ActionContext make_balanced_context(const Modulus& modulus, const HashFunction& hash) {
  const std::uint64_t n = modulus.n;
  std::vector<std::uint64_t> preimage(n, std::uint64_t(-1));
  std::uint64_t found = 0;
  for (std::uint64_t x = 0; x < hash.domain_size() && found < n; ++x) {
    std::uint64_t& slot = preimage[hash.eval(x)];
    if (slot == std::uint64_t(-1)) {
      slot = x;
      ++found;
    }
  }
  if (found < n)
    throw std::invalid_argument("make_balanced_context: hash is not surjective onto Z_N");
  PureState start;
  start.layout = {RegisterSpec{RegisterSpec::Kind::bits, hash.spec().domain_bits, 0}};
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::uint64_t x : preimage) start.amps[{x}] = amp;
  return make_context(modulus, hash, start);
}

PureState start(const ActionContext& ctx) { return ctx.start_state; }

PureState act(const ActionContext& ctx, std::uint64_t g, const PureState& s) {
  if (s.layout != ctx.start_state.layout)
    throw std::invalid_argument("act: state layout does not match context");
  PureState out;
  out.layout = s.layout;
  const std::uint64_t n = ctx.modulus.n;
  for (const auto& [l, a] : s.amps)
    out.amps.emplace(l, a * unit_root(n, ctx.hash.eval(l[0]) * (g % n) % n));
  return out;
}

PureState element_state(const ActionContext& ctx, std::uint64_t g) {
  return act(ctx, g, ctx.start_state);
}

OrthogonalityReport orthogonality_audit(const ActionContext& ctx) {
  ctx.validate();
  const std::uint64_t n = ctx.modulus.n;
  if (n > 4096) throw std::invalid_argument("orthogonality_audit: N over pairwise scan cap");

  OrthogonalityReport rep;
  rep.output_mass.assign(n, 0.0);
  for (const auto& [l, a] : ctx.start_state.amps)
    rep.output_mass[ctx.hash.eval(l[0])] += std::norm(a);

  const double uniform = 1.0 / static_cast<double>(n);
  for (double p : rep.output_mass) rep.deviation_sum += std::abs(p - uniform);

  // <psi_g|psi_g'> = sum_i p_i w^{i (g'-g)} depends only on the difference.
  for (std::uint64_t delta = 1; delta < n; ++delta) {
    Complex acc = 0.0;
    for (std::uint64_t i = 0; i < n; ++i)
      acc += rep.output_mass[i] * unit_root(n, i * delta % n);
    rep.max_offdiag_overlap = std::max(rep.max_offdiag_overlap, std::abs(acc));
  }

  // Min-entropy of the start state's computational-basis distribution.
  double maxp = 0.0;
  for (const auto& [_, a] : ctx.start_state.amps) maxp = std::max(maxp, std::norm(a));
  rep.lhl_bound = lhl_epsilon(-std::log2(maxp), ctx.modulus);
  return rep;
}

}  // namespace qsga
