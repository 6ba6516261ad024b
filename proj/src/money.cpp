#include "qsga/money.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qsga {

namespace {

// Genuine note for a hash-route serial: uniform superposition over H^{-1}(h).
PureState genuine_note(const ActionContext& ctx, std::uint64_t h) {
  PureState s;
  s.layout = ctx.start_state.layout;
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < ctx.hash.domain_size(); ++x)
    if (ctx.hash.eval(x) == h) ++count;
  if (count == 0) throw std::invalid_argument("genuine_note: serial has no preimage");
  const double amp = 1.0 / std::sqrt(static_cast<double>(count));
  for (std::uint64_t x = 0; x < ctx.hash.domain_size(); ++x)
    if (ctx.hash.eval(x) == h) s.amps[{x}] = amp;
  return s;
}

std::uint64_t hash_serial(const ActionContext& ctx, std::uint64_t serial, MoneyRoute route) {
  return route == MoneyRoute::hash ? serial % ctx.modulus.n
                                   : ctx.modulus.neg(serial);
}

}  // namespace

Banknote gen_hash_route(const ActionContext& ctx, Rng& rng) {
  ctx.validate();
  const auto records = measure_label_function(
      ctx.start_state, [&](const BasisLabel& l) { return BasisLabel{ctx.hash.eval(l[0])}; });
  const auto& rec = records[sample_outcome(records, rng)];
  return Banknote{MoneyRoute::hash, rec.outcome[0], rec.collapsed};
}

Banknote gen_action_route(const ActionContext& ctx, Rng& rng) {
  ctx.validate();
  const std::uint64_t n = ctx.modulus.n;

  // Joint state (1/sqrt N) sum_g |g> (g * |psi_0>) on [Z_N, bits(k)].
  PureState joint;
  joint.layout = {RegisterSpec{RegisterSpec::Kind::zn, 0, n}, ctx.start_state.layout[0]};
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::uint64_t g = 0; g < n; ++g) {
    const PureState sg = element_state(ctx, g);
    for (const auto& [l, a] : sg.amps) joint.amps[{g, l[0]}] = scale * a;
  }

  // QFT on the serial register: amp'(h, x) = (1/sqrt N) sum_g w^{gh} amp(g, x).
  PureState transformed;
  transformed.layout = joint.layout;
  for (const auto& [l, a] : joint.amps) {
    for (std::uint64_t h = 0; h < n; ++h) {
      const Complex v = scale * unit_root(n, l[0] * h % n) * a;
      transformed.amps[{h, l[1]}] += v;
    }
  }
  for (auto it = transformed.amps.begin(); it != transformed.amps.end();)
    it = std::abs(it->second) < kAmplitudePrune ? transformed.amps.erase(it) : std::next(it);

  const auto records = measure_label_function(
      transformed, [](const BasisLabel& l) { return BasisLabel{l[0]}; });
  const auto& rec = records[sample_outcome(records, rng)];

  // Strip the measured serial register.
  Banknote note;
  note.route = MoneyRoute::action;
  note.serial = rec.outcome[0];
  note.note.layout = {ctx.start_state.layout[0]};
  for (const auto& [l, a] : rec.collapsed.amps) note.note.amps[{l[1]}] = a;
  return note;
}

std::uint64_t equivalent_serial(const ActionContext& ctx, std::uint64_t serial) {
  return ctx.modulus.neg(serial);
}

VerificationVerdict verify(const ActionContext& ctx, std::uint64_t serial,
                           const PureState& candidate, MoneyRoute route, Rng& rng) {
  ctx.validate();
  if (candidate.layout != ctx.start_state.layout)
    throw std::invalid_argument("verify: candidate layout mismatch");
  const std::uint64_t expected = hash_serial(ctx, serial, route);

  VerificationVerdict verdict;
  const auto records = measure_label_function(
      candidate, [&](const BasisLabel& l) { return BasisLabel{ctx.hash.eval(l[0])}; });

  double match_prob = 0.0;
  for (const auto& r : records)
    if (r.outcome[0] == expected) match_prob = r.probability;

  const auto& rec = records[sample_outcome(records, rng)];
  verdict.serial_match = rec.outcome[0] == expected;

  const PureState genuine = genuine_note(ctx, expected);
  if (verdict.serial_match) {
    const double overlap = std::abs(inner_product(genuine, rec.collapsed));
    const double pass_prob = overlap * overlap;
    verdict.test_pass = rng.bernoulli(pass_prob);
    verdict.analytic_accept = match_prob * pass_prob;
  } else {
    // Analytic acceptance still conditions on the match branch.
    double pass_prob = 0.0;
    for (const auto& r : records)
      if (r.outcome[0] == expected) {
        const double ov = std::abs(inner_product(genuine, r.collapsed));
        pass_prob = ov * ov;
      }
    verdict.analytic_accept = match_prob * pass_prob;
  }
  verdict.accept = verdict.serial_match && verdict.test_pass;
  return verdict;
}

CounterfeitReport counterfeit_experiment(const ActionContext& ctx, std::uint64_t trials,
                                         Rng& rng) {
  ctx.validate();
  CounterfeitReport rep;
  rep.trials = trials;

  // Exact reference: serial h is minted with probability P_h / 2^k; a measured
  // copy then passes each of the two independent Tests with probability 1/P_h.
  std::vector<std::uint64_t> preimages(ctx.modulus.n, 0);
  for (std::uint64_t x = 0; x < ctx.hash.domain_size(); ++x) ++preimages[ctx.hash.eval(x)];
  for (std::uint64_t h = 0; h < ctx.modulus.n; ++h)
    if (preimages[h])
      rep.analytic += 1.0 / (static_cast<double>(ctx.hash.domain_size()) *
                             static_cast<double>(preimages[h]));

  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng trial = rng.substream(t);
    const Banknote note = gen_hash_route(ctx, trial);
    // Measure the note in the computational basis and copy the outcome.
    const auto records =
        measure_label_function(note.note, [](const BasisLabel& l) { return l; });
    const PureState classical = records[sample_outcome(records, trial)].collapsed;
    const auto v1 = verify(ctx, note.serial, classical, MoneyRoute::hash, trial);
    const auto v2 = verify(ctx, note.serial, classical, MoneyRoute::hash, trial);
    if (v1.accept && v2.accept) ++rep.joint_accepts;
  }
  rep.empirical = static_cast<double>(rep.joint_accepts) / static_cast<double>(trials);
  return rep;
}

}  // namespace qsga
