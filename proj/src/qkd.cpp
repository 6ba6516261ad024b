#include "qsga/qkd.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsga {

namespace {

// |<psi_a | psi_b>|^2 depends only on b - a; one table per context.
std::vector<double> overlap_sq_table(const ActionContext& ctx) {
  const std::uint64_t n = ctx.modulus.n;
  std::vector<double> mass(n, 0.0);
  for (const auto& [l, a] : ctx.start_state.amps) mass[ctx.hash.eval(l[0])] += std::norm(a);
  std::vector<double> out(n, 0.0);
  for (std::uint64_t delta = 0; delta < n; ++delta) {
    Complex acc = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) acc += mass[i] * unit_root(n, i * delta % n);
    out[delta] = std::norm(acc);
  }
  return out;
}

double swap_pass(const std::vector<double>& ovsq, std::uint64_t n, std::uint64_t a,
                 std::uint64_t b) {
  return (1.0 + ovsq[(b + n - a % n) % n]) / 2.0;
}

}  // namespace

void ProtocolConfig::validate() const {
  if (rounds == 0 || rounds % 2 != 0)
    throw std::invalid_argument("ProtocolConfig: rounds must be positive and even");
  if (adversary == AdversaryKind::tamper_first && tamper_count > rounds)
    throw std::invalid_argument("ProtocolConfig: tamper count exceeds rounds");
}

QkdTranscript run_protocol(const ActionContext& ctx, const ProtocolConfig& config, Rng& rng) {
  config.validate();
  ctx.validate();
  const std::uint64_t N = ctx.modulus.n;
  const auto ovsq = overlap_sq_table(ctx);
  const std::size_t n = config.rounds;

  QkdTranscript t;
  t.rounds.resize(n);

  // Step 1: Alice's elements; the adversary may substitute the first
  // tamper_count transit states with its own (never the honest value).
  for (auto& r : t.rounds) {
    r.alice_g = rng.uniform(N);
    r.received_g = r.alice_g;
  }
  if (config.adversary == AdversaryKind::tamper_first)
    for (std::size_t i = 0; i < config.tamper_count; ++i)
      t.rounds[i].received_g = (t.rounds[i].alice_g + 1 + rng.uniform(N - 1)) % N;

  // Step 2: Bob's check subset S of size n/2.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform(n - i));
    std::swap(idx[i], idx[j]);
    t.rounds[idx[i]].checked = true;
  }

  // Step 3/4: Alice reveals checked g_i; Bob SWAP-tests each.
  for (auto& r : t.rounds) {
    if (!r.checked) continue;
    r.check_passed = rng.bernoulli(swap_pass(ovsq, N, r.alice_g, r.received_g));
    if (!r.check_passed) t.aborted = true;
  }
  if (t.aborted) return t;

  // Steps 5/6: key rounds.  Bob acts h_i on the received state (b=0) or sends
  // a fresh uniform element (b=1); Alice decodes by SWAP against psi_{g+h}.
  for (auto& r : t.rounds) {
    if (r.checked) continue;
    r.bob_h = rng.uniform(N);
    r.bob_b = static_cast<int>(rng.uniform(2));
    r.bob_u = r.bob_b == 0 ? (r.received_g + r.bob_h) % N : rng.uniform(N);
    r.decode_swap_passed =
        rng.bernoulli(swap_pass(ovsq, N, (r.alice_g + r.bob_h) % N, r.bob_u));
    r.alice_b = r.decode_swap_passed ? 0 : 1;
    t.bob_key.push_back(r.bob_b);
    t.alice_key.push_back(r.alice_b);
  }
  return t;
}

double agreement_fraction(const QkdTranscript& t) {
  if (t.aborted) throw std::invalid_argument("agreement_fraction: transcript aborted");
  if (t.bob_key.empty()) throw std::invalid_argument("agreement_fraction: empty keys");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < t.bob_key.size(); ++i)
    if (t.bob_key[i] == t.alice_key[i]) ++agree;
  return static_cast<double>(agree) / static_cast<double>(t.bob_key.size());
}

DetectionReport detection_probability(const ActionContext& ctx, const ProtocolConfig& config,
                                      std::uint64_t trials, Rng& rng) {
  config.validate();
  if (config.adversary != AdversaryKind::tamper_first)
    throw std::invalid_argument("detection_probability: needs a tamper_first adversary");

  DetectionReport rep;
  rep.trials = trials;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng trial = rng.substream(i);
    if (run_protocol(ctx, config, trial).aborted) ++rep.aborts;
  }
  rep.empirical = static_cast<double>(rep.aborts) / static_cast<double>(trials);

  // Exact reference: per tampered-and-checked position the SWAP passes with
  // the substitute-averaged probability; |T intersect S| is hypergeometric.
  const std::uint64_t N = ctx.modulus.n;
  const auto ovsq = overlap_sq_table(ctx);
  double pass_avg = 0.0;
  for (std::uint64_t delta = 1; delta < N; ++delta) pass_avg += (1.0 + ovsq[delta]) / 2.0;
  pass_avg /= static_cast<double>(N - 1);

  const std::size_t n = config.rounds;
  const std::size_t t = config.tamper_count;
  auto log_choose = [](std::size_t a, std::size_t b) {
    return std::lgamma(static_cast<double>(a + 1)) - std::lgamma(static_cast<double>(b + 1)) -
           std::lgamma(static_cast<double>(a - b + 1));
  };
  for (std::size_t j = 0; j <= std::min(t, n / 2); ++j) {
    if (n - t < n / 2 - j) continue;
    const double logp =
        log_choose(t, j) + log_choose(n - t, n / 2 - j) - log_choose(n, n / 2);
    rep.analytic += std::exp(logp) * (1.0 - std::pow(pass_avg, static_cast<double>(j)));
  }
  rep.sigma = std::sqrt(std::max(rep.analytic * (1.0 - rep.analytic), 1e-12) /
                        static_cast<double>(trials));
  return rep;
}

}  // namespace qsga
