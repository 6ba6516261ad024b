#include "qsga/attacks.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qsga {

namespace {

Layout cyclic_layout(std::uint64_t n) {
  return {RegisterSpec{RegisterSpec::Kind::bits, 1, 0},
          RegisterSpec{RegisterSpec::Kind::zn, 0, n},
          RegisterSpec{RegisterSpec::Kind::zn, 0, n}};
}

Layout boolean_layout(std::uint32_t n) {
  return {RegisterSpec{RegisterSpec::Kind::bits, 1, 0},
          RegisterSpec{RegisterSpec::Kind::bits, n, 0},
          RegisterSpec{RegisterSpec::Kind::bits, n, 0}};
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

CosetSampler::CosetSampler(const ActionContext& ctx) : modulus_(ctx.modulus.n) {
  audit_overlap_ = orthogonality_audit(ctx).max_offdiag_overlap;
  if (audit_overlap_ > 1e-6)
    throw std::invalid_argument(
        "CosetSampler: action not orthogonal (audit overlap " +
        std::to_string(audit_overlap_) + " > 1e-6); the register-discard collapse needs it");
}

CosetSample CosetSampler::sample(std::uint64_t g, Rng& rng) const {
  const std::uint64_t n = modulus_;
  CosetSample cs;
  cs.kind = GroupKind::cyclic;
  cs.group_order = n;
  cs.hidden_g = g % n;
  cs.state.layout = cyclic_layout(n);
  const std::uint64_t y0 = rng.uniform(n);
  const std::uint64_t y1 = rng.uniform(n);
  cs.state.amps[{0, y0, y1}] = kInvSqrt2;
  cs.state.amps[{1, (y0 + n - cs.hidden_g) % n, (y1 + cs.hidden_g) % n}] += kInvSqrt2;
  return cs;
}

CosetSample coset_sample_boolean(std::uint32_t n, std::uint64_t g, Rng& rng) {
  if (n == 0 || n > 16) throw std::invalid_argument("coset_sample_boolean: need 1 <= n <= 16");
  CosetSample cs;
  cs.kind = GroupKind::boolean_group;
  cs.group_order = std::uint64_t{1} << n;
  cs.boolean_n = n;
  cs.hidden_g = g & (cs.group_order - 1);
  cs.state.layout = boolean_layout(n);
  const std::uint64_t y0 = rng.uniform(cs.group_order);
  const std::uint64_t y1 = rng.uniform(cs.group_order);
  cs.state.amps[{0, y0, y1}] = kInvSqrt2;
  cs.state.amps[{1, y0 ^ cs.hidden_g, y1 ^ cs.hidden_g}] += kInvSqrt2;
  return cs;
}

std::optional<std::uint64_t> simon_recover(const std::vector<CosetSample>& samples, Rng& rng) {
  if (samples.empty()) return std::nullopt;
  const std::uint32_t n = samples.front().boolean_n;
  // F_2 row reduction state: pivot row per leading-bit position of w0^w1.
  std::vector<std::uint64_t> pivot_row(n, 0);
  std::vector<std::uint64_t> pivot_rhs(n, 0);
  std::size_t rank = 0;

  for (const auto& cs : samples) {
    if (cs.kind != GroupKind::boolean_group || cs.boolean_n != n)
      throw std::invalid_argument("simon_recover: mixed sample kinds");
    // Hadamard over all 1 + 2n qubits, then measure.  The two support labels
    // give outcome amplitude proportional to sum of signs (-1)^{<w, label>}.
    const std::uint64_t bits = 1 + 2 * n;
    const std::uint64_t space = std::uint64_t{1} << bits;
    std::vector<std::uint64_t> packed;
    std::vector<double> amp;
    for (const auto& [l, a] : cs.state.amps) {
      packed.push_back(l[0] | l[1] << 1 | l[2] << (1 + n));
      amp.push_back(a.real());
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(space));
    const double u = rng.uniform_real();
    double acc = 0.0;
    std::uint64_t w = space - 1;
    for (std::uint64_t cand = 0; cand < space; ++cand) {
      double a = 0.0;
      for (std::size_t t = 0; t < packed.size(); ++t)
        a += std::popcount(cand & packed[t]) % 2 ? -amp[t] : amp[t];
      a *= scale;
      acc += a * a;
      if (u < acc) {
        w = cand;
        break;
      }
    }
    // w = (wb, w0, w1) satisfies wb + <w0 ^ w1, g> = 0 over F_2.
    std::uint64_t row = (w >> 1 ^ w >> (1 + n)) & ((std::uint64_t{1} << n) - 1);
    std::uint64_t rhs = w & 1;
    bool stored = false;
    for (std::uint32_t b = n; b-- > 0;) {
      if (!(row >> b & 1)) continue;
      if (pivot_row[b]) {
        row ^= pivot_row[b];
        rhs ^= pivot_rhs[b];
      } else {
        pivot_row[b] = row;
        pivot_rhs[b] = rhs;
        ++rank;
        stored = true;
        break;
      }
    }
    if (!stored && row == 0 && rhs == 1) return std::nullopt;  // inconsistent system
    if (rank == n) break;
  }
  if (rank < n) return std::nullopt;

  // Back-substitute the upper-triangular pivots.
  std::uint64_t g = 0;
  for (std::uint32_t b = 0; b < n; ++b) {
    std::uint64_t v = pivot_rhs[b];
    for (std::uint32_t c = 0; c < b; ++c)
      if (pivot_row[b] >> c & 1) v ^= g >> c & 1;
    g |= v << b;
  }
  return g;
}

std::uint64_t ml_dlog_recover(const std::vector<CosetSample>& samples, Rng& rng) {
  if (samples.empty()) return 0;
  const std::uint64_t n = samples.front().group_order;
  if (n > 256) throw std::invalid_argument("ml_dlog_recover: N over brute-force cap 256");

  std::vector<Complex> roots(n);
  for (std::uint64_t e = 0; e < n; ++e) roots[e] = unit_root(n, e);

  // Outcome tally over (r, c, d = w1 - w0 mod N); the likelihood depends on
  // the QFT outcome (c, w0, w1) only through (c, d).  The bit register is
  // measured in the X basis (r = 0) for even samples and the Y basis (r = 1)
  // for odd ones: the X-basis outcome law 1 + (-1)^c cos(2 pi g d / N) is
  // even in g, so it alone cannot tell g from N - g; the Y-basis law supplies
  // the odd (sine) component, as in standard phase estimation.
  std::vector<std::uint64_t> counts(4 * n, 0);
  std::size_t sample_index = 0;
  for (const auto& cs : samples) {
    if (cs.kind != GroupKind::cyclic || cs.group_order != n)
      throw std::invalid_argument("ml_dlog_recover: mixed sample kinds");
    const std::uint64_t r = sample_index++ % 2;
    std::vector<std::uint64_t> lb, l0, l1;
    std::vector<Complex> amp;
    for (const auto& [l, a] : cs.state.amps) {
      lb.push_back(l[0]);
      l0.push_back(l[1]);
      l1.push_back(l[2]);
      amp.push_back(a);
    }
    const double scale = 1.0 / (2.0 * static_cast<double>(n));  // 1/sqrt(2 N^2)
    const double u = rng.uniform_real();
    double acc = 0.0;
    std::uint64_t got_c = 0;
    std::uint64_t got_d = 0;
    bool done = false;
    for (std::uint64_t c = 0; c < 2 && !done; ++c)
      for (std::uint64_t w0 = 0; w0 < n && !done; ++w0)
        for (std::uint64_t w1 = 0; w1 < n && !done; ++w1) {
          Complex a = 0.0;
          for (std::size_t t = 0; t < amp.size(); ++t) {
            Complex phase = roots[(l0[t] * w0 + l1[t] * w1) % n];
            if (r && lb[t]) phase *= Complex(0.0, 1.0);
            a += (lb[t] & c ? -1.0 : 1.0) * phase * amp[t];
          }
          acc += std::norm(a) * scale * scale * 2.0;
          if (u < acc) {
            got_c = c;
            got_d = (w1 + n - w0 % n) % n;
            done = true;
          }
        }
    if (!done) {
      got_c = 1;
      got_d = n - 1;
    }
    ++counts[(r * 2 + got_c) * n + got_d];
  }

  // Exact log-likelihood per candidate: p(c, w0, w1 | g') proportional to
  // 1 + (-1)^c cos(2 pi g' d / N) in the X basis and
  // 1 - (-1)^c sin(2 pi g' d / N) in the Y basis.
  std::uint64_t best = 0;
  double best_ll = -1.0 / 0.0;
  for (std::uint64_t cand = 0; cand < n; ++cand) {
    double ll = 0.0;
    for (std::uint64_t r = 0; r < 2; ++r)
      for (std::uint64_t c = 0; c < 2; ++c)
        for (std::uint64_t d = 0; d < n; ++d) {
          const std::uint64_t cell = (r * 2 + c) * n + d;
          if (!counts[cell]) continue;
          const Complex root = roots[cand * d % n];
          const double p =
              1.0 + (c ? -1.0 : 1.0) * (r ? -root.imag() : root.real());
          ll += p <= 0.0 ? -1e300 : static_cast<double>(counts[cell]) * std::log(p);
        }
    if (ll > best_ll) {
      best_ll = ll;
      best = cand;
    }
  }
  return best;
}

DlogExperimentReport dlog_experiment_cyclic(const ActionContext& ctx, std::uint64_t ell,
                                            std::uint64_t trials, Rng& rng) {
  const CosetSampler sampler(ctx);
  DlogExperimentReport rep;
  rep.trials = trials;
  rep.samples_per_trial = ell;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng trial = rng.substream(t);
    const std::uint64_t g = trial.uniform(ctx.modulus.n);
    std::vector<CosetSample> samples;
    samples.reserve(ell);
    for (std::uint64_t i = 0; i < ell; ++i) samples.push_back(sampler.sample(g, trial));
    rep.copies_consumed += 2 * ell;
    const std::uint64_t rec = ml_dlog_recover(samples, trial);
    rep.planted.push_back(g);
    rep.recovered.push_back(static_cast<std::int64_t>(rec));
    if (rec == g) ++rep.successes;
  }
  return rep;
}

DlogExperimentReport dlog_experiment_boolean(std::uint32_t n, std::uint64_t ell,
                                             std::uint64_t trials, Rng& rng) {
  DlogExperimentReport rep;
  rep.trials = trials;
  rep.samples_per_trial = ell;
  const std::uint64_t order = std::uint64_t{1} << n;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng trial = rng.substream(t);
    const std::uint64_t g = trial.uniform(order);
    std::vector<CosetSample> samples;
    samples.reserve(ell);
    for (std::uint64_t i = 0; i < ell; ++i)
      samples.push_back(coset_sample_boolean(n, g, trial));
    rep.copies_consumed += 2 * ell;
    const auto rec = simon_recover(samples, trial);
    rep.planted.push_back(g);
    rep.recovered.push_back(rec ? static_cast<std::int64_t>(*rec) : -1);
    if (rec && *rec == g) ++rep.successes;
  }
  return rep;
}

}  // namespace qsga
