#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "qsga/qkd.hpp"

using namespace qsga;

namespace {

ActionContext balanced_context(std::uint32_t k, std::uint64_t N, std::uint64_t seed) {
  HashSpec spec{HashFamily::random_table, k, Modulus(N), seed};
  Rng rng(seed);
  return make_balanced_context(Modulus(N), sample_hash(spec, rng));
}

}  // namespace

TEST_CASE("protocol configuration validation") {
  ProtocolConfig c;
  c.rounds = 7;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.rounds = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.rounds = 8;
  CHECK_NOTHROW(c.validate());
  c.adversary = AdversaryKind::tamper_first;
  c.tamper_count = 9;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.tamper_count = 8;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("honest runs over a balanced action never abort") {
  const ActionContext ctx = balanced_context(6, 16, 120);
  ProtocolConfig cfg;
  cfg.rounds = 64;
  Rng rng(121);
  for (int run = 0; run < 10; ++run) {
    const QkdTranscript t = run_protocol(ctx, cfg, rng);
    CHECK_FALSE(t.aborted);
    REQUIRE(t.rounds.size() == 64);
    std::size_t checked = 0;
    for (const QkdRound& r : t.rounds) {
      CHECK(r.received_g == r.alice_g);
      if (r.checked) {
        ++checked;
        CHECK(r.check_passed);
      }
    }
    CHECK(checked == 32);
    CHECK(t.bob_key.size() == 32);
    CHECK(t.alice_key.size() == t.bob_key.size());
  }
}

TEST_CASE("untouched rounds where Bob encodes always agree") {
  // When b = 0 Bob's value u = g + h matches the state Alice tests against,
  // so the decode swap passes and both parties record 0.
  const ActionContext ctx = balanced_context(6, 16, 122);
  ProtocolConfig cfg;
  cfg.rounds = 64;
  Rng rng(123);
  for (int run = 0; run < 10; ++run) {
    const QkdTranscript t = run_protocol(ctx, cfg, rng);
    std::size_t key_pos = 0;
    for (const QkdRound& r : t.rounds) {
      if (r.checked) continue;
      if (r.bob_b == 0) {
        CHECK(r.bob_u == (r.received_g + r.bob_h) % 16);
        CHECK(r.decode_swap_passed);
        CHECK(t.alice_key[key_pos] == 0);
        CHECK(t.bob_key[key_pos] == 0);
      }
      ++key_pos;
    }
    REQUIRE(key_pos == t.bob_key.size());
  }
}

TEST_CASE("honest key agreement sits at the half-plus-quarter level") {
  // b = 0 rounds always agree.  In a b = 1 round Bob picks u uniformly, which
  // is wrong with probability 1 - 1/N; a wrong value over a balanced context
  // fails Alice's swap test (agreement) with probability 1/2.  The mean
  // agreement is therefore 1/2 + (1 - 1/N) / 4.
  const ActionContext ctx = balanced_context(12, 64, 124);
  ProtocolConfig cfg;
  cfg.rounds = 256;
  Rng rng(125);
  double total = 0.0;
  const int runs = 40;
  for (int run = 0; run < runs; ++run) total += agreement_fraction(run_protocol(ctx, cfg, rng));
  const double mean = total / runs;
  // Expected value 1/2 + (1 - 1/N)/4 = 0.74609375 at N = 64.
  CHECK(std::abs(mean - (0.5 + (1.0 - 1.0 / 64.0) / 4.0)) < 0.01);
}

TEST_CASE("agreement_fraction rejects aborted or keyless transcripts") {
  QkdTranscript t;
  t.aborted = true;
  CHECK_THROWS_AS(agreement_fraction(t), std::invalid_argument);
  t.aborted = false;
  CHECK_THROWS_AS(agreement_fraction(t), std::invalid_argument);
}

TEST_CASE("full orthogonal tampering is caught at the subset-counting rate") {
  const ActionContext ctx = balanced_context(12, 64, 126);
  ProtocolConfig cfg;
  cfg.rounds = 8;
  cfg.adversary = AdversaryKind::tamper_first;
  cfg.tamper_count = 8;
  Rng rng(127);
  const DetectionReport rep = detection_probability(ctx, cfg, 20000, rng);
  // All 4 checks land on tampered rounds.  A shifted state is orthogonal over
  // a balanced context, yet the swap test still passes it with probability
  // 1/2, so survival is (1/2)^4 and detection 15/16.
  CHECK(rep.analytic == doctest::Approx(15.0 / 16.0).epsilon(1e-12));
  CHECK(std::abs(rep.empirical - rep.analytic) <= 3.0 * rep.sigma);
  CHECK(rep.trials == 20000);
  CHECK(rep.aborts == std::uint64_t(rep.empirical * 20000 + 0.5));
}

TEST_CASE("partial tampering matches an exhaustive subset enumeration") {
  const std::uint64_t N = 16;
  const ActionContext ctx = balanced_context(6, N, 128);
  ProtocolConfig cfg;
  cfg.rounds = 8;
  cfg.adversary = AdversaryKind::tamper_first;
  cfg.tamper_count = 3;
  Rng rng(129);
  const DetectionReport rep = detection_probability(ctx, cfg, 20000, rng);

  // Oracle: average the survival product over all C(8,4) check subsets and
  // the uniform nonzero shift applied to each tampered round.  A checked
  // tampered round passes with the swap probability (1 + |ov(delta)|^2) / 2
  // averaged over delta != 0, which is (1 + 1/(N-1) * 0) ... for a balanced
  // context |ov(delta)|^2 = 0 for delta != 0, so each pass is 1/2.
  double survive = 0.0;
  std::uint64_t subsets = 0;
  for (std::uint64_t mask = 0; mask < 256; ++mask) {
    if (__builtin_popcountll(mask) != 4) continue;
    ++subsets;
    const int hit = __builtin_popcountll(mask & 0b111);  // checks on tampered rounds
    survive += std::pow(0.5, hit);
  }
  const double analytic = 1.0 - survive / double(subsets);
  CHECK(rep.analytic == doctest::Approx(analytic).epsilon(1e-9));
  CHECK(std::abs(rep.empirical - rep.analytic) <= 4.0 * rep.sigma);
}

TEST_CASE("honest detection never fires") {
  const ActionContext ctx = balanced_context(8, 16, 130);
  ProtocolConfig cfg;
  cfg.rounds = 8;
  cfg.adversary = AdversaryKind::tamper_first;
  cfg.tamper_count = 0;
  Rng rng(131);
  const DetectionReport rep = detection_probability(ctx, cfg, 2000, rng);
  CHECK(rep.aborts == 0);
  CHECK(rep.analytic == doctest::Approx(0.0).epsilon(1e-12));
}
