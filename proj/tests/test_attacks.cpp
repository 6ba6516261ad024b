#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "qsga/attacks.hpp"

using namespace qsga;

namespace {

ActionContext balanced_context(std::uint32_t k, std::uint64_t N, std::uint64_t seed) {
  HashSpec spec{HashFamily::random_table, k, Modulus(N), seed};
  Rng rng(seed);
  return make_balanced_context(Modulus(N), sample_hash(spec, rng));
}

}  // namespace

TEST_CASE("cyclic coset samples carry the shift between their two branches") {
  const ActionContext ctx = balanced_context(5, 8, 80);
  const CosetSampler sampler(ctx);
  CHECK(sampler.audit_overlap() <= 1e-6);
  Rng rng(81);
  for (std::uint64_t g = 0; g < 8; ++g) {
    const CosetSample cs = sampler.sample(g, rng);
    CHECK(cs.group_order == 8);
    CHECK(cs.hidden_g == g);
    REQUIRE(cs.state.amps.size() == 2);
    const BasisLabel& zero = cs.state.amps.begin()->first;
    REQUIRE(zero[0] == 0);
    const BasisLabel one{1, (zero[1] + 8 - g) % 8, (zero[2] + g) % 8};
    REQUIRE(cs.state.amps.count(one) == 1);
    CHECK(cs.state.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(cs.state.amps.at(zero) - cs.state.amps.at(one)) < 1e-12);
  }
}

TEST_CASE("boolean coset samples use XOR on both label registers") {
  Rng rng(82);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t g = rng.uniform(16);
    const CosetSample cs = coset_sample_boolean(4, g, rng);
    CHECK(cs.kind == GroupKind::boolean_group);
    CHECK(cs.group_order == 16);
    REQUIRE(cs.state.amps.size() == 2);
    const BasisLabel& zero = cs.state.amps.begin()->first;
    const BasisLabel one{1, zero[1] ^ g, zero[2] ^ g};
    CHECK(cs.state.amps.count(one) == 1);
  }
}

TEST_CASE("discarding the state registers collapses to the sampled ensemble") {
  // Build the full five-register source state and trace out the two element
  // states; with an exactly orthogonal orbit the label registers land on the
  // uniform mixture of the two-branch states the sampler emits.
  const std::uint64_t N = 4;
  const ActionContext ctx = balanced_context(4, N, 83);
  for (const std::uint64_t g : {1ull, 3ull}) {
    const PureState source = test_oracles::coset_source_state(ctx, g);
    CHECK(source.norm() == doctest::Approx(1.0).epsilon(1e-9));
    const DensityMatrix reduced = test_oracles::partial_trace_front(source, 3);

    std::vector<std::pair<double, PureState>> ensemble;
    for (std::uint64_t y0 = 0; y0 < N; ++y0)
      for (std::uint64_t y1 = 0; y1 < N; ++y1) {
        PureState phi;
        phi.layout = reduced.layout;
        phi.amps[{0, y0, y1}] = 1.0 / std::sqrt(2.0);
        phi.amps[{1, (y0 + N - g) % N, (y1 + g) % N}] += 1.0 / std::sqrt(2.0);
        ensemble.emplace_back(1.0 / double(N * N), phi);
      }
    CHECK(trace_distance(reduced, mix(ensemble)) <= 1e-9);
  }
}

TEST_CASE("the sampler rejects far-from-orthogonal actions") {
  // 8 domain points over 5 outputs cannot be balanced, and the audit overlap
  // of a plain random table at this size is far above the cap.
  HashSpec spec{HashFamily::random_table, 3, Modulus(5), 84};
  Rng rng(84);
  const ActionContext ctx = make_context(Modulus(5), sample_hash(spec, rng));
  CHECK_THROWS_AS(CosetSampler{ctx}, std::invalid_argument);
}

TEST_CASE("parity recovery over the boolean group") {
  SUBCASE("enough samples pin the shift") {
    Rng rng(85);
    const DlogExperimentReport rep = dlog_experiment_boolean(4, 16, 100, rng);
    CHECK(rep.successes >= 99);
    CHECK(rep.copies_consumed == 2 * 16 * 100);
    REQUIRE(rep.planted.size() == 100);
    REQUIRE(rep.recovered.size() == 100);
  }
  SUBCASE("the zero shift is recovered, not special-cased") {
    Rng rng(86);
    std::vector<CosetSample> samples;
    for (int i = 0; i < 16; ++i) samples.push_back(coset_sample_boolean(4, 0, rng));
    const auto got = simon_recover(samples, rng);
    REQUIRE(got.has_value());
    CHECK(*got == 0);
  }
  SUBCASE("a single sample cannot determine four bits") {
    Rng rng(87);
    const std::vector<CosetSample> samples{coset_sample_boolean(4, 9, rng)};
    CHECK_FALSE(simon_recover(samples, rng).has_value());
  }
}

TEST_CASE("likelihood recovery over the cyclic group") {
  SUBCASE("every shift at N = 8 is recovered with a modest sample budget") {
    const ActionContext ctx = balanced_context(5, 8, 88);
    Rng rng(89);
    const DlogExperimentReport rep = dlog_experiment_cyclic(ctx, 48, 40, rng);
    CHECK(rep.successes >= 38);
    CHECK(rep.samples_per_trial == 48);
    CHECK(rep.copies_consumed == 2 * 48 * 40);
  }
  SUBCASE("with no samples the guess defaults to zero") {
    Rng rng(90);
    CHECK(ml_dlog_recover({}, rng) == 0);
  }
  SUBCASE("sample order does not matter") {
    const ActionContext ctx = balanced_context(5, 8, 91);
    const CosetSampler sampler(ctx);
    Rng rng(92);
    std::vector<CosetSample> samples;
    for (int i = 0; i < 64; ++i) samples.push_back(sampler.sample(5, rng));
    Rng r1(93), r2(94);
    const std::uint64_t forward = ml_dlog_recover(samples, r1);
    std::reverse(samples.begin(), samples.end());
    const std::uint64_t backward = ml_dlog_recover(samples, r2);
    CHECK(forward == 5);
    CHECK(backward == 5);
  }
}

TEST_CASE("N = 2 cyclic recovery agrees with one-bit parity recovery") {
  // The two-element cyclic group is the one-bit boolean group; both attack
  // paths must solve it.
  std::uint64_t seed = 95;
  ActionContext ctx = balanced_context(3, 2, seed);
  const CosetSampler sampler(ctx);
  Rng rng(96);
  for (const std::uint64_t g : {0ull, 1ull}) {
    std::vector<CosetSample> cyclic, boolean;
    for (int i = 0; i < 24; ++i) {
      cyclic.push_back(sampler.sample(g, rng));
      boolean.push_back(coset_sample_boolean(1, g, rng));
    }
    CHECK(ml_dlog_recover(cyclic, rng) == g);
    const auto via_parity = simon_recover(boolean, rng);
    REQUIRE(via_parity.has_value());
    CHECK(*via_parity == g);
  }
}

TEST_CASE("an empty sample budget leaves recovery at chance level") {
  const ActionContext ctx = balanced_context(4, 4, 97);
  Rng rng(98);
  const DlogExperimentReport rep = dlog_experiment_cyclic(ctx, 0, 40, rng);
  // Only trials that happen to plant zero can match the default guess.
  std::uint64_t planted_zero = 0;
  for (std::size_t i = 0; i < rep.planted.size(); ++i) {
    if (rep.planted[i] == 0) ++planted_zero;
    CHECK(rep.recovered[i] == 0);
  }
  CHECK(rep.successes == planted_zero);
  CHECK(rep.copies_consumed == 0);
}
