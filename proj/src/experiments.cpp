#include "qsga/experiments.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qsga/attacks.hpp"
#include "qsga/gmp_lab.hpp"
#include "qsga/money.hpp"
#include "qsga/qkd.hpp"
#include "qsga/stats.hpp"

namespace qsga {

namespace {

const char* kSchemaVersion = "1";
const char* kLibraryVersion = "qsga 0.1.0";

const Json& require(const Json& config, const char* key) {
  auto it = config.find(key);
  if (it == config.end())
    throw std::invalid_argument(std::string("config: missing required field '") + key + "'");
  return *it;
}

template <typename T>
T get_or(const Json& config, const char* key, T fallback) {
  auto it = config.find(key);
  return it == config.end() ? fallback : it->template get<T>();
}

HashSpec parse_hash_spec(const Json& j) {
  HashSpec spec{HashFamily::random_table, 0, Modulus(require(j, "range").get<std::uint64_t>())};
  const std::string family = require(j, "family").get<std::string>();
  if (family == "random_table")
    spec.family = HashFamily::random_table;
  else if (family == "polynomial_kwise")
    spec.family = HashFamily::polynomial_kwise;
  else if (family == "lossy_composed")
    spec.family = HashFamily::lossy_composed;
  else if (family == "small_range")
    spec.family = HashFamily::small_range;
  else
    throw std::invalid_argument("config: unknown hash family '" + family + "'");
  spec.domain_bits = require(j, "domain_bits").get<std::uint32_t>();
  spec.seed = get_or<std::uint64_t>(j, "seed", 0);
  spec.degree_t = get_or<std::uint32_t>(j, "degree_t", 0);
  if (get_or<std::string>(j, "mode", "injective") == "lossy") spec.mode = LossyMode::lossy;
  spec.loss_r = get_or<std::uint32_t>(j, "loss_r", 0);
  spec.inner_bits = get_or<std::uint32_t>(j, "inner_bits", 0);
  spec.small_r = get_or<std::uint64_t>(j, "small_r", 0);
  spec.validate();
  return spec;
}

// Context from config: hash spec under "hash", modulus from its range, and
// an optional "balanced": true for the one-preimage-per-output start state.
ActionContext make_context_from(const Json& config, Rng& rng) {
  const HashSpec spec = parse_hash_spec(require(config, "hash"));
  const HashFunction h = sample_hash(spec, rng);
  if (get_or<bool>(config, "balanced", false))
    return make_balanced_context(spec.range, h);
  return make_context(spec.range, h);
}

GroupMatrix parse_matrix(const Json& j, const Modulus& mod) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw std::invalid_argument("config: matrix must be a non-empty array of rows");
  GroupMatrix m(mod, j.size(), j[0].size());
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (j[i].size() != m.cols)
      throw std::invalid_argument("config: matrix rows have unequal lengths");
    for (std::size_t c = 0; c < m.cols; ++c) m.at(i, c) = mod.reduce(j[i][c].get<std::uint64_t>());
  }
  return m;
}

SecretDistribution parse_secrets(const Json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "uniform_zn") return SecretDistribution::uniform_zn(require(j, "m").get<std::size_t>());
  if (kind == "uniform_binary")
    return SecretDistribution::uniform_binary(require(j, "m").get<std::size_t>());
  if (kind == "mixed")
    return SecretDistribution::mixed(require(j, "binary_prefix").get<std::size_t>(),
                                     require(j, "uniform_tail").get<std::size_t>());
  throw std::invalid_argument("config: unknown secret kind '" + kind + "'");
}

GmpSide parse_side(const Json& config) {
  const std::string side = require(config, "side").get<std::string>();
  if (side == "secret") return GmpSide::secret_route;
  if (side == "pattern") return GmpSide::pattern_route;
  throw std::invalid_argument("config: side must be 'secret' or 'pattern'");
}

// Instance from either "preset" (ddh | lhs | extended-lhs) or explicit
// "matrix" + "secrets".
GmpInstance parse_instance(const Json& config, const ActionContext& ctx, Rng& rng) {
  if (config.contains("preset")) {
    const std::string preset = config["preset"].get<std::string>();
    if (preset == "ddh") return preset_ddh(ctx);
    if (preset == "lhs")
      return preset_lhs(require(config, "m").get<std::size_t>(),
                        require(config, "samples").get<std::size_t>(), ctx, rng);
    if (preset == "extended-lhs")
      return preset_extended_lhs(require(config, "m").get<std::size_t>(), ctx, rng);
    throw std::invalid_argument("config: unknown preset '" + preset + "'");
  }
  GmpInstance inst{parse_matrix(require(config, "matrix"), ctx.modulus),
                   parse_secrets(require(config, "secrets")), ctx};
  inst.validate();
  return inst;
}

bool all_verdicts(const Json& verdicts) {
  for (const auto& [_, v] : verdicts.items())
    if (!v.get<bool>()) return false;
  return true;
}

// ---- per-experiment runners; each fills metrics/tolerances/verdicts --------

void run_orthogonality(const Json& config, Rng& rng, RunOutcome& out) {
  Json& m = out.report["metrics"];
  Json& v = out.report["verdicts"];
  const double max_overlap = get_or<double>(config, "max_overlap", 1.0);
  out.report["tolerances"]["max_overlap"] = max_overlap;
  out.report["mode"] = "exact";

  const std::uint64_t seeds = get_or<std::uint64_t>(config, "seeds", 1);
  std::uint64_t within = 0;
  double worst = 0.0, worst_slack = -1.0;
  out.csv.push_back("seed_index,max_offdiag_overlap,deviation_sum,lhl_bound");
  for (std::uint64_t i = 0; i < seeds; ++i) {
    Rng sub = rng.substream(i);
    const ActionContext ctx = make_context_from(config, sub);
    const OrthogonalityReport rep = orthogonality_audit(ctx);
    if (i == 0) {
      m["max_offdiag_overlap"] = rep.max_offdiag_overlap;
      m["deviation_sum"] = rep.deviation_sum;
      m["lhl_bound"] = rep.lhl_bound;
    }
    worst = std::max(worst, rep.max_offdiag_overlap);
    worst_slack = std::max(worst_slack, rep.max_offdiag_overlap - rep.deviation_sum);
    if (rep.max_offdiag_overlap <= max_overlap) ++within;
    std::ostringstream row;
    row << i << ',' << rep.max_offdiag_overlap << ',' << rep.deviation_sum << ','
        << rep.lhl_bound;
    out.csv.push_back(row.str());
  }
  m["seeds"] = seeds;
  m["seeds_within_tolerance"] = within;
  m["worst_overlap"] = worst;
  // The overlap is bounded by the L1 deviation of the output masses from
  // uniform; checked per seed with no numerical slack beyond 1e-12.
  v["deviation_bound_holds"] = worst_slack <= 1e-12;
  v["tolerance_met"] = within >= get_or<std::uint64_t>(config, "min_seeds_within", seeds);
}

void run_gmp_verify(const Json& config, Rng& rng, RunOutcome& out) {
  const double tol = get_or<double>(config, "tolerance", 1e-9);
  out.report["tolerances"]["trace_distance"] = tol;
  out.report["mode"] = "exact";
  const ActionContext ctx = make_context_from(config, rng);
  const GmpInstance inst = parse_instance(config, ctx, rng);
  const EnsembleComparison cmp = verify_densmatrix_lemma(inst, parse_side(config), tol);
  Json& m = out.report["metrics"];
  m["trace_dist"] = cmp.trace_dist;
  m["frobenius"] = cmp.frobenius;
  m["max_offpattern_entry"] = cmp.max_offpattern_entry;
  out.report["verdicts"]["identity_holds"] = cmp.pass;
}

void run_game_distance(const Json& config, Rng& rng, RunOutcome& out) {
  out.report["mode"] = "exact";
  const ActionContext ctx = make_context_from(config, rng);
  const GroupMatrix M = config.contains("preset") ? parse_instance(config, ctx, rng).M
                                                  : parse_matrix(require(config, "matrix"), ctx.modulus);
  const double d = game_distance(M, ctx);
  out.report["metrics"]["game_distance"] = d;
  Json& v = out.report["verdicts"];
  if (config.contains("max_distance")) {
    out.report["tolerances"]["max_distance"] = config["max_distance"].get<double>();
    v["below_max"] = d <= config["max_distance"].get<double>();
  }
  if (config.contains("min_distance")) {
    out.report["tolerances"]["min_distance"] = config["min_distance"].get<double>();
    v["above_min"] = d >= config["min_distance"].get<double>();
  }
}

void run_structured(const Json& config, Rng& rng, RunOutcome& out) {
  const double eps = require(config, "epsilon").get<double>();
  out.report["tolerances"]["epsilon"] = eps;
  out.report["mode"] = "exact";
  const ActionContext ctx = make_context_from(config, rng);
  const GmpInstance inst = parse_instance(config, ctx, rng);
  const GoodnessReport good = goodness(inst.M, inst.secrets, ctx, eps,
                                       get_or<std::uint64_t>(config, "pair_budget", 1 << 16));
  const EnsembleComparison cmp = structured_distance(inst, eps);
  Json& m = out.report["metrics"];
  m["is_good"] = good.is_good;
  m["worst_tv"] = good.worst_tv;
  m["tested_pairs"] = good.tested_pairs;
  m["trace_dist"] = cmp.trace_dist;
  m["frobenius"] = cmp.frobenius;
  m["chain_cap"] = cmp.chain_cap;
  m["entry_cap"] = cmp.entry_cap;
  m["max_offpattern_entry"] = cmp.max_offpattern_entry;
  m["hypothesis_satisfied"] = cmp.hypothesis_satisfied;
  Json& v = out.report["verdicts"];
  // The entry cap is only asserted for instances the goodness scan certifies.
  v["entry_cap_ok"] = !good.is_good || cmp.entry_cap_ok;
  v["chain_ok"] = cmp.trace_dist <= cmp.chain_cap + 1e-9;
}

void run_lhs_fraction(const Json& config, Rng& rng, RunOutcome& out) {
  out.report["mode"] = "monte_carlo";
  const ActionContext ctx = make_context_from(config, rng);
  const SecretDistribution secrets = parse_secrets(require(config, "secrets"));
  const double eps = config.contains("epsilon")
                         ? config["epsilon"].get<double>()
                         : lhl_epsilon(secrets.min_entropy_bits(ctx.modulus), ctx.modulus);
  const std::uint64_t trials = require(config, "trials").get<std::uint64_t>();
  const GoodFractionReport rep =
      good_fraction(require(config, "samples").get<std::size_t>(),
                    require(config, "m").get<std::size_t>(), secrets, ctx, eps, trials, rng);
  const double target = 1.0 - std::sqrt(eps);
  const double threshold =
      target - 3.0 * frequency_sigma(std::min(target, 1.0), static_cast<std::size_t>(trials));
  Json& m = out.report["metrics"];
  m["epsilon"] = eps;
  m["fraction"] = rep.fraction;
  m["sigma"] = rep.sigma;
  m["good_count"] = rep.good_count;
  m["trials"] = rep.trials;
  m["threshold"] = threshold;
  out.report["tolerances"]["min_fraction"] = threshold;
  out.report["verdicts"]["fraction_ok"] = rep.fraction >= threshold;
}

void run_mh_inj(const Json& config, Rng& rng, RunOutcome& out) {
  out.report["mode"] = "exact";
  const HashSpec spec = parse_hash_spec(require(config, "hash"));
  const std::vector<std::size_t> class_sizes =
      require(config, "class_sizes").get<std::vector<std::size_t>>();
  const std::uint64_t seeds = get_or<std::uint64_t>(config, "seeds", 1);
  std::uint64_t colliding_seeds = 0, worst_count = 0;
  double bound = 0.0, worst_fraction = 0.0;
  bool hypothesis_ok = true;
  out.csv.push_back("seed_index,collision_count,collision_fraction,bound");
  for (std::uint64_t i = 0; i < seeds; ++i) {
    Rng sub = rng.substream(i);
    const HashFunction h = sample_hash(spec, sub);
    const ActionContext ctx = make_context(spec.range, h);
    const GroupMatrix M = parse_matrix(require(config, "matrix"), ctx.modulus);
    const MhInjectivityReport rep = mh_injectivity(M, class_sizes, ctx);
    bound = rep.bound;
    hypothesis_ok = hypothesis_ok && rep.hypothesis_ok;
    if (rep.any_collision) ++colliding_seeds;
    worst_count = std::max(worst_count, rep.collision_count);
    worst_fraction = std::max(worst_fraction, rep.collision_fraction);
    std::ostringstream row;
    row << i << ',' << rep.collision_count << ',' << rep.collision_fraction << ','
        << rep.bound;
    out.csv.push_back(row.str());
  }
  Json& m = out.report["metrics"];
  m["seeds"] = seeds;
  m["colliding_seeds"] = colliding_seeds;
  m["worst_collision_count"] = worst_count;
  m["worst_collision_fraction"] = worst_fraction;
  m["bound"] = bound;
  Json& v = out.report["verdicts"];
  v["hypothesis_ok"] = hypothesis_ok;
  v["within_bound"] = worst_fraction <= bound;
  if (get_or<bool>(config, "require_injective", false))
    v["all_injective"] = colliding_seeds == 0;
}

void run_attack(const Json& config, Rng& rng, RunOutcome& out, bool boolean_group) {
  out.report["mode"] = "monte_carlo";
  const std::uint64_t ell = require(config, "ell").get<std::uint64_t>();
  const std::uint64_t trials = require(config, "trials").get<std::uint64_t>();
  DlogExperimentReport rep;
  if (boolean_group) {
    rep = dlog_experiment_boolean(require(config, "n").get<std::uint32_t>(), ell, trials, rng);
  } else {
    const ActionContext ctx = make_context_from(config, rng);
    rep = dlog_experiment_cyclic(ctx, ell, trials, rng);
  }
  Json& m = out.report["metrics"];
  m["trials"] = rep.trials;
  m["successes"] = rep.successes;
  m["samples_per_trial"] = rep.samples_per_trial;
  m["copies_consumed"] = rep.copies_consumed;
  out.csv.push_back("trial,planted,recovered");
  for (std::size_t i = 0; i < rep.planted.size(); ++i) {
    std::ostringstream row;
    row << i << ',' << rep.planted[i] << ',' << rep.recovered[i];
    out.csv.push_back(row.str());
  }
  Json& v = out.report["verdicts"];
  if (config.contains("min_successes")) {
    out.report["tolerances"]["min_successes"] = config["min_successes"].get<std::uint64_t>();
    v["recovery_rate_ok"] = rep.successes >= config["min_successes"].get<std::uint64_t>();
  }
  if (config.contains("max_successes")) {
    out.report["tolerances"]["max_successes"] = config["max_successes"].get<std::uint64_t>();
    v["chance_rate_ok"] = rep.successes <= config["max_successes"].get<std::uint64_t>();
  }
}

void run_money(const Json& config, Rng& rng, RunOutcome& out) {
  out.report["mode"] = "monte_carlo";
  const ActionContext ctx = make_context_from(config, rng);
  const std::uint64_t mints = require(config, "mints").get<std::uint64_t>();
  const std::uint64_t trials = require(config, "trials").get<std::uint64_t>();
  const double fid_tol = get_or<double>(config, "fidelity_tolerance", 1e-9);

  double min_fidelity = 1.0, min_accept = 1.0;
  for (std::uint64_t i = 0; i < mints; ++i) {
    Rng sub = rng.substream(i);
    const Banknote note = gen_action_route(ctx, sub);
    // Reference: the hash-route note with the mapped serial is the start
    // state restricted to the matching hash preimage.
    const std::uint64_t h = equivalent_serial(ctx, note.serial);
    PureState ref;
    ref.layout = ctx.start_state.layout;
    for (const auto& [l, a] : ctx.start_state.amps)
      if (ctx.hash.eval(l[0]) == h) ref.amps.emplace(l, a);
    const double nrm = ref.norm();
    for (auto& [_, a] : ref.amps) a /= nrm;
    min_fidelity = std::min(min_fidelity, std::norm(inner_product(note.note, ref)));
    const VerificationVerdict vv =
        verify(ctx, note.serial, note.note, MoneyRoute::action, sub);
    min_accept = std::min(min_accept, vv.analytic_accept);
    const Banknote hnote = gen_hash_route(ctx, sub);
    const VerificationVerdict hv =
        verify(ctx, hnote.serial, hnote.note, MoneyRoute::hash, sub);
    min_accept = std::min(min_accept, hv.analytic_accept);
  }
  Rng counterfeit_rng = rng.substream(mints + 1);
  const CounterfeitReport cf = counterfeit_experiment(ctx, trials, counterfeit_rng);
  const double sigma = frequency_sigma(cf.analytic, static_cast<std::size_t>(trials));

  Json& m = out.report["metrics"];
  m["mints"] = mints;
  m["min_route_fidelity"] = min_fidelity;
  m["min_genuine_accept"] = min_accept;
  m["counterfeit_empirical"] = cf.empirical;
  m["counterfeit_analytic"] = cf.analytic;
  m["counterfeit_sigma"] = sigma;
  out.report["tolerances"]["fidelity_tolerance"] = fid_tol;
  Json& v = out.report["verdicts"];
  v["routes_equivalent"] = min_fidelity >= 1.0 - fid_tol;
  v["genuine_accepts"] = min_accept >= 1.0 - fid_tol;
  v["counterfeit_within_3sigma"] = std::abs(cf.empirical - cf.analytic) <= 3.0 * sigma;
}

void run_qkd(const Json& config, Rng& rng, RunOutcome& out) {
  out.report["mode"] = "monte_carlo";
  const ActionContext ctx = make_context_from(config, rng);
  ProtocolConfig pc;
  pc.rounds = require(config, "rounds").get<std::size_t>();
  const std::string adversary = get_or<std::string>(config, "adversary", "none");
  const std::uint64_t trials = require(config, "trials").get<std::uint64_t>();
  Json& m = out.report["metrics"];
  Json& v = out.report["verdicts"];

  if (adversary == "none") {
    const double lo = get_or<double>(config, "agreement_lo", 0.0);
    const double hi = get_or<double>(config, "agreement_hi", 1.0);
    out.report["tolerances"]["agreement_range"] = Json::array({lo, hi});
    std::uint64_t in_range = 0, aborts = 0;
    double mean = 0.0;
    out.csv.push_back("trial,agreement");
    for (std::uint64_t i = 0; i < trials; ++i) {
      Rng sub = rng.substream(i);
      const QkdTranscript t = run_protocol(ctx, pc, sub);
      if (t.aborted) {  // honest orthogonal runs never abort; count anyway
        ++aborts;
        continue;
      }
      const double a = agreement_fraction(t);
      mean += a;
      if (a >= lo && a <= hi) ++in_range;
      std::ostringstream row;
      row << i << ',' << a;
      out.csv.push_back(row.str());
    }
    m["trials"] = trials;
    m["aborts"] = aborts;
    m["in_range"] = in_range;
    m["mean_agreement"] = trials > aborts ? mean / static_cast<double>(trials - aborts) : 0.0;
    v["agreement_ok"] = in_range >= get_or<std::uint64_t>(config, "min_in_range", trials);
  } else if (adversary == "tamper_first") {
    pc.adversary = AdversaryKind::tamper_first;
    pc.tamper_count = get_or<std::size_t>(config, "tamper_count", pc.rounds);
    const DetectionReport rep = detection_probability(ctx, pc, trials, rng);
    m["trials"] = rep.trials;
    m["aborts"] = rep.aborts;
    m["empirical_abort"] = rep.empirical;
    m["analytic_abort"] = rep.analytic;
    m["sigma"] = rep.sigma;
    v["detection_within_3sigma"] = std::abs(rep.empirical - rep.analytic) <= 3.0 * rep.sigma;
  } else {
    throw std::invalid_argument("config: adversary must be 'none' or 'tamper_first'");
  }
}

void run_hash_audit(const Json& config, Rng& rng, RunOutcome& out) {
  const HashSpec spec = parse_hash_spec(require(config, "hash"));
  const std::string audit = get_or<std::string>(config, "audit", "image");
  Json& m = out.report["metrics"];
  Json& v = out.report["verdicts"];
  if (audit == "image") {
    out.report["mode"] = "exact";
    const LossyKeyReport rep = image_report(sample_hash(spec, rng));
    m["image_size"] = rep.image_size;
    v["image_bound_ok"] = rep.bound_ok;
    if (spec.family == HashFamily::lossy_composed) {
      const LossyConstraintStatus st = lossy_constraint_status(
          spec.domain_bits, spec.loss_r, spec.range, get_or<std::size_t>(config, "n", 1));
      m["domain_wide_enough"] = st.domain_wide_enough;
      m["loss_small_enough"] = st.loss_small_enough;
    }
  } else if (audit == "kwise") {
    out.report["mode"] = "monte_carlo";
    const double min_p = get_or<double>(config, "min_pvalue", 0.001);
    out.report["tolerances"]["min_pvalue"] = min_p;
    const KwiseAuditReport rep =
        kwise_audit(spec, require(config, "points").get<std::vector<std::uint64_t>>(),
                    require(config, "draws").get<std::uint64_t>(), rng);
    m["draws"] = rep.draws;
    m["cells"] = rep.cells;
    m["chi_square_pvalue"] = rep.chi_square_pvalue;
    v["uniform_joint"] = rep.chi_square_pvalue >= min_p;
  } else {
    throw std::invalid_argument("config: audit must be 'image' or 'kwise'");
  }
}

}  // namespace

RunOutcome run_experiment(const Json& config, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string kind = require(config, "experiment").get<std::string>();

  RunOutcome out;
  out.report["schema_version"] = kSchemaVersion;
  out.report["library"] = kLibraryVersion;
  out.report["experiment"] = kind;
  out.report["seed"] = seed;
  out.report["config"] = config;
  out.report["mode"] = "exact";
  out.report["metrics"] = Json::object();
  out.report["tolerances"] = Json::object();
  out.report["verdicts"] = Json::object();

  Rng rng(seed);
  if (kind == "orthogonality")
    run_orthogonality(config, rng, out);
  else if (kind == "gmp-verify")
    run_gmp_verify(config, rng, out);
  else if (kind == "game-distance")
    run_game_distance(config, rng, out);
  else if (kind == "structured")
    run_structured(config, rng, out);
  else if (kind == "lhs-fraction")
    run_lhs_fraction(config, rng, out);
  else if (kind == "mh-inj")
    run_mh_inj(config, rng, out);
  else if (kind == "attack-simon")
    run_attack(config, rng, out, /*boolean_group=*/true);
  else if (kind == "attack-dlog")
    run_attack(config, rng, out, /*boolean_group=*/false);
  else if (kind == "money")
    run_money(config, rng, out);
  else if (kind == "qkd")
    run_qkd(config, rng, out);
  else if (kind == "hash-audit")
    run_hash_audit(config, rng, out);
  else
    throw std::invalid_argument("config: unknown experiment '" + kind + "'");

  out.pass = all_verdicts(out.report["verdicts"]);
  out.report["pass"] = out.pass;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace qsga
