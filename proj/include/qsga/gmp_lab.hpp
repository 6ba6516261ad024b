#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qsga/group_action.hpp"

namespace qsga {

// Secret distribution over Z_N^m.  The mixed kind draws the first
// `binary_prefix` coordinates from {0,1} and the rest uniformly from Z_N;
// uniform_zn and uniform_binary are its endpoints.
struct SecretDistribution {
  enum class Kind { uniform_zn, uniform_binary, mixed, explicit_dist };
  Kind kind = Kind::uniform_zn;
  std::size_t m = 0;
  std::size_t binary_prefix = 0;  // mixed only
  FiniteDistribution<std::vector<std::uint64_t>> table;  // explicit_dist only

  static SecretDistribution uniform_zn(std::size_t m);
  static SecretDistribution uniform_binary(std::size_t m);
  static SecretDistribution mixed(std::size_t binary_prefix, std::size_t uniform_tail);
  static SecretDistribution explicit_dist(FiniteDistribution<std::vector<std::uint64_t>> table);

  double support_size(const Modulus& mod) const;
  // Exact enumeration of (outcome, probability); support must be <= 2^16.
  void for_each(const Modulus& mod,
                const std::function<void(const std::vector<std::uint64_t>&, double)>& fn) const;
  std::vector<std::uint64_t> sample(const Modulus& mod, Rng& rng) const;
  double min_entropy_bits(const Modulus& mod) const;
};

// Which branch of the matrix problem generated the label vector v.
enum class GmpSide {
  secret_route,   // v = M * s with s from the secret distribution (b = 0)
  pattern_route,  // v drawn to match M's row equality pattern (b = 1)
};

struct GmpInstance {
  GroupMatrix M;  // n x m
  SecretDistribution secrets;
  ActionContext ctx;

  void validate() const;
  std::size_t n() const { return M.rows; }
  std::uint64_t tuple_dimension() const;  // 2^{k n}
};

struct GmpSample {
  std::vector<std::uint64_t> v;
  std::vector<PureState> states;
};

struct GoodnessReport {
  double epsilon_target = 0.0;
  double worst_tv = 0.0;
  bool is_good = false;
  std::uint64_t tested_pairs = 0;
};

struct EnsembleComparison {
  DensityMatrix rho_direct;
  DensityMatrix rho_measured;
  double trace_dist = 0.0;
  double frobenius = 0.0;
  double chain_cap = 0.0;          // 2^{nk/2} * frobenius
  double entry_cap = 0.0;          // 2 sqrt(eps) / 2^{kn} (structured runs)
  double max_offpattern_entry = 0.0;
  bool entry_cap_ok = true;
  bool pass = false;                 // verify runs: trace_dist <= tol
  bool hypothesis_satisfied = true;  // asymptotic parameter regime flags
};

struct GoodFractionReport {
  double fraction = 0.0;
  double sigma = 0.0;
  std::uint64_t good_count = 0;
  std::uint64_t trials = 0;
};

struct MhInjectivityReport {
  std::uint64_t collision_count = 0;  // ordered tuple pairs
  double collision_fraction = 0.0;    // count / 2^{2kn}
  double bound = 0.0;                 // 2^{2kn} / N
  bool any_collision = false;
  bool hypothesis_ok = true;  // rows nonzero and pairwise distinct
};

// Draws one experiment row: the label vector v and the element-state tuple.
GmpSample sample_gmp(const GmpInstance& inst, GmpSide side, Rng& rng);

// Exact expectation of |states><states| over the side's randomness.  The
// pattern route averages the class values independently and uniformly over
// Z_N, which is the ensemble the density-matrix identity holds for; the
// transcript-level sampler (sample_eqpat) draws them distinct instead.
DensityMatrix ensemble_density_direct(const GmpInstance& inst, GmpSide side);

// Dephasing of the uniform tuple superposition by the side's label function:
// pattern route -> class-summed hash values (sum_{i in S_a} H(x_i))_a;
// secret route -> M'^T applied to those class sums, M' = M without duplicate
// rows.  Built via measure_label_function + mix.
DensityMatrix ensemble_density_measured(const GmpInstance& inst, GmpSide side);

// The keystone identity: direct and measured ensembles of one side coincide.
EnsembleComparison verify_densmatrix_lemma(const GmpInstance& inst, GmpSide side, double tol);

// Distinguishing game: trace distance between dephasing the uniform tuple
// superposition by class-summed inputs versus by the matrix functional
// M'^T applied to class-summed hash values.  This caps every distinguisher's
// advantage for the instance.
double game_distance(const GroupMatrix& M, const ActionContext& ctx);

// epsilon-goodness scan: worst total-variation distance of <z*M, s> from
// uniform over realized hash-difference vectors z != 0.
GoodnessReport goodness(const GroupMatrix& M, const SecretDistribution& secrets,
                        const ActionContext& ctx, double epsilon, std::uint64_t pair_budget);

// Structured-secret comparison of the direct secret-route ensemble against
// the pattern-dephased reference, with the bound-chain values.
EnsembleComparison structured_distance(const GmpInstance& inst, double epsilon);

// Fraction of uniformly drawn matrices that are epsilon-good.
GoodFractionReport good_fraction(std::size_t n, std::size_t m, const SecretDistribution& secrets,
                                 const ActionContext& ctx, double epsilon,
                                 std::uint64_t matrix_trials, Rng& rng);

// Collision census for the map (x_1..x_n) -> M^T (class-summed H-images),
// counting tuple pairs unequal up to within-class reordering.  M has one row
// per class; class_sizes gives the partition of the n positions.
MhInjectivityReport mh_injectivity(const GroupMatrix& M,
                                   const std::vector<std::size_t>& class_sizes,
                                   const ActionContext& ctx);

// Example instances.
GmpInstance preset_ddh(const ActionContext& ctx);
GmpInstance preset_lhs(std::size_t m, std::size_t samples, const ActionContext& ctx, Rng& rng);
GmpInstance preset_extended_lhs(std::size_t m, const ActionContext& ctx, Rng& rng);

}  // namespace qsga
