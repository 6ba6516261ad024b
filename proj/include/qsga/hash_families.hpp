#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsga/finite_math.hpp"
#include "qsga/rng.hpp"

namespace qsga {

enum class HashFamily { random_table, polynomial_kwise, lossy_composed, small_range };
enum class LossyMode { injective, lossy };

struct HashSpec {
  HashFamily family = HashFamily::random_table;
  std::uint32_t domain_bits = 0;  // k
  Modulus range;                  // N
  std::uint64_t seed = 0;
  // polynomial_kwise: number of coefficients t (degree t-1).
  std::uint32_t degree_t = 0;
  // lossy_composed: mode, loss r, inner width ell.
  LossyMode mode = LossyMode::injective;
  std::uint32_t loss_r = 0;
  std::uint32_t inner_bits = 0;
  // small_range: bucket count r.
  std::uint64_t small_r = 0;

  void validate() const;
};

struct LossyKeyReport;

// Evaluated hash {0,1}^k -> Z_N.  Immutable after sampling; eval is
// deterministic in (spec, seed).
class HashFunction {
 public:
  const HashSpec& spec() const { return spec_; }
  std::uint64_t domain_size() const { return std::uint64_t{1} << spec_.domain_bits; }
  std::uint64_t eval(std::uint64_t x) const;

  // Sorted "x_hex -> value" lines over the full domain (k <= 24).
  std::vector<std::string> dump_table() const;

 private:
  friend HashFunction sample_hash(const HashSpec& spec, Rng& rng);
  friend LossyKeyReport image_report(const HashFunction& h);
  HashSpec spec_{HashFamily::random_table, 0, Modulus(2), 0};
  std::vector<std::uint64_t> poly_coeffs_;  // low degree first
  std::vector<std::uint64_t> inner_table_;  // lossy_composed: f_q(x) per x
  std::uint64_t outer_seed_ = 0;            // lossy_composed / small_range outer table
  std::uint64_t bucket_seed_ = 0;           // small_range inner map
};

struct LossyKeyReport {
  LossyMode mode = LossyMode::injective;
  std::uint64_t image_size = 0;
  std::uint32_t k = 0;
  std::uint32_t r = 0;
  bool bound_ok = true;  // injective: == 2^k; lossy: <= 2^{k-r}
};

struct KwiseAuditReport {
  std::uint64_t draws = 0;
  std::uint64_t cells = 0;
  double chi_square_pvalue = 0.0;
};

// Parameter-regime flags for the lossy composition; desk-scale runs generally
// cannot satisfy both constraints, so reports carry the status instead of
// rejecting.
struct LossyConstraintStatus {
  bool domain_wide_enough = false;   // k >= 8 log2 N
  bool loss_small_enough = false;    // 2n(k-r) <= (log2 N)/4
};

HashFunction sample_hash(const HashSpec& spec, Rng& rng);

// Exact image size by domain enumeration (k <= 24); for lossy_composed also
// checks the mode's image bound.
LossyKeyReport image_report(const HashFunction& h);

// Draws fresh hashes from `spec` (re-seeded per draw) and chi-square-tests the
// joint output tuple at the given distinct points against uniform on Z_N^t.
KwiseAuditReport kwise_audit(const HashSpec& spec, const std::vector<std::uint64_t>& points,
                             std::uint64_t draws, Rng& rng);

LossyConstraintStatus lossy_constraint_status(std::uint32_t k, std::uint32_t r,
                                              const Modulus& range, std::size_t n);

// Reference total-variation constant pi^2 (2q)^3 / 3 for the small-range
// distribution under q queries.
double small_range_reference(double q);

}  // namespace qsga
