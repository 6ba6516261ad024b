#include "qsga/hash_families.hpp"

#include "qsga/stats.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace qsga {

void HashSpec::validate() const {
  if (domain_bits == 0 || domain_bits > 63)
    throw std::invalid_argument("HashSpec: domain_bits out of range");
  switch (family) {
    case HashFamily::random_table:
      break;
    case HashFamily::polynomial_kwise:
      if (degree_t == 0) throw std::invalid_argument("HashSpec: polynomial needs degree_t >= 1");
      if (!range.is_prime())
        throw std::invalid_argument("HashSpec: polynomial family needs a prime modulus");
      if ((std::uint64_t{1} << domain_bits) > range.n)
        throw std::invalid_argument(
            "HashSpec: polynomial family needs 2^k <= N (injective field embedding)");
      break;
    case HashFamily::lossy_composed:
      if (loss_r >= domain_bits)
        throw std::invalid_argument("HashSpec: lossy_composed needs r < k");
      if (inner_bits < domain_bits)
        throw std::invalid_argument("HashSpec: lossy_composed needs inner width >= k");
      if (inner_bits > 40) throw std::invalid_argument("HashSpec: inner width too large");
      break;
    case HashFamily::small_range:
      if (small_r == 0 || small_r > (std::uint64_t{1} << domain_bits))
        throw std::invalid_argument("HashSpec: small_range needs 1 <= r <= 2^k");
      break;
  }
}

std::uint64_t HashFunction::eval(std::uint64_t x) const {
  if (x >> spec_.domain_bits)
    throw std::invalid_argument("HashFunction::eval: input wider than k bits");
  const Modulus& mod = spec_.range;
  switch (spec_.family) {
    case HashFamily::random_table:
      return mix64(spec_.seed, x) % mod.n;
    case HashFamily::polynomial_kwise: {
      std::uint64_t acc = 0;  // Horner, high coefficient first
      for (auto it = poly_coeffs_.rbegin(); it != poly_coeffs_.rend(); ++it)
        acc = mod.add(mod.mul(acc, x), *it);
      return acc;
    }
    case HashFamily::lossy_composed:
      return mix64(outer_seed_, inner_table_[x]) % mod.n;
    case HashFamily::small_range:
      return mix64(outer_seed_, mix64(bucket_seed_, x) % spec_.small_r) % mod.n;
  }
  throw std::logic_error("HashFunction::eval: unknown family");
}

std::vector<std::string> HashFunction::dump_table() const {
  if (spec_.domain_bits > 24)
    throw std::invalid_argument("dump_table: domain too large to enumerate");
  std::vector<std::string> lines;
  lines.reserve(domain_size());
  for (std::uint64_t x = 0; x < domain_size(); ++x) {
    std::ostringstream os;
    os << std::hex << std::setw((spec_.domain_bits + 3) / 4) << std::setfill('0') << x
       << std::dec << " -> " << eval(x);
    lines.push_back(os.str());
  }
  return lines;
}

HashFunction sample_hash(const HashSpec& spec, Rng& rng) {
  spec.validate();
  HashFunction h;
  h.spec_ = spec;
  // A zero seed means "draw a fresh one"; a fixed nonzero seed pins the
  // function exactly, so lazy and eager materializations agree bit-for-bit.
  if (h.spec_.seed == 0) h.spec_.seed = rng.next_u64() | 1;
  Rng local(h.spec_.seed);
  switch (spec.family) {
    case HashFamily::random_table:
      // Counter table keyed directly by the spec seed; nothing to materialize.
      break;
    case HashFamily::polynomial_kwise: {
      h.poly_coeffs_.resize(spec.degree_t);
      for (auto& c : h.poly_coeffs_) c = local.uniform(spec.range.n);
      break;
    }
    case HashFamily::lossy_composed: {
      const std::uint64_t domain = std::uint64_t{1} << spec.domain_bits;
      const std::uint64_t inner_space = std::uint64_t{1} << spec.inner_bits;
      auto draw_injection = [&](std::uint64_t count) {
        std::vector<std::uint64_t> out;
        std::unordered_set<std::uint64_t> used;
        out.reserve(count);
        while (out.size() < count) {
          const std::uint64_t y = local.uniform(inner_space);
          if (used.insert(y).second) out.push_back(y);
        }
        return out;
      };
      h.inner_table_.resize(domain);
      if (spec.mode == LossyMode::injective) {
        h.inner_table_ = draw_injection(domain);
      } else {
        const std::uint64_t buckets = std::uint64_t{1} << (spec.domain_bits - spec.loss_r);
        const auto bucket_points = draw_injection(buckets);
        for (auto& v : h.inner_table_) v = bucket_points[local.uniform(buckets)];
      }
      h.outer_seed_ = local.next_u64();
      break;
    }
    case HashFamily::small_range:
      h.bucket_seed_ = local.next_u64();
      h.outer_seed_ = local.next_u64();
      break;
  }
  return h;
}

LossyKeyReport image_report(const HashFunction& h) {
  if (h.spec().domain_bits > 24)
    throw std::invalid_argument("image_report: domain too large to enumerate");
  LossyKeyReport rep;
  rep.mode = h.spec().mode;
  rep.k = h.spec().domain_bits;
  rep.r = h.spec().loss_r;
  // For the composition the mode bound speaks about the inner stage's image;
  // the outer table may collide on top of it without violating lossiness.
  std::set<std::uint64_t> image;
  if (h.spec().family == HashFamily::lossy_composed) {
    for (std::uint64_t v : h.inner_table_) image.insert(v);
    rep.image_size = image.size();
    if (h.spec().mode == LossyMode::injective)
      rep.bound_ok = rep.image_size == h.domain_size();
    else
      rep.bound_ok = rep.image_size <= (std::uint64_t{1} << (rep.k - rep.r));
  } else {
    for (std::uint64_t x = 0; x < h.domain_size(); ++x) image.insert(h.eval(x));
    rep.image_size = image.size();
  }
  return rep;
}

KwiseAuditReport kwise_audit(const HashSpec& spec, const std::vector<std::uint64_t>& points,
                             std::uint64_t draws, Rng& rng) {
  spec.validate();
  if (points.empty()) throw std::invalid_argument("kwise_audit: need points");
  {
    std::set<std::uint64_t> uniq(points.begin(), points.end());
    if (uniq.size() != points.size())
      throw std::invalid_argument("kwise_audit: points must be distinct");
  }
  double cells_d = 1.0;
  for (std::size_t i = 0; i < points.size(); ++i) cells_d *= static_cast<double>(spec.range.n);
  if (cells_d > static_cast<double>(std::uint64_t{1} << 20))
    throw std::invalid_argument("kwise_audit: N^t exceeds 2^20; lower t or N");
  const std::uint64_t cells = static_cast<std::uint64_t>(cells_d);

  std::vector<std::uint64_t> counts(cells, 0);
  for (std::uint64_t d = 0; d < draws; ++d) {
    Rng draw_rng = rng.substream(d);
    HashSpec fresh = spec;
    fresh.seed = draw_rng.next_u64();
    const HashFunction h = sample_hash(fresh, draw_rng);
    std::uint64_t idx = 0;
    for (std::uint64_t p : points) idx = idx * spec.range.n + h.eval(p);
    ++counts[idx];
  }
  KwiseAuditReport rep;
  rep.draws = draws;
  rep.cells = cells;
  rep.chi_square_pvalue = chi_square_uniform_pvalue(counts);
  return rep;
}

LossyConstraintStatus lossy_constraint_status(std::uint32_t k, std::uint32_t r,
                                              const Modulus& range, std::size_t n) {
  const double log_n = std::log2(static_cast<double>(range.n));
  LossyConstraintStatus st;
  st.domain_wide_enough = static_cast<double>(k) >= 8.0 * log_n;
  st.loss_small_enough = 2.0 * static_cast<double>(n) * static_cast<double>(k - r) <= log_n / 4.0;
  return st;
}

double small_range_reference(double q) {
  const double t = 2.0 * q;
  return std::numbers::pi * std::numbers::pi * t * t * t / 3.0;
}

}  // namespace qsga
