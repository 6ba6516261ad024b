#include "qsga/gmp_lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qsga {

// ---------------------------------------------------------------------------
// SecretDistribution

SecretDistribution SecretDistribution::uniform_zn(std::size_t m) {
  SecretDistribution d;
  d.kind = Kind::uniform_zn;
  d.m = m;
  d.binary_prefix = 0;
  return d;
}

SecretDistribution SecretDistribution::uniform_binary(std::size_t m) {
  SecretDistribution d;
  d.kind = Kind::uniform_binary;
  d.m = m;
  d.binary_prefix = m;
  return d;
}

SecretDistribution SecretDistribution::mixed(std::size_t binary_prefix,
                                             std::size_t uniform_tail) {
  SecretDistribution d;
  d.kind = Kind::mixed;
  d.m = binary_prefix + uniform_tail;
  d.binary_prefix = binary_prefix;
  return d;
}

SecretDistribution SecretDistribution::explicit_dist(
    FiniteDistribution<std::vector<std::uint64_t>> table) {
  table.validate();
  if (table.p.empty()) throw std::invalid_argument("SecretDistribution: empty table");
  SecretDistribution d;
  d.kind = Kind::explicit_dist;
  d.m = table.p.begin()->first.size();
  for (const auto& [v, _] : table.p)
    if (v.size() != d.m)
      throw std::invalid_argument("SecretDistribution: ragged support vectors");
  d.table = std::move(table);
  return d;
}

double SecretDistribution::support_size(const Modulus& mod) const {
  if (kind == Kind::explicit_dist) return static_cast<double>(table.p.size());
  double s = 1.0;
  for (std::size_t i = 0; i < m; ++i)
    s *= i < binary_prefix ? 2.0 : static_cast<double>(mod.n);
  return s;
}

void SecretDistribution::for_each(
    const Modulus& mod,
    const std::function<void(const std::vector<std::uint64_t>&, double)>& fn) const {
  if (kind == Kind::explicit_dist) {
    for (const auto& [v, p] : table.p) fn(v, p);
    return;
  }
  if (support_size(mod) > 65536.0)
    throw std::invalid_argument("SecretDistribution: support exceeds exact-enumeration cap 2^16");
  std::vector<std::uint64_t> s(m, 0);
  const double p = 1.0 / support_size(mod);
  while (true) {
    fn(s, p);
    std::size_t i = 0;
    for (; i < m; ++i) {
      const std::uint64_t card = i < binary_prefix ? 2 : mod.n;
      if (++s[i] < card) break;
      s[i] = 0;
    }
    if (i == m) break;
  }
}

std::vector<std::uint64_t> SecretDistribution::sample(const Modulus& mod, Rng& rng) const {
  if (kind == Kind::explicit_dist) {
    const double u = rng.uniform_real();
    double acc = 0.0;
    for (const auto& [v, p] : table.p) {
      acc += p;
      if (u < acc) return v;
    }
    return table.p.rbegin()->first;
  }
  std::vector<std::uint64_t> s(m);
  for (std::size_t i = 0; i < m; ++i)
    s[i] = rng.uniform(i < binary_prefix ? 2 : mod.n);
  return s;
}

double SecretDistribution::min_entropy_bits(const Modulus& mod) const {
  if (kind == Kind::explicit_dist) return min_entropy(table);
  return static_cast<double>(binary_prefix) +
         static_cast<double>(m - binary_prefix) * std::log2(static_cast<double>(mod.n));
}

// ---------------------------------------------------------------------------
// GmpInstance plumbing

void GmpInstance::validate() const {
  ctx.validate();
  if (M.mod.n != ctx.modulus.n)
    throw std::invalid_argument("GmpInstance: matrix modulus does not match context");
  if (secrets.m != M.cols)
    throw std::invalid_argument("GmpInstance: secret length does not match matrix columns");
}

std::uint64_t GmpInstance::tuple_dimension() const {
  const std::uint64_t bits = static_cast<std::uint64_t>(ctx.domain_bits) * M.rows;
  if (bits > 62) throw std::invalid_argument("GmpInstance: tuple space too large");
  return std::uint64_t{1} << bits;
}

namespace {

Layout tuple_layout(std::uint32_t k, std::size_t n) {
  return Layout(n, RegisterSpec{RegisterSpec::Kind::bits, k, 0});
}

// Hash value of every domain point.
std::vector<std::uint64_t> hash_table(const ActionContext& ctx) {
  std::vector<std::uint64_t> h(ctx.hash.domain_size());
  for (std::uint64_t x = 0; x < h.size(); ++x) h[x] = ctx.hash.eval(x);
  return h;
}

// M with duplicate rows removed, first occurrence order (one row per class).
GroupMatrix dedup_rows(const GroupMatrix& M, const EqualityPattern& pat) {
  GroupMatrix out(M.mod, pat.class_count(), M.cols);
  for (std::size_t a = 0; a < pat.class_count(); ++a)
    for (std::size_t t = 0; t < M.cols; ++t)
      out.at(a, t) = M.at(pat.classes[a].front(), t) % M.mod.n;
  return out;
}

std::uint64_t pow_checked(std::uint64_t base, std::size_t exp, std::uint64_t cap,
                          const char* what) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (v > cap / base) throw std::invalid_argument(std::string(what) + ": space too large");
    v *= base;
  }
  return v;
}

// Characteristic sums of the label-vector distribution: for each difference
// vector d in Z_N^n (packed base N), char[d] = E_v[ w_N^{<d, v>} ].  The
// direct density entry at (x, x') is char[d(x,x')] / 2^{kn}.
std::vector<Complex> char_table(const GmpInstance& inst, GmpSide side) {
  const std::uint64_t N = inst.M.mod.n;
  const std::size_t n = inst.n();
  const std::uint64_t dspace = pow_checked(N, n, std::uint64_t{1} << 20, "char_table");

  std::vector<Complex> table(dspace, Complex{0.0});

  auto accumulate = [&](const std::vector<std::uint64_t>& v, double p) {
    for (std::uint64_t d = 0; d < dspace; ++d) {
      std::uint64_t rest = d;
      std::uint64_t e = 0;
      for (std::size_t i = 0; i < n; ++i) {
        e += rest % N * (v[i] % N);
        rest /= N;
      }
      table[d] += p * unit_root(N, e % N);
    }
  };

  if (side == GmpSide::secret_route) {
    inst.secrets.for_each(inst.M.mod, [&](const std::vector<std::uint64_t>& s, double p) {
      accumulate(matvec(inst.M, s), p);
    });
  } else {
    const EqualityPattern pat = equality_pattern(inst.M);
    const std::size_t j = pat.class_count();
    const auto class_of = pat.class_of();
    pow_checked(N, j, std::uint64_t{1} << 16, "char_table pattern route");
    const double p = 1.0 / std::pow(static_cast<double>(N), static_cast<double>(j));
    std::vector<std::uint64_t> c(j, 0);
    std::vector<std::uint64_t> v(n, 0);
    while (true) {
      for (std::size_t i = 0; i < n; ++i) v[i] = c[class_of[i]];
      accumulate(v, p);
      std::size_t a = 0;
      for (; a < j; ++a) {
        if (++c[a] < N) break;
        c[a] = 0;
      }
      if (a == j) break;
    }
  }
  return table;
}

struct TupleSpace {
  std::size_t n = 0;
  std::uint32_t k = 0;
  std::uint64_t dim = 0;
  std::vector<BasisLabel> labels;

  explicit TupleSpace(const GmpInstance& inst) {
    n = inst.n();
    k = inst.ctx.domain_bits;
    dim = inst.tuple_dimension();
    if (dim > 1024)
      throw std::invalid_argument("ensemble: 2^{kn} over pair-loop cap 1024; shrink k*n");
    labels.reserve(dim);
    const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    for (std::uint64_t packed = 0; packed < dim; ++packed) {
      BasisLabel l(n);
      for (std::size_t i = 0; i < n; ++i) l[i] = packed >> (k * i) & mask;
      labels.push_back(std::move(l));
    }
  }
};

PureState uniform_tuple_state(const TupleSpace& space) {
  PureState s;
  s.layout = tuple_layout(space.k, space.n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(space.dim));
  for (const auto& l : space.labels) s.amps.emplace(l, amp);
  return s;
}

// Class-summed hash values (sum_{i in S_a} H(x_i) mod N)_a of a tuple label.
BasisLabel class_sums(const BasisLabel& l, const EqualityPattern& pat,
                      const std::vector<std::uint64_t>& hvals, std::uint64_t N) {
  BasisLabel out(pat.class_count(), 0);
  for (std::size_t a = 0; a < pat.class_count(); ++a) {
    std::uint64_t acc = 0;
    for (std::size_t i : pat.classes[a]) acc = (acc + hvals[l[i]]) % N;
    out[a] = acc;
  }
  return out;
}

BasisLabel matrix_functional(const BasisLabel& sums, const GroupMatrix& Mp) {
  BasisLabel out(Mp.cols, 0);
  for (std::size_t t = 0; t < Mp.cols; ++t) {
    std::uint64_t acc = 0;
    for (std::size_t a = 0; a < Mp.rows; ++a)
      acc = Mp.mod.add(acc, Mp.mod.mul(sums[a], Mp.at(a, t)));
    out[t] = acc;
  }
  return out;
}

DensityMatrix dephase_uniform(const GmpInstance& inst,
                              const std::function<BasisLabel(const BasisLabel&)>& f) {
  const TupleSpace space(inst);
  const PureState uniform = uniform_tuple_state(space);
  const auto records = measure_label_function(uniform, f);
  std::vector<std::pair<double, PureState>> ensemble;
  ensemble.reserve(records.size());
  for (const auto& r : records) ensemble.emplace_back(r.probability, r.collapsed);
  return mix(ensemble);
}

double expanding_hypothesis_flag(const GmpInstance& inst) {
  const double logn = std::log2(static_cast<double>(inst.M.mod.n));
  return static_cast<double>(inst.n()) <= std::sqrt(logn) / 2.0 ? 1.0 : 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Operations

GmpSample sample_gmp(const GmpInstance& inst, GmpSide side, Rng& rng) {
  inst.validate();
  GmpSample out;
  if (side == GmpSide::secret_route) {
    out.v = matvec(inst.M, inst.secrets.sample(inst.M.mod, rng));
  } else {
    out.v = sample_eqpat(equality_pattern(inst.M), inst.M.mod, rng);
  }
  out.states.reserve(out.v.size());
  for (std::uint64_t vi : out.v) out.states.push_back(element_state(inst.ctx, vi));
  return out;
}

DensityMatrix ensemble_density_direct(const GmpInstance& inst, GmpSide side) {
  inst.validate();
  const TupleSpace space(inst);
  const auto chars = char_table(inst, side);
  const auto hvals = hash_table(inst.ctx);
  const std::uint64_t N = inst.M.mod.n;

  // Pairwise hash differences of domain points, and base-N place values.
  const std::uint64_t dom = hvals.size();
  std::vector<std::uint64_t> diff(dom * dom);
  for (std::uint64_t a = 0; a < dom; ++a)
    for (std::uint64_t b = 0; b < dom; ++b)
      diff[a * dom + b] = (hvals[a] + N - hvals[b]) % N;
  std::vector<std::uint64_t> place(space.n, 1);
  for (std::size_t i = 1; i < space.n; ++i) place[i] = place[i - 1] * N;

  DensityMatrix rho;
  rho.layout = tuple_layout(space.k, space.n);
  const double scale = 1.0 / static_cast<double>(space.dim);
  auto hint = rho.entries.end();
  for (std::uint64_t x = 0; x < space.dim; ++x)
    for (std::uint64_t y = 0; y < space.dim; ++y) {
      std::uint64_t d = 0;
      for (std::size_t i = 0; i < space.n; ++i)
        d += diff[space.labels[x][i] * dom + space.labels[y][i]] * place[i];
      const Complex val = chars[d] * scale;
      if (std::abs(val) >= kAmplitudePrune)
        hint = rho.entries.emplace_hint(rho.entries.end(),
                                        std::pair{space.labels[x], space.labels[y]}, val);
    }
  (void)hint;
  return rho;
}

DensityMatrix ensemble_density_measured(const GmpInstance& inst, GmpSide side) {
  inst.validate();
  const auto hvals = hash_table(inst.ctx);
  const EqualityPattern pat = equality_pattern(inst.M);
  const GroupMatrix Mp = dedup_rows(inst.M, pat);
  const std::uint64_t N = inst.M.mod.n;
  if (side == GmpSide::pattern_route) {
    return dephase_uniform(
        inst, [&](const BasisLabel& l) { return class_sums(l, pat, hvals, N); });
  }
  return dephase_uniform(inst, [&](const BasisLabel& l) {
    return matrix_functional(class_sums(l, pat, hvals, N), Mp);
  });
}

EnsembleComparison verify_densmatrix_lemma(const GmpInstance& inst, GmpSide side, double tol) {
  EnsembleComparison cmp;
  cmp.rho_direct = ensemble_density_direct(inst, side);
  cmp.rho_measured = ensemble_density_measured(inst, side);
  cmp.trace_dist = trace_distance(cmp.rho_direct, cmp.rho_measured);
  cmp.frobenius = frobenius_distance(cmp.rho_direct, cmp.rho_measured);
  const double nk = static_cast<double>(inst.n()) * inst.ctx.domain_bits;
  cmp.chain_cap = std::exp2(nk / 2.0) * cmp.frobenius;
  for (const auto& [key, v] : cmp.rho_direct.entries)
    if (!cmp.rho_measured.entries.count(key))
      cmp.max_offpattern_entry = std::max(cmp.max_offpattern_entry, std::abs(v));
  cmp.hypothesis_satisfied = expanding_hypothesis_flag(inst) > 0.5;
  cmp.pass = cmp.trace_dist <= tol;
  return cmp;
}

double game_distance(const GroupMatrix& M, const ActionContext& ctx) {
  GmpInstance inst{M, SecretDistribution::uniform_zn(M.cols), ctx};
  inst.validate();
  const auto hvals = hash_table(ctx);
  const EqualityPattern pat = equality_pattern(M);
  const GroupMatrix Mp = dedup_rows(M, pat);
  const std::uint64_t N = M.mod.n;
  const std::uint64_t dom_mod = std::uint64_t{1} << ctx.domain_bits;

  // Branch one measures the class-summed inputs themselves; branch two the
  // matrix functional of the class-summed hash values.
  const DensityMatrix rho_inputs = dephase_uniform(inst, [&](const BasisLabel& l) {
    BasisLabel out(pat.class_count(), 0);
    for (std::size_t a = 0; a < pat.class_count(); ++a) {
      std::uint64_t acc = 0;
      for (std::size_t i : pat.classes[a]) acc = (acc + l[i]) % dom_mod;
      out[a] = acc;
    }
    return out;
  });
  const DensityMatrix rho_matrix = dephase_uniform(inst, [&](const BasisLabel& l) {
    return matrix_functional(class_sums(l, pat, hvals, N), Mp);
  });
  return trace_distance(rho_inputs, rho_matrix);
}

namespace {

// Realized hash-difference values over the context's domain.
std::vector<std::uint64_t> realized_diffs(const std::vector<std::uint64_t>& hvals,
                                          std::uint64_t N) {
  std::vector<bool> seen(N, false);
  for (std::uint64_t a : hvals)
    for (std::uint64_t b : hvals) seen[(a + N - b) % N] = true;
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 0; d < N; ++d)
    if (seen[d]) out.push_back(d);
  return out;
}

// TV distance from uniform on Z_N of <w, s> over the secret distribution.
// Product-form secrets are convolved coordinate by coordinate, which keeps
// the goodness scan's inner loop at O(m N^2) instead of the support size.
double tv_from_uniform(const std::vector<std::uint64_t>& w, const SecretDistribution& secrets,
                       const Modulus& mod) {
  const std::uint64_t N = mod.n;
  std::vector<double> mass(N, 0.0);
  if (secrets.kind == SecretDistribution::Kind::explicit_dist) {
    secrets.for_each(mod, [&](const std::vector<std::uint64_t>& s, double p) {
      std::uint64_t acc = 0;
      for (std::size_t t = 0; t < w.size(); ++t) acc = mod.add(acc, mod.mul(w[t], s[t]));
      mass[acc] += p;
    });
  } else {
    mass[0] = 1.0;
    std::vector<double> next(N);
    const std::size_t binary_up_to =
        secrets.kind == SecretDistribution::Kind::uniform_binary ? secrets.m
        : secrets.kind == SecretDistribution::Kind::mixed        ? secrets.binary_prefix
                                                                 : 0;
    for (std::size_t t = 0; t < secrets.m; ++t) {
      const std::uint64_t wt = w[t] % N;
      if (wt == 0) continue;
      if (t < binary_up_to) {
        for (std::uint64_t a = 0; a < N; ++a)
          next[a] = 0.5 * (mass[a] + mass[(a + N - wt) % N]);
      } else {
        // s_t uniform on Z_N: convolve with the law of wt * s_t.
        const double inv = 1.0 / static_cast<double>(N);
        std::fill(next.begin(), next.end(), 0.0);
        for (std::uint64_t a = 0; a < N; ++a) {
          double acc = 0.0;
          for (std::uint64_t s = 0; s < N; ++s) acc += mass[(a + N - wt * s % N) % N];
          next[a] = acc * inv;
        }
      }
      mass.swap(next);
    }
  }
  double tv = 0.0;
  const double u = 1.0 / static_cast<double>(N);
  for (double p : mass) tv += std::abs(p - u);
  return tv / 2.0;
}

}  // namespace

GoodnessReport goodness(const GroupMatrix& M, const SecretDistribution& secrets,
                        const ActionContext& ctx, double epsilon, std::uint64_t pair_budget) {
  if (secrets.m != M.cols)
    throw std::invalid_argument("goodness: secret length does not match matrix columns");
  const std::uint64_t N = M.mod.n;
  const auto hvals = hash_table(ctx);
  const auto diffs = realized_diffs(hvals, N);
  const std::size_t n = M.rows;

  GoodnessReport rep;
  rep.epsilon_target = epsilon;

  std::vector<std::size_t> odo(n, 0);
  std::vector<std::uint64_t> z(n, 0);
  while (rep.tested_pairs < pair_budget) {
    bool all_zero = true;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = diffs[odo[i]];
      if (z[i] != 0) all_zero = false;
    }
    if (!all_zero) {
      std::vector<std::uint64_t> w(M.cols, 0);
      for (std::size_t t = 0; t < M.cols; ++t) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < n; ++i) acc = M.mod.add(acc, M.mod.mul(z[i], M.at(i, t)));
        w[t] = acc;
      }
      rep.worst_tv = std::max(rep.worst_tv, tv_from_uniform(w, secrets, M.mod));
      ++rep.tested_pairs;
    }
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++odo[i] < diffs.size()) break;
      odo[i] = 0;
    }
    if (i == n) break;
  }
  rep.is_good = rep.worst_tv <= std::sqrt(epsilon);
  return rep;
}

EnsembleComparison structured_distance(const GmpInstance& inst, double epsilon) {
  EnsembleComparison cmp;
  cmp.rho_direct = ensemble_density_direct(inst, GmpSide::secret_route);
  cmp.rho_measured = ensemble_density_measured(inst, GmpSide::secret_route);
  cmp.trace_dist = trace_distance(cmp.rho_direct, cmp.rho_measured);
  cmp.frobenius = frobenius_distance(cmp.rho_direct, cmp.rho_measured);
  const double nk = static_cast<double>(inst.n()) * inst.ctx.domain_bits;
  cmp.chain_cap = std::exp2(nk / 2.0) * cmp.frobenius;
  cmp.entry_cap = 2.0 * std::sqrt(epsilon) / std::exp2(nk);
  cmp.hypothesis_satisfied = expanding_hypothesis_flag(inst) > 0.5;

  // Entrywise check over realized difference vectors z != 0: the difference
  // entry is (char(z) - onpattern(z)) / 2^{kn}.
  const std::uint64_t N = inst.M.mod.n;
  const std::size_t n = inst.n();
  const auto chars = char_table(inst, GmpSide::secret_route);
  const auto hvals = hash_table(inst.ctx);
  const auto diffs = realized_diffs(hvals, N);
  std::vector<std::uint64_t> place(n, 1);
  for (std::size_t i = 1; i < n; ++i) place[i] = place[i - 1] * N;

  std::vector<std::size_t> odo(n, 0);
  const double scale = 1.0 / std::exp2(nk);
  while (true) {
    std::uint64_t packed = 0;
    bool all_zero = true;
    std::vector<std::uint64_t> z(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = diffs[odo[i]];
      packed += z[i] * place[i];
      if (z[i] != 0) all_zero = false;
    }
    if (!all_zero) {
      // On-pattern iff z^T M = 0 (the matrix-functional labels agree).
      bool onpat = true;
      for (std::size_t t = 0; t < inst.M.cols && onpat; ++t) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < n; ++i)
          acc = inst.M.mod.add(acc, inst.M.mod.mul(z[i], inst.M.at(i, t)));
        onpat = acc == 0;
      }
      const double entry = std::abs(chars[packed] - (onpat ? Complex{1.0} : Complex{0.0})) * scale;
      cmp.max_offpattern_entry = std::max(cmp.max_offpattern_entry, entry);
    }
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++odo[i] < diffs.size()) break;
      odo[i] = 0;
    }
    if (i == n) break;
  }
  cmp.entry_cap_ok = cmp.max_offpattern_entry <= cmp.entry_cap + 1e-12;
  return cmp;
}

GoodFractionReport good_fraction(std::size_t n, std::size_t m, const SecretDistribution& secrets,
                                 const ActionContext& ctx, double epsilon,
                                 std::uint64_t matrix_trials, Rng& rng) {
  if (matrix_trials < 30) throw std::invalid_argument("good_fraction: need at least 30 trials");
  GoodFractionReport rep;
  rep.trials = matrix_trials;
  for (std::uint64_t t = 0; t < matrix_trials; ++t) {
    Rng trial = rng.substream(t);
    GroupMatrix M(ctx.modulus, n, m);
    for (auto& e : M.e) e = trial.uniform(ctx.modulus.n);
    if (goodness(M, secrets, ctx, epsilon, std::uint64_t{1} << 20).is_good) ++rep.good_count;
  }
  rep.fraction = static_cast<double>(rep.good_count) / static_cast<double>(matrix_trials);
  rep.sigma = std::sqrt(std::max(rep.fraction * (1.0 - rep.fraction), 1e-12) /
                        static_cast<double>(matrix_trials));
  return rep;
}

MhInjectivityReport mh_injectivity(const GroupMatrix& M,
                                   const std::vector<std::size_t>& class_sizes,
                                   const ActionContext& ctx) {
  if (class_sizes.size() != M.rows)
    throw std::invalid_argument("mh_injectivity: need one class per matrix row");
  std::size_t n = 0;
  for (std::size_t s : class_sizes) {
    if (s == 0) throw std::invalid_argument("mh_injectivity: empty class");
    n += s;
  }
  const std::uint32_t k = ctx.domain_bits;
  if (2 * k * n > 20)
    throw std::invalid_argument("mh_injectivity: 2^{2kn} over exhaustive cap 2^20");

  MhInjectivityReport rep;
  const std::uint64_t N = M.mod.n;
  rep.bound = std::exp2(2.0 * k * static_cast<double>(n)) / static_cast<double>(N);

  // Hypothesis: rows nonzero and pairwise distinct.
  for (std::size_t a = 0; a < M.rows && rep.hypothesis_ok; ++a) {
    bool zero = true;
    for (std::size_t t = 0; t < M.cols; ++t) zero = zero && M.at(a, t) % N == 0;
    if (zero) rep.hypothesis_ok = false;
    for (std::size_t b = a + 1; b < M.rows && rep.hypothesis_ok; ++b)
      if (M.row(a) == M.row(b)) rep.hypothesis_ok = false;
  }

  const auto hvals = hash_table(ctx);
  const std::uint64_t dim = std::uint64_t{1} << (k * n);
  const std::uint64_t mask = (std::uint64_t{1} << k) - 1;

  // Group tuples by M^T y, then by the within-class canonical form.
  std::map<std::vector<std::uint64_t>, std::map<std::vector<std::uint64_t>, std::uint64_t>> groups;
  for (std::uint64_t packed = 0; packed < dim; ++packed) {
    std::vector<std::uint64_t> tuple(n);
    for (std::size_t i = 0; i < n; ++i) tuple[i] = packed >> (k * i) & mask;

    std::vector<std::uint64_t> y(M.rows, 0);
    std::vector<std::uint64_t> canon = tuple;
    std::size_t pos = 0;
    for (std::size_t a = 0; a < M.rows; ++a) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < class_sizes[a]; ++i) acc = (acc + hvals[tuple[pos + i]]) % N;
      y[a] = acc;
      std::sort(canon.begin() + pos, canon.begin() + pos + class_sizes[a]);
      pos += class_sizes[a];
    }
    std::vector<std::uint64_t> key(M.cols, 0);
    for (std::size_t t = 0; t < M.cols; ++t) {
      std::uint64_t acc = 0;
      for (std::size_t a = 0; a < M.rows; ++a)
        acc = M.mod.add(acc, M.mod.mul(y[a], M.at(a, t)));
      key[t] = acc;
    }
    ++groups[key][canon];
  }

  for (const auto& [_, by_canon] : groups) {
    std::uint64_t total = 0;
    std::uint64_t same = 0;
    for (const auto& [__, c] : by_canon) {
      total += c;
      same += c * c;
    }
    rep.collision_count += total * total - same;
  }
  rep.collision_fraction =
      static_cast<double>(rep.collision_count) / std::exp2(2.0 * k * static_cast<double>(n));
  rep.any_collision = rep.collision_count > 0;
  return rep;
}

GmpInstance preset_ddh(const ActionContext& ctx) {
  GroupMatrix M(ctx.modulus, 3, 2);
  M.at(0, 0) = 1;
  M.at(1, 1) = 1;
  M.at(2, 0) = 1;
  M.at(2, 1) = 1;
  GmpInstance inst{M, SecretDistribution::uniform_zn(2), ctx};
  inst.validate();
  return inst;
}

GmpInstance preset_lhs(std::size_t m, std::size_t samples, const ActionContext& ctx, Rng& rng) {
  GroupMatrix M(ctx.modulus, samples, m);
  for (auto& e : M.e) e = rng.uniform(ctx.modulus.n);
  GmpInstance inst{M, SecretDistribution::uniform_binary(m), ctx};
  inst.validate();
  return inst;
}

GmpInstance preset_extended_lhs(std::size_t m, const ActionContext& ctx, Rng& rng) {
  const Modulus& mod = ctx.modulus;
  GroupMatrix inner(mod, m, m);
  for (auto& e : inner.e) e = rng.uniform(mod.n);
  std::vector<std::uint64_t> mvec(m);
  for (auto& e : mvec) e = rng.uniform(mod.n);

  // Block rows: [0 I 0], [0 0 I], [inner I 0], [inner + Diag(mvec) 0 I].
  GroupMatrix M(mod, 4 * m, 3 * m);
  for (std::size_t i = 0; i < m; ++i) {
    M.at(i, m + i) = 1;
    M.at(m + i, 2 * m + i) = 1;
    for (std::size_t t = 0; t < m; ++t) {
      M.at(2 * m + i, t) = inner.at(i, t);
      M.at(3 * m + i, t) = i == t ? mod.add(inner.at(i, t), mvec[i]) : inner.at(i, t);
    }
    M.at(2 * m + i, m + i) = 1;
    M.at(3 * m + i, 2 * m + i) = 1;
  }
  GmpInstance inst{M, SecretDistribution::mixed(m, 2 * m), ctx};
  inst.validate();
  return inst;
}

}  // namespace qsga
