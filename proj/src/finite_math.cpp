#include "qsga/finite_math.hpp"

#include <algorithm>
#include <numeric>

namespace qsga {

std::vector<std::uint64_t> matvec(const GroupMatrix& m, const std::vector<std::uint64_t>& s) {
  if (s.size() != m.cols) throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<std::uint64_t> out(m.rows, 0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < m.cols; ++j)
      acc = m.mod.add(acc, m.mod.mul(m.at(i, j), s[j]));
    out[i] = acc;
  }
  return out;
}

EqualityPattern equality_pattern(const GroupMatrix& m) {
  EqualityPattern pat;
  pat.n = m.rows;
  std::vector<std::vector<std::uint64_t>> reps;
  for (std::size_t i = 0; i < m.rows; ++i) {
    auto r = m.row(i);
    for (auto& v : r) v %= m.mod.n;
    std::size_t a = 0;
    for (; a < reps.size(); ++a)
      if (reps[a] == r) break;
    if (a == reps.size()) {
      reps.push_back(r);
      pat.classes.emplace_back();
    }
    pat.classes[a].push_back(i);
  }
  return pat;
}

std::vector<std::uint64_t> sample_eqpat(const EqualityPattern& pat, const Modulus& mod, Rng& rng) {
  const std::size_t j = pat.class_count();
  if (j > mod.n)
    throw std::invalid_argument("sample_eqpat: more classes than group elements");
  // Draw j distinct values by swap-and-pop from the full value list.
  std::vector<std::uint64_t> pool(mod.n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::uint64_t> out(pat.n, 0);
  for (std::size_t a = 0; a < j; ++a) {
    const std::size_t pick = static_cast<std::size_t>(rng.uniform(pool.size()));
    const std::uint64_t value = pool[pick];
    pool[pick] = pool.back();
    pool.pop_back();
    for (std::size_t i : pat.classes[a]) out[i] = value;
  }
  return out;
}

double lhl_epsilon(double q_bits, const Modulus& mod) {
  return std::sqrt(static_cast<double>(mod.n)) * std::exp2(-q_bits / 2.0);
}

}  // namespace qsga
