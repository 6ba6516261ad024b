#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace qsga {

// Pearson chi-square goodness-of-fit against the uniform distribution over
// `counts.size()` cells.  Returns the upper-tail p-value.
inline double chi_square_uniform_pvalue(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 2) throw std::invalid_argument("chi_square: need at least two cells");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("chi_square: empty sample");
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  const double dof = static_cast<double>(counts.size() - 1);
  return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

// Normal-approximation standard error of an empirical frequency.
inline double frequency_sigma(double p, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("frequency_sigma: no trials");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace qsga
