#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "qsga/rng.hpp"

namespace qsga {

// Modulus of the cyclic symbol group Z_N.
struct Modulus {
  std::uint64_t n = 0;

  explicit Modulus(std::uint64_t value) : n(value) {
    if (n < 2) throw std::invalid_argument("Modulus: need n >= 2");
  }

  bool is_prime() const {
    if (n < 4) return n >= 2;
    if (n % 2 == 0) return false;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
      if (n % d == 0) return false;
    return true;
  }

  std::uint64_t reduce(std::uint64_t v) const { return v % n; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a % n + b % n) % n; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a % n + n - b % n) % n; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a % n) * (b % n) % n; }
  std::uint64_t neg(std::uint64_t a) const { return (n - a % n) % n; }
};

// Dense rows x cols matrix over Z_N, row-major.
struct GroupMatrix {
  Modulus mod;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> e;

  GroupMatrix(Modulus m, std::size_t r, std::size_t c)
      : mod(m), rows(r), cols(c), e(r * c, 0) {
    if (r == 0 || c == 0) throw std::invalid_argument("GroupMatrix: empty shape");
  }

  std::uint64_t& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
  std::uint64_t at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }

  std::vector<std::uint64_t> row(std::size_t i) const {
    return std::vector<std::uint64_t>(e.begin() + i * cols, e.begin() + (i + 1) * cols);
  }
};

// Partition of row indices into maximal classes of equal rows, ordered by
// first occurrence.  classes[a] lists the row indices of class a.
struct EqualityPattern {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> classes;

  std::size_t class_count() const { return classes.size(); }

  // class_of[i] = index of the class containing row i.
  std::vector<std::size_t> class_of() const {
    std::vector<std::size_t> out(n, 0);
    for (std::size_t a = 0; a < classes.size(); ++a)
      for (std::size_t i : classes[a]) out[i] = a;
    return out;
  }
};

// Finitely supported probability distribution over outcomes of type T.
template <typename T>
struct FiniteDistribution {
  std::map<T, double> p;

  void validate() const {
    double sum = 0.0;
    for (const auto& [_, w] : p) {
      if (w < -1e-15) throw std::invalid_argument("FiniteDistribution: negative mass");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("FiniteDistribution: mass does not sum to 1");
  }
};

// M (rows x cols) times column vector s over Z_N.
std::vector<std::uint64_t> matvec(const GroupMatrix& m, const std::vector<std::uint64_t>& s);

// Row equality pattern of M.
EqualityPattern equality_pattern(const GroupMatrix& m);

// Uniform draw of a vector v in Z_N^n whose coordinate-equality pattern is
// exactly the given one: one value per class, values pairwise distinct.
// Requires class_count <= N.
std::vector<std::uint64_t> sample_eqpat(const EqualityPattern& pat, const Modulus& mod, Rng& rng);

// Min-entropy in bits: -log2(max outcome mass).
template <typename T>
double min_entropy(const FiniteDistribution<T>& d) {
  d.validate();
  double maxp = 0.0;
  for (const auto& [_, w] : d.p) maxp = std::max(maxp, w);
  if (maxp <= 0.0) throw std::invalid_argument("min_entropy: empty distribution");
  return -std::log2(maxp);
}

// Total-variation distance (1/2 L1 over the union of supports).
template <typename T>
double statistical_distance(const FiniteDistribution<T>& a, const FiniteDistribution<T>& b) {
  a.validate();
  b.validate();
  double l1 = 0.0;
  auto ia = a.p.begin();
  auto ib = b.p.begin();
  while (ia != a.p.end() || ib != b.p.end()) {
    if (ib == b.p.end() || (ia != a.p.end() && ia->first < ib->first)) {
      l1 += std::abs(ia->second);
      ++ia;
    } else if (ia == a.p.end() || ib->first < ia->first) {
      l1 += std::abs(ib->second);
      ++ib;
    } else {
      l1 += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return l1 / 2.0;
}

// Leftover-hash-lemma closeness bound sqrt(N) / 2^(q/2) for a source of
// min-entropy q hashed onto Z_N.
double lhl_epsilon(double q_bits, const Modulus& mod);

}  // namespace qsga
