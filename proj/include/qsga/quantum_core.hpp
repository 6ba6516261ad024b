#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qsga/finite_math.hpp"
#include "qsga/rng.hpp"

namespace qsga {

using Complex = std::complex<double>;

constexpr double kAmplitudePrune = 1e-14;
constexpr double kNormTolerance = 1e-9;
constexpr double kHermitianTolerance = 1e-12;
constexpr std::size_t kDenseCap = 4096;

// One register of a basis-label layout: a k-bit string or a Z_N symbol.
struct RegisterSpec {
  enum class Kind { bits, zn };
  Kind kind = Kind::bits;
  std::uint32_t width_bits = 0;  // bits registers
  std::uint64_t modulus = 0;     // zn registers

  std::uint64_t cardinality() const {
    return kind == Kind::bits ? (std::uint64_t{1} << width_bits) : modulus;
  }
  friend bool operator==(const RegisterSpec&, const RegisterSpec&) = default;
};

using Layout = std::vector<RegisterSpec>;
// One value per register; lexicographic vector order is the canonical label
// order.
using BasisLabel = std::vector<std::uint64_t>;

std::uint64_t layout_dimension(const Layout& layout);
void check_label(const Layout& layout, const BasisLabel& label);

struct PureState {
  Layout layout;
  std::map<BasisLabel, Complex> amps;

  double norm() const;
  // Drops amplitudes below the prune threshold and checks normalization.
  void finalize();
  std::vector<std::string> dump() const;
};

struct DensityMatrix {
  Layout layout;
  std::map<std::pair<BasisLabel, BasisLabel>, Complex> entries;

  Complex trace() const;
  void check_hermitian() const;
  std::vector<std::string> dump() const;
};

struct MeasurementRecord {
  BasisLabel outcome;
  double probability = 0.0;
  PureState collapsed;
};

PureState tensor(const PureState& a, const PureState& b);
Complex inner_product(const PureState& a, const PureState& b);

// Rank-1 projector |s><s|.
DensityMatrix pure_density(const PureState& s);

// (1/2) sum |eigenvalues(rho - sigma)| via dense Hermitian eigendecomposition;
// dimension capped at kDenseCap.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Entrywise Frobenius norm of rho - sigma.
double frobenius_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Projective measurement of the label function f: groups support by f-value.
// Outcomes sorted by value; probabilities below 1e-14 dropped.
std::vector<MeasurementRecord> measure_label_function(
    const PureState& s, const std::function<BasisLabel(const BasisLabel&)>& f);

// Draws one outcome index from the records' probability vector.
std::size_t sample_outcome(const std::vector<MeasurementRecord>& records, Rng& rng);

DensityMatrix mix(const std::vector<std::pair<double, PureState>>& ensemble);
DensityMatrix mix_density(const std::vector<std::pair<double, DensityMatrix>>& ensemble);

// QFT over a single Z_N register: amp'(h) = (1/sqrt N) sum_g w_N^{gh} amp(g).
PureState qft_zn(const PureState& s);

double swap_test_pass_probability(const PureState& a, const PureState& b);
bool swap_test_sample(const PureState& a, const PureState& b, Rng& rng);

// e^{2 pi i e / n}
Complex unit_root(std::uint64_t n, std::uint64_t e);

}  // namespace qsga
