#include "qsga/quantum_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qsga {

namespace {

void check_same_layout(const Layout& a, const Layout& b, const char* op) {
  if (a != b) throw std::invalid_argument(std::string(op) + ": layout mismatch");
}

std::string label_text(const BasisLabel& l) {
  std::ostringstream os;
  for (std::size_t i = 0; i < l.size(); ++i) os << (i ? "." : "") << l[i];
  return os.str();
}

}  // namespace

std::uint64_t layout_dimension(const Layout& layout) {
  std::uint64_t d = 1;
  for (const auto& r : layout) {
    if (r.cardinality() == 0) throw std::invalid_argument("layout: empty register");
    d *= r.cardinality();
  }
  return d;
}

void check_label(const Layout& layout, const BasisLabel& label) {
  if (label.size() != layout.size())
    throw std::invalid_argument("label: register count mismatch");
  for (std::size_t i = 0; i < label.size(); ++i)
    if (label[i] >= layout[i].cardinality())
      throw std::invalid_argument("label: register value out of range");
}

double PureState::norm() const {
  double s = 0.0;
  for (const auto& [_, a] : amps) s += std::norm(a);
  return std::sqrt(s);
}

void PureState::finalize() {
  for (auto it = amps.begin(); it != amps.end();)
    it = std::abs(it->second) < kAmplitudePrune ? amps.erase(it) : std::next(it);
  if (std::abs(norm() - 1.0) > kNormTolerance)
    throw std::invalid_argument("PureState: not normalized");
  for (const auto& [l, _] : amps) check_label(layout, l);
}

std::vector<std::string> PureState::dump() const {
  std::vector<std::string> lines;
  for (const auto& [l, a] : amps) {
    std::ostringstream os;
    os << label_text(l) << " : " << a.real() << " , " << a.imag();
    lines.push_back(os.str());
  }
  return lines;
}

Complex DensityMatrix::trace() const {
  Complex t = 0.0;
  for (const auto& [k, v] : entries)
    if (k.first == k.second) t += v;
  return t;
}

void DensityMatrix::check_hermitian() const {
  for (const auto& [k, v] : entries) {
    auto it = entries.find({k.second, k.first});
    const Complex other = it == entries.end() ? Complex{0.0} : it->second;
    if (std::abs(v - std::conj(other)) > kHermitianTolerance)
      throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
  }
  if (std::abs(trace() - Complex{1.0}) > kNormTolerance)
    throw std::invalid_argument("DensityMatrix: trace is not 1 within tolerance");
}

std::vector<std::string> DensityMatrix::dump() const {
  std::vector<std::string> lines;
  for (const auto& [k, v] : entries) {
    std::ostringstream os;
    os << "(" << label_text(k.first) << " | " << label_text(k.second) << ") : " << v.real()
       << " , " << v.imag();
    lines.push_back(os.str());
  }
  return lines;
}

PureState tensor(const PureState& a, const PureState& b) {
  PureState out;
  out.layout = a.layout;
  out.layout.insert(out.layout.end(), b.layout.begin(), b.layout.end());
  for (const auto& [la, va] : a.amps)
    for (const auto& [lb, vb] : b.amps) {
      BasisLabel l = la;
      l.insert(l.end(), lb.begin(), lb.end());
      out.amps.emplace(std::move(l), va * vb);
    }
  return out;
}

Complex inner_product(const PureState& a, const PureState& b) {
  check_same_layout(a.layout, b.layout, "inner_product");
  Complex acc = 0.0;
  const auto& small = a.amps.size() <= b.amps.size() ? a.amps : b.amps;
  const bool small_is_a = a.amps.size() <= b.amps.size();
  const auto& big = small_is_a ? b.amps : a.amps;
  for (const auto& [l, v] : small) {
    auto it = big.find(l);
    if (it == big.end()) continue;
    acc += small_is_a ? std::conj(v) * it->second : std::conj(it->second) * v;
  }
  return acc;
}

DensityMatrix pure_density(const PureState& s) {
  DensityMatrix rho;
  rho.layout = s.layout;
  for (const auto& [la, va] : s.amps)
    for (const auto& [lb, vb] : s.amps) rho.entries[{la, lb}] = va * std::conj(vb);
  return rho;
}

namespace {

// Sorted union of row/column labels appearing in either operand.
std::vector<BasisLabel> support_labels(const DensityMatrix& a, const DensityMatrix& b) {
  std::map<BasisLabel, std::size_t> index;
  for (const auto* m : {&a, &b})
    for (const auto& [k, _] : m->entries) {
      index.emplace(k.first, 0);
      index.emplace(k.second, 0);
    }
  std::vector<BasisLabel> labels;
  labels.reserve(index.size());
  for (const auto& [l, _] : index) labels.push_back(l);
  return labels;
}

}  // namespace

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_layout(rho.layout, sigma.layout, "trace_distance");
  const auto labels = support_labels(rho, sigma);
  if (labels.size() > kDenseCap)
    throw std::invalid_argument(
        "trace_distance: support dimension exceeds dense cap; shrink k*n");

  // Entrywise L1/2 upper-bounds the trace distance; when the difference is
  // numerically zero this skips the eigensolve and returns that exact bound.
  double l1 = 0.0;
  {
    std::map<std::pair<BasisLabel, BasisLabel>, Complex> diff = rho.entries;
    for (const auto& [k, v] : sigma.entries) diff[k] -= v;
    for (const auto& [_, v] : diff) l1 += std::abs(v);
    if (l1 / 2.0 <= 1e-12) return l1 / 2.0;
  }

  std::map<BasisLabel, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXcd delta = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [k, v] : rho.entries)
    delta(static_cast<Eigen::Index>(index.at(k.first)),
          static_cast<Eigen::Index>(index.at(k.second))) += v;
  for (const auto& [k, v] : sigma.entries)
    delta(static_cast<Eigen::Index>(index.at(k.first)),
          static_cast<Eigen::Index>(index.at(k.second))) -= v;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(delta, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("trace_distance: eigensolver failed");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (std::abs(lambda) >= 1e-12) sum += std::abs(lambda);
  }
  return sum / 2.0;
}

double frobenius_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_layout(rho.layout, sigma.layout, "frobenius_distance");
  std::map<std::pair<BasisLabel, BasisLabel>, Complex> diff = rho.entries;
  for (const auto& [k, v] : sigma.entries) diff[k] -= v;
  double s = 0.0;
  for (const auto& [_, v] : diff) s += std::norm(v);
  return std::sqrt(s);
}

std::vector<MeasurementRecord> measure_label_function(
    const PureState& s, const std::function<BasisLabel(const BasisLabel&)>& f) {
  std::map<BasisLabel, std::map<BasisLabel, Complex>> groups;
  for (const auto& [l, a] : s.amps) groups[f(l)].emplace(l, a);

  std::vector<MeasurementRecord> out;
  for (auto& [outcome, part] : groups) {
    double p = 0.0;
    for (const auto& [_, a] : part) p += std::norm(a);
    if (p <= 1e-14) continue;
    MeasurementRecord rec;
    rec.outcome = outcome;
    rec.probability = p;
    rec.collapsed.layout = s.layout;
    const double scale = 1.0 / std::sqrt(p);
    for (auto& [l, a] : part) rec.collapsed.amps.emplace(l, a * scale);
    out.push_back(std::move(rec));
  }
  return out;
}

std::size_t sample_outcome(const std::vector<MeasurementRecord>& records, Rng& rng) {
  if (records.empty()) throw std::invalid_argument("sample_outcome: empty record list");
  const double u = rng.uniform_real();
  double acc = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    acc += records[i].probability;
    if (u < acc) return i;
  }
  return records.size() - 1;
}

DensityMatrix mix(const std::vector<std::pair<double, PureState>>& ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("mix: empty ensemble");
  double total = 0.0;
  for (const auto& [p, _] : ensemble) total += p;
  if (std::abs(total - 1.0) > kNormTolerance)
    throw std::invalid_argument("mix: probabilities do not sum to 1");
  DensityMatrix rho;
  rho.layout = ensemble.front().second.layout;
  for (const auto& [p, s] : ensemble) {
    check_same_layout(rho.layout, s.layout, "mix");
    for (const auto& [la, va] : s.amps)
      for (const auto& [lb, vb] : s.amps) rho.entries[{la, lb}] += p * va * std::conj(vb);
  }
  return rho;
}

DensityMatrix mix_density(const std::vector<std::pair<double, DensityMatrix>>& ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("mix_density: empty ensemble");
  double total = 0.0;
  for (const auto& [p, _] : ensemble) total += p;
  if (std::abs(total - 1.0) > kNormTolerance)
    throw std::invalid_argument("mix_density: probabilities do not sum to 1");
  DensityMatrix rho;
  rho.layout = ensemble.front().second.layout;
  for (const auto& [p, m] : ensemble) {
    check_same_layout(rho.layout, m.layout, "mix_density");
    for (const auto& [k, v] : m.entries) rho.entries[k] += p * v;
  }
  return rho;
}

PureState qft_zn(const PureState& s) {
  if (s.layout.size() != 1 || s.layout[0].kind != RegisterSpec::Kind::zn)
    throw std::invalid_argument("qft_zn: state must have a single Z_N register");
  const std::uint64_t n = s.layout[0].modulus;
  PureState out;
  out.layout = s.layout;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::uint64_t h = 0; h < n; ++h) {
    Complex acc = 0.0;
    for (const auto& [l, a] : s.amps) acc += unit_root(n, l[0] * h % n) * a;
    acc *= scale;
    if (std::abs(acc) >= kAmplitudePrune) out.amps[{h}] = acc;
  }
  return out;
}

double swap_test_pass_probability(const PureState& a, const PureState& b) {
  const double overlap = std::abs(inner_product(a, b));
  return (1.0 + overlap * overlap) / 2.0;
}

bool swap_test_sample(const PureState& a, const PureState& b, Rng& rng) {
  return rng.bernoulli(swap_test_pass_probability(a, b));
}

Complex unit_root(std::uint64_t n, std::uint64_t e) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e % n) /
                             static_cast<double>(n));
}

}  // namespace qsga
