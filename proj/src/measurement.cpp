#include "qfair/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qfair::measurement {

namespace {

OutcomeDistribution finish(std::vector<double> raw, const Povm& povm, double tol) {
  double sum = 0.0;
  for (double& p : raw) {
    if (p < -tol || p > 1.0 + tol)
      throw NumericalInvariantViolation("Born probability " + std::to_string(p) +
                                        " outside [0, 1]");
    p = std::clamp(p, 0.0, 1.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol)
    throw NumericalInvariantViolation("Born probabilities sum to " + std::to_string(sum));
  return {povm.labels(), std::move(raw)};
}

std::string bit_label(std::size_t index, int num_qubits) {
  std::string bits(static_cast<std::size_t>(num_qubits), '0');
  for (int q = 1; q <= num_qubits; ++q)
    if (index & qubit_mask(q, num_qubits)) bits[static_cast<std::size_t>(q - 1)] = '1';
  return bits;
}

}  // namespace

double OutcomeDistribution::at(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return probabilities[i];
  throw InvalidArgument("unknown outcome label '" + std::string(label) + "'");
}

OutcomeDistribution born_probabilities(const DensityMatrix& rho, const Povm& povm, double tol) {
  if (rho.dim() != povm.dim()) throw DimensionMismatch("born_probabilities: POVM dimension");
  std::vector<double> raw;
  raw.reserve(povm.size());
  for (const auto& e : povm.effects())
    raw.push_back(kernels::trace_product_real(e.matrix().data(), rho.matrix().data(), rho.dim()));
  return finish(std::move(raw), povm, tol);
}

OutcomeDistribution born_probabilities(const StateVector& psi, const Povm& povm, double tol) {
  if (psi.dim() != povm.dim()) throw DimensionMismatch("born_probabilities: POVM dimension");
  std::vector<double> raw;
  raw.reserve(povm.size());
  for (const auto& e : povm.effects()) {
    const std::vector<Complex> ev = e.matrix() * psi.amplitudes();
    raw.push_back(kernels::inner(psi.amplitudes(), ev).real());
  }
  return finish(std::move(raw), povm, tol);
}

PostMeasurement post_measurement_state(const StateVector& psi, const MatrixOperator& m) {
  if (psi.dim() != m.dim()) throw DimensionMismatch("post_measurement_state: dimension");
  std::vector<Complex> out = m.matrix() * psi.amplitudes();
  const double p = kernels::norm_squared(out);
  if (p <= 1e-12)
    throw ZeroProbabilityOutcome("measurement outcome has probability " + std::to_string(p));
  const double scale = 1.0 / std::sqrt(p);
  for (Complex& v : out) v *= scale;
  return {StateVector::from_amplitudes(std::move(out)), p};
}

std::vector<double> Histogram::frequencies() const {
  std::vector<double> f;
  f.reserve(counts.size());
  for (const auto c : counts)
    f.push_back(static_cast<double>(c) / static_cast<double>(shots));
  return f;
}

Histogram sample(const OutcomeDistribution& dist, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("sample: shots must be >= 1");
  if (dist.probabilities.empty()) throw InvalidArgument("sample: empty distribution");
  std::vector<double> cdf(dist.probabilities.size());
  double running = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    running += dist.probabilities[i];
    cdf[i] = running;
    if (dist.probabilities[i] > 0.0) last_nonzero = i;
  }
  if (!(running > 0.0)) throw InvalidArgument("sample: distribution has no mass");

  Histogram h;
  h.labels = dist.labels;
  h.counts.assign(cdf.size(), 0);
  h.shots = shots;
  h.seed = seed;

  std::mt19937_64 engine(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const double target = u * running;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    std::size_t k = it == cdf.end() ? last_nonzero : static_cast<std::size_t>(it - cdf.begin());
    ++h.counts[k];
  }
  return h;
}

Histogram sample(const StateVector& psi, const Povm& povm, std::uint64_t shots,
                 std::uint64_t seed) {
  return sample(born_probabilities(psi, povm), shots, seed);
}

Histogram sample(const DensityMatrix& rho, const Povm& povm, std::uint64_t shots,
                 std::uint64_t seed) {
  return sample(born_probabilities(rho, povm), shots, seed);
}

Histogram sample_basis(const StateVector& psi, std::uint64_t shots, std::uint64_t seed) {
  OutcomeDistribution dist;
  dist.labels.reserve(psi.dim());
  dist.probabilities.reserve(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    dist.labels.push_back(bit_label(i, psi.num_qubits()));
    dist.probabilities.push_back(psi.probability(i));
  }
  return sample(dist, shots, seed);
}

bool entangled_state_check(const StateVector& psi) {
  if (psi.num_qubits() != 2)
    throw InvalidArgument("entangled_state_check supports two-qubit states only");
  // Amplitude matrix [[c00, c01], [c10, c11]] has singular values with
  // s1^2 + s2^2 = 1 and s1 * s2 = |det|.
  const double det = std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
  const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * det * det));
  const double smin_sq = 2.0 * det * det / (1.0 + disc);
  return std::sqrt(smin_sq) > 1e-10;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionMismatch("total_variation: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

}  // namespace qfair::measurement
