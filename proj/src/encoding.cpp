#include "qfair/encoding.hpp"

#include <cmath>
#include <string>

namespace qfair::encoding {

std::uint64_t record_index(const FeatureRecord& record) {
  const auto n = static_cast<int>(record.bits.size());
  if (n < 1 || n > kMaxStateQubits)
    throw InvalidArgument("record length " + std::to_string(n) + " out of range [1, " +
                          std::to_string(kMaxStateQubits) + "]");
  std::uint64_t index = 0;
  for (int k = 0; k < n; ++k) {
    const std::uint8_t b = record.bits[static_cast<std::size_t>(k)];
    if (b > 1)
      throw InvalidArgument("record entry x" + std::to_string(k + 1) + " is not binary");
    if (b) index |= qubit_mask(k + 1, n);
  }
  return index;
}

ScoreTable::ScoreTable(std::initializer_list<std::pair<const std::uint64_t, double>> init) {
  for (const auto& [index, score] : init) add(index, score);
}

void ScoreTable::add(std::uint64_t index, double score) {
  if (!std::isfinite(score) || score < 0.0)
    throw InvalidArgument("score for index " + std::to_string(index) +
                          " must be finite and nonnegative");
  scores_[index] += score;
}

double ScoreTable::total() const {
  double t = 0.0;
  for (const auto& [index, score] : scores_) t += score;
  return t;
}

StateVector basis_encode(const FeatureRecord& record) {
  return StateVector::basis(static_cast<int>(record.bits.size()), record_index(record));
}

FeatureRecord decode_basis(const StateVector& psi) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < psi.dim(); ++i)
    if (std::abs(psi[i]) > std::abs(psi[best])) best = i;
  const int n = psi.num_qubits();
  FeatureRecord record;
  record.bits.resize(static_cast<std::size_t>(n));
  for (int q = 1; q <= n; ++q)
    record.bits[static_cast<std::size_t>(q - 1)] = (best & qubit_mask(q, n)) ? 1 : 0;
  return record;
}

StateVector uniform_superposition(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxStateQubits)
    throw InvalidArgument("qubit count " + std::to_string(num_qubits) + " out of range");
  const std::size_t dim = std::size_t{1} << num_qubits;
  const double amp = std::pow(2.0, -0.5 * num_qubits);
  return StateVector::from_amplitudes(std::vector<Complex>(dim, Complex{amp, 0.0}));
}

AmplitudeEncoding amplitude_encode(std::span<const Complex> x) {
  qubits_for_dim(x.size());
  // Scale by the largest magnitude first so tiny or huge inputs keep precision.
  double peak = 0.0;
  for (const Complex& v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw InvalidArgument("amplitude_encode: zero vector");
  std::vector<Complex> scaled(x.begin(), x.end());
  for (Complex& v : scaled) v /= peak;
  const double scaled_norm = std::sqrt(kernels::norm_squared(scaled));
  for (Complex& v : scaled) v /= scaled_norm;
  return {StateVector::from_amplitudes(std::move(scaled), 1e-12), peak * scaled_norm};
}

StateVector prepare_scored_state(const ScoreTable& scores, int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxStateQubits)
    throw InvalidArgument("qubit count " + std::to_string(num_qubits) + " out of range");
  const std::size_t dim = std::size_t{1} << num_qubits;
  const double total = scores.total();
  if (!(total > 0.0)) throw InvalidArgument("score table has no positive score");
  std::vector<Complex> amps(dim, Complex{0.0, 0.0});
  for (const auto& [index, score] : scores.entries()) {
    if (index >= dim)
      throw InvalidArgument("score index " + std::to_string(index) + " exceeds 2^" +
                            std::to_string(num_qubits));
    amps[index] = std::sqrt(score / total);
  }
  return StateVector::from_amplitudes(std::move(amps));
}

}  // namespace qfair::encoding
