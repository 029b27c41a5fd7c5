#pragma once

// Classical data -> quantum states.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qfair/linalg.hpp"

namespace qfair::encoding {

// Binary feature vector (x1, ..., xm); x1 maps to qubit 1.
struct FeatureRecord {
  std::vector<std::uint8_t> bits;
  std::optional<std::size_t> index;

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

// Basis index of a record; throws on non-binary entries or >20 bits.
std::uint64_t record_index(const FeatureRecord& record);

// Nonnegative utility weight per basis index. Adding to an existing index
// accumulates.
class ScoreTable {
 public:
  ScoreTable() = default;
  ScoreTable(std::initializer_list<std::pair<const std::uint64_t, double>> init);

  void add(std::uint64_t index, double score);
  const std::map<std::uint64_t, double>& entries() const { return scores_; }
  double total() const;
  bool empty() const { return scores_.empty(); }

 private:
  std::map<std::uint64_t, double> scores_;
};

StateVector basis_encode(const FeatureRecord& record);

// Record at the largest-magnitude amplitude (first one on ties).
FeatureRecord decode_basis(const StateVector& psi);

StateVector uniform_superposition(int num_qubits);

struct AmplitudeEncoding {
  StateVector state;
  double norm;  // the input was divided by this
};

// Rejects zero vectors and lengths that are not a power of two.
AmplitudeEncoding amplitude_encode(std::span<const Complex> x);

// Amplitudes sqrt(score_i / total); indices absent from the table get 0.
StateVector prepare_scored_state(const ScoreTable& scores, int num_qubits);

}  // namespace qfair::encoding
