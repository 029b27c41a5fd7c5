#pragma once

// Group fairness over measurement distributions and quantum Lipschitz
// (individual) fairness checks.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfair/linalg.hpp"
#include "qfair/measurement.hpp"
#include "qfair/metrics.hpp"

namespace qfair::fairness {

struct Clause {
  int qubit;  // 1-based, qubit 1 = most significant bit
  int value;  // 0 or 1

  friend bool operator==(const Clause&, const Clause&) = default;
};

// Direct-sum split of the n-qubit Hilbert space by protected qubits.
//
// A `match` spec has two subspaces: basis states satisfying every clause,
// and the rest. A `cells` spec has one subspace per assignment of its qubits
// (2^k of them), ordered with the first listed qubit as the high bit.
class PartitionSpec {
 public:
  enum class Kind { match, cells };

  static PartitionSpec match(std::vector<Clause> clauses);
  static PartitionSpec cells(std::vector<int> qubits);

  Kind kind() const { return kind_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t arity() const;

  // Throws InvalidArgument when a qubit is repeated, out of [1, n], or a
  // value is not binary.
  void validate(int num_qubits) const;

  std::vector<std::string> labels() const;

  // Basis predicate `(index & mask) == value` of subspace `cell`; for a
  // match spec only cell 0 has one.
  std::uint64_t mask(int num_qubits) const;
  std::uint64_t value(std::size_t cell, int num_qubits) const;

  // Probability mass per subspace straight from the amplitudes.
  std::vector<double> masses(const StateVector& psi) const;

  // Dense diagonal projectors, one per subspace.
  std::vector<MatrixOperator> projectors(int num_qubits) const;
  Povm povm(int num_qubits) const;

  friend bool operator==(const PartitionSpec&, const PartitionSpec&) = default;

 private:
  Kind kind_ = Kind::match;
  std::vector<Clause> clauses_;
};

struct ParityReport {
  std::vector<std::string> labels;
  std::vector<double> probabilities;
  double gap = 0.0;  // max - min over the listed probabilities
  double epsilon = 0.0;
  bool satisfied = false;  // gap <= epsilon
};

// Validates that probabilities sum to 1 within 1e-10.
ParityReport make_parity_report(std::vector<std::string> labels,
                                std::vector<double> probabilities, double epsilon);

ParityReport statistical_parity_probs(const StateVector& psi, const PartitionSpec& spec,
                                      double epsilon);

struct FairnessGap {
  double gap;
  measurement::OutcomeDistribution probabilities;
};

// Largest |tr(rho E_m) - tr(rho E_n)| over outcome pairs.
FairnessGap quantum_fairness_gap(const DensityMatrix& rho, const Povm& povm);
FairnessGap quantum_fairness_gap(const StateVector& psi, const Povm& povm);

struct DisparateImpact {
  double ratio;            // min / max, or +inf when max is 0
  std::string diagnostic;  // non-empty only for the sentinel
  bool meets(double threshold) const { return ratio >= threshold; }
};

DisparateImpact disparate_impact_ratio(double group_a, double group_b);
// Needs a two-subspace report.
DisparateImpact disparate_impact_ratio(const ParityReport& report);

// ----------------------------------------------------------- Lipschitz

enum class LipschitzVariant { metric, entropy, povm };
std::string_view to_string(LipschitzVariant v);

// How the algorithm acts on an input state: A rho A^dag (unitary_conjugation)
// or A^dag rho A (adjoint_conjugation).
enum class EvolutionConvention { unitary_conjugation, adjoint_conjugation };
std::string_view to_string(EvolutionConvention c);

DensityMatrix evolve(const MatrixOperator& algorithm, const DensityMatrix& rho,
                     EvolutionConvention convention);

struct LipschitzPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double input_distance = 0.0;
  double output_distance = 0.0;
  std::optional<double> ratio;  // output / input, when input > 1e-12
  bool coincident = false;      // input <= 1e-12: needs output <= slack
  bool support_excluded = false;
  bool satisfied = false;
};

struct LipschitzReport {
  std::vector<LipschitzPair> pairs;
  double k = 1.0;
  LipschitzVariant variant = LipschitzVariant::metric;
  std::optional<metrics::MetricChoice> metric;
  EvolutionConvention convention = EvolutionConvention::unitary_conjugation;
  double slack = 1e-9;
  bool satisfied = false;
};

inline constexpr double kCoincidentDistance = 1e-12;

// D(out_i, out_j) <= K D(in_i, in_j) for every unordered pair.
LipschitzReport lipschitz_check_metric(
    std::span<const DensityMatrix> inputs, const MatrixOperator& algorithm, double k,
    metrics::MetricChoice metric,
    EvolutionConvention convention = EvolutionConvention::unitary_conjugation,
    double slack = 1e-9);

// |S(in_i || in_j)| <= K |S(out_i || out_j)| for every ordered pair i != j.
LipschitzReport lipschitz_check_entropy(
    std::span<const DensityMatrix> inputs, const MatrixOperator& algorithm, double k,
    EvolutionConvention convention = EvolutionConvention::unitary_conjugation,
    double slack = 1e-9);

// TV(output-POVM distributions of outputs) <= K TV(input-POVM distributions
// of inputs) for every unordered pair.
LipschitzReport lipschitz_check_povm(
    std::span<const DensityMatrix> inputs, const MatrixOperator& algorithm,
    const Povm& input_povm, const Povm& output_povm, double k,
    EvolutionConvention convention = EvolutionConvention::unitary_conjugation,
    double slack = 1e-9);

// ------------------------------------------------ sequential measurement

// Largest commutator norm between any group effect and any outcome effect.
double max_commutator_norm(const Povm& groups, const Povm& outcomes);

struct SequentialAudit {
  std::vector<std::string> group_labels;
  std::vector<std::string> outcome_labels;
  std::vector<std::vector<double>> joint;        // [group][outcome]
  std::vector<std::vector<double>> conditional;  // p(outcome | group); NaN if p(group) = 0
  std::vector<double> parity_gap;                // per outcome, across groups with p > 0
  double max_commutator = 0.0;
};

// Group measurement followed by outcome measurement. Throws
// NonCommutingMeasurement when max_commutator_norm exceeds `tol`.
SequentialAudit sequential_audit(const DensityMatrix& rho, const Povm& groups,
                                 const Povm& outcomes, double tol = 1e-9);

}  // namespace qfair::fairness
