#pragma once

// Statistical-parity repair by amplitude amplification.
//
// With P the projector onto the protected subspace H1 and a = <psi|P|psi>,
// the operator Q = S_psi S_chi (S_psi = 2|psi><psi| - I, S_chi = 2P - I)
// rotates psi by 2 theta inside span{psi_1, psi_0}, theta = arcsin sqrt(a),
// so the H1 mass after m applications is sin^2((2m + 1) theta).
//
// S_chi = 2P - I leaves H1 fixed and negates its complement, i.e. it is minus
// the usual phase oracle. Q is therefore minus the textbook Grover iterate:
// same rotation, same measured masses, and its spectrum on the rotation
// plane is -e^{+-2i theta}.

#include <cstdint>
#include <span>
#include <vector>

#include "qfair/errors.hpp"
#include "qfair/fairness.hpp"
#include "qfair/linalg.hpp"

namespace qfair::amplification {

struct AmplificationPlan {
  double theta = 0.0;
  double initial_mass = 0.0;  // a = sin^2 theta
  double epsilon = 0.0;
  std::uint64_t m = 0;
  double predicted_mass = 0.0;  // sin^2((2m + 1) theta)
  double gap = 0.0;             // |predicted_mass - 0.5|
  bool achieved = false;        // gap <= epsilon
  std::uint64_t search_bound = 0;

  // The closed-form count floor(arcsin(sqrt|0.5 - eps|) / (2 theta) - theta),
  // kept for comparison only; it is never used to pick m.
  double closed_form_raw = 0.0;
  std::int64_t closed_form_m = 0;
};

// Projector onto the basis states satisfying every clause of a match spec;
// rank 2^(n - #clauses).
MatrixOperator build_protected_projector(const fairness::PartitionSpec& spec, int num_qubits);

// S_chi = 2P - I.
MatrixOperator oracle_reflection(const MatrixOperator& projector);

// S_psi = 2|psi><psi| - I.
MatrixOperator state_reflection(const StateVector& psi);

// Q = S_psi S_chi. Throws DegenerateMass unless 1e-12 < <psi|P|psi> < 1 - 1e-12.
MatrixOperator grover_operator(const StateVector& psi, const MatrixOperator& projector);

// arcsin(sqrt(mass)).
double rotation_angle(double mass);

double predict_probability(double theta, std::uint64_t m);

// Largest iteration count scanned by find_parity_iterations: 4 ceil(pi / (2 theta)).
std::uint64_t search_bound(double theta);

// Closed-form iteration count as printed alongside the construction (raw,
// before the floor).
double closed_form_iterations(double theta, double epsilon);

// Smallest m in [0, search_bound] with |sin^2((2m+1) theta) - 0.5| <= eps;
// otherwise the smallest m minimizing that gap, with achieved = false.
AmplificationPlan find_parity_iterations(double theta, double epsilon);

// Q^m |psi> using the two vector reflections, without forming Q. `spec`
// must be a match spec; `start` is the state reflected about.
StateVector apply_grover_iterations(const StateVector& start,
                                    const fairness::PartitionSpec& spec, std::uint64_t m);

struct Repair {
  StateVector state;
  fairness::ParityReport report;
  AmplificationPlan plan;
};

// Dense Q for n <= kMaxDenseQubits, vector reflections above that. Throws
// NumericalInvariantViolation when the repaired mass differs from
// predict_probability by more than tol.composed.
Repair repair_parity(const StateVector& psi, const fairness::PartitionSpec& spec, double epsilon,
                     const Tolerances& tol = {});

// Parity reports for other partitions of an (already repaired) state.
std::vector<fairness::ParityReport> cross_partition_disparity(
    const StateVector& psi, const fairness::PartitionSpec& repaired_on,
    std::span<const fairness::PartitionSpec> others, double epsilon);

}  // namespace qfair::amplification
