#include "qfair/amplification.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qfair::amplification {

using fairness::PartitionSpec;

namespace {

constexpr double kDegenerateMass = 1e-12;

void require_match_spec(const PartitionSpec& spec) {
  if (spec.kind() != PartitionSpec::Kind::match)
    throw InvalidArgument("amplification needs a two-subspace (match) partition");
}

bool is_diagonal(const CMatrix& m) {
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c)
      if (r != c && m(r, c) != Complex{0.0, 0.0}) return false;
  return true;
}

double protected_mass(const StateVector& psi, const MatrixOperator& projector) {
  const std::vector<Complex> pv = projector.matrix() * psi.amplitudes();
  return kernels::inner(psi.amplitudes(), pv).real();
}

void require_rotation_plane(double mass) {
  if (!(mass > kDegenerateMass && mass < 1.0 - kDegenerateMass))
    throw DegenerateMass("protected-subspace mass " + std::to_string(mass) +
                         " leaves no rotation plane for amplification");
}

void require_theta(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2))
    throw InvalidArgument("rotation angle must lie in (0, pi/2), got " + std::to_string(theta));
}

}  // namespace

MatrixOperator build_protected_projector(const PartitionSpec& spec, int num_qubits) {
  require_match_spec(spec);
  return spec.projectors(num_qubits).front();
}

MatrixOperator oracle_reflection(const MatrixOperator& projector) {
  if (projector.kind() != OperatorKind::projector)
    throw InvalidArgument("oracle_reflection needs a projector");
  CMatrix s = 2.0 * projector.matrix() - CMatrix::identity(projector.dim());
  return MatrixOperator::unchecked(std::move(s), OperatorKind::unitary);
}

MatrixOperator state_reflection(const StateVector& psi) {
  if (psi.num_qubits() > kMaxDenseQubits)
    throw InvalidArgument("dense reflections are limited to " + std::to_string(kMaxDenseQubits) +
                          " qubits");
  CMatrix s = 2.0 * CMatrix::outer(psi.amplitudes(), psi.amplitudes()) -
              CMatrix::identity(psi.dim());
  return MatrixOperator::unchecked(std::move(s), OperatorKind::unitary);
}

MatrixOperator grover_operator(const StateVector& psi, const MatrixOperator& projector) {
  if (psi.dim() != projector.dim()) throw DimensionMismatch("grover_operator: dimension");
  if (projector.kind() != OperatorKind::projector)
    throw InvalidArgument("grover_operator needs a projector");
  require_rotation_plane(protected_mass(psi, projector));

  const MatrixOperator s_psi = state_reflection(psi);
  const MatrixOperator s_chi = oracle_reflection(projector);
  if (!is_diagonal(s_chi.matrix())) return s_psi * s_chi;

  // Diagonal oracle: the product only rescales the columns of S_psi.
  CMatrix q = s_psi.matrix();
  const std::size_t dim = q.dim();
  for (std::size_t c = 0; c < dim; ++c) {
    const Complex sign = s_chi.matrix()(c, c);
    for (std::size_t r = 0; r < dim; ++r) q(r, c) *= sign;
  }
  return MatrixOperator::unchecked(std::move(q), OperatorKind::unitary);
}

double rotation_angle(double mass) {
  if (!(mass >= 0.0 && mass <= 1.0))
    throw InvalidArgument("mass must lie in [0, 1], got " + std::to_string(mass));
  return std::asin(std::sqrt(mass));
}

double predict_probability(double theta, std::uint64_t m) {
  require_theta(theta);
  const double s = std::sin((2.0 * static_cast<double>(m) + 1.0) * theta);
  return s * s;
}

std::uint64_t search_bound(double theta) {
  require_theta(theta);
  return 4 * static_cast<std::uint64_t>(std::ceil(std::numbers::pi / (2.0 * theta)));
}

double closed_form_iterations(double theta, double epsilon) {
  return std::asin(std::sqrt(std::abs(0.5 - epsilon))) / (2.0 * theta) - theta;
}

AmplificationPlan find_parity_iterations(double theta, double epsilon) {
  require_theta(theta);
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw InvalidArgument("epsilon must lie in (0, 0.5), got " + std::to_string(epsilon));

  AmplificationPlan plan;
  plan.theta = theta;
  plan.initial_mass = predict_probability(theta, 0);
  plan.epsilon = epsilon;
  plan.search_bound = search_bound(theta);
  plan.closed_form_raw = closed_form_iterations(theta, epsilon);
  plan.closed_form_m = static_cast<std::int64_t>(std::floor(plan.closed_form_raw));

  std::uint64_t best_m = 0;
  double best_gap = std::abs(plan.initial_mass - 0.5);
  bool found = best_gap <= epsilon;
  for (std::uint64_t m = 1; !found && m <= plan.search_bound; ++m) {
    const double gap = std::abs(predict_probability(theta, m) - 0.5);
    if (gap <= epsilon) {
      best_m = m;
      best_gap = gap;
      found = true;
    } else if (gap < best_gap - 1e-12) {
      best_m = m;
      best_gap = gap;
    }
  }
  plan.m = best_m;
  plan.predicted_mass = predict_probability(theta, best_m);
  plan.gap = best_gap;
  plan.achieved = found;
  return plan;
}

StateVector apply_grover_iterations(const StateVector& start, const PartitionSpec& spec,
                                    std::uint64_t m) {
  require_match_spec(spec);
  const int n = start.num_qubits();
  spec.validate(n);
  const std::uint64_t mask = spec.mask(n);
  const std::uint64_t value = spec.value(0, n);
  std::vector<Complex> x(start.amplitudes().begin(), start.amplitudes().end());
  for (std::uint64_t k = 0; k < m; ++k) {
    kernels::oracle_reflect(x, mask, value);
    kernels::state_reflect(start.amplitudes(), x);
  }
  return StateVector::from_amplitudes(std::move(x));
}

Repair repair_parity(const StateVector& psi, const PartitionSpec& spec, double epsilon,
                     const Tolerances& tol) {
  require_match_spec(spec);
  const int n = psi.num_qubits();
  const double mass = spec.masses(psi).front();
  require_rotation_plane(mass);
  const AmplificationPlan plan = find_parity_iterations(rotation_angle(mass), epsilon);

  StateVector out = psi;
  if (plan.m > 0) {
    if (n <= kMaxDenseQubits) {
      const MatrixOperator q = grover_operator(psi, build_protected_projector(spec, n));
      for (std::uint64_t k = 0; k < plan.m; ++k) out = apply(q, out, tol.structural);
    } else {
      out = apply_grover_iterations(psi, spec, plan.m);
    }
  }

  fairness::ParityReport report = fairness::statistical_parity_probs(out, spec, epsilon);
  const double achieved_mass = report.probabilities.front();
  if (std::abs(achieved_mass - plan.predicted_mass) > tol.composed)
    throw NumericalInvariantViolation("repaired mass " + std::to_string(achieved_mass) +
                                      " differs from predicted " +
                                      std::to_string(plan.predicted_mass));
  return {std::move(out), std::move(report), plan};
}

std::vector<fairness::ParityReport> cross_partition_disparity(
    const StateVector& psi, const PartitionSpec& repaired_on,
    std::span<const PartitionSpec> others, double epsilon) {
  repaired_on.validate(psi.num_qubits());
  std::vector<fairness::ParityReport> reports;
  reports.reserve(others.size());
  for (const auto& spec : others)
    reports.push_back(fairness::statistical_parity_probs(psi, spec, epsilon));
  return reports;
}

}  // namespace qfair::amplification
