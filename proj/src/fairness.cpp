#include "qfair/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace qfair::fairness {

// --------------------------------------------------------- PartitionSpec

PartitionSpec PartitionSpec::match(std::vector<Clause> clauses) {
  PartitionSpec s;
  s.kind_ = Kind::match;
  s.clauses_ = std::move(clauses);
  return s;
}

PartitionSpec PartitionSpec::cells(std::vector<int> qubits) {
  PartitionSpec s;
  s.kind_ = Kind::cells;
  for (int q : qubits) s.clauses_.push_back({q, 0});
  return s;
}

std::size_t PartitionSpec::arity() const {
  return kind_ == Kind::match ? 2 : std::size_t{1} << clauses_.size();
}

void PartitionSpec::validate(int num_qubits) const {
  std::set<int> seen;
  for (const Clause& c : clauses_) {
    if (c.qubit < 1 || c.qubit > num_qubits)
      throw InvalidArgument("partition qubit " + std::to_string(c.qubit) + " outside [1, " +
                            std::to_string(num_qubits) + "]");
    if (c.value != 0 && c.value != 1)
      throw InvalidArgument("partition value for qubit " + std::to_string(c.qubit) +
                            " is not binary");
    if (!seen.insert(c.qubit).second)
      throw InvalidArgument("partition repeats qubit " + std::to_string(c.qubit));
  }
  if (kind_ == Kind::cells && clauses_.empty())
    throw InvalidArgument("cell partition needs at least one qubit");
}

std::vector<std::string> PartitionSpec::labels() const {
  const auto term = [](int q, int v) { return "x" + std::to_string(q) + "=" + std::to_string(v); };
  std::vector<std::string> out;
  if (kind_ == Kind::match) {
    if (clauses_.empty()) return {"all", "none"};
    std::string in;
    for (const Clause& c : clauses_) in += (in.empty() ? "" : ",") + term(c.qubit, c.value);
    out.push_back(in);
    if (clauses_.size() == 1)
      out.push_back(term(clauses_[0].qubit, 1 - clauses_[0].value));
    else
      out.push_back("not(" + in + ")");
    return out;
  }
  const std::size_t k = clauses_.size();
  for (std::size_t cell = 0; cell < arity(); ++cell) {
    std::string label;
    for (std::size_t j = 0; j < k; ++j) {
      const int bit = static_cast<int>((cell >> (k - 1 - j)) & 1u);
      label += (j ? "," : "") + term(clauses_[j].qubit, bit);
    }
    out.push_back(label);
  }
  return out;
}

std::uint64_t PartitionSpec::mask(int num_qubits) const {
  std::uint64_t m = 0;
  for (const Clause& c : clauses_) m |= qubit_mask(c.qubit, num_qubits);
  return m;
}

std::uint64_t PartitionSpec::value(std::size_t cell, int num_qubits) const {
  std::uint64_t v = 0;
  if (kind_ == Kind::match) {
    if (cell != 0) throw InvalidArgument("the complement of a match spec has no mask");
    for (const Clause& c : clauses_)
      if (c.value) v |= qubit_mask(c.qubit, num_qubits);
    return v;
  }
  const std::size_t k = clauses_.size();
  if (cell >= arity()) throw InvalidArgument("cell index out of range");
  for (std::size_t j = 0; j < k; ++j)
    if ((cell >> (k - 1 - j)) & 1u) v |= qubit_mask(clauses_[j].qubit, num_qubits);
  return v;
}

std::vector<double> PartitionSpec::masses(const StateVector& psi) const {
  const int n = psi.num_qubits();
  validate(n);
  const std::uint64_t m = mask(n);
  if (kind_ == Kind::match) {
    const auto split = kernels::masked_mass(psi.amplitudes(), m, value(0, n));
    return {split.inside, split.outside};
  }
  std::vector<double> out;
  out.reserve(arity());
  for (std::size_t cell = 0; cell < arity(); ++cell)
    out.push_back(kernels::masked_mass(psi.amplitudes(), m, value(cell, n)).inside);
  return out;
}

std::vector<MatrixOperator> PartitionSpec::projectors(int num_qubits) const {
  validate(num_qubits);
  if (num_qubits > kMaxDenseQubits)
    throw InvalidArgument("dense projectors are limited to " + std::to_string(kMaxDenseQubits) +
                          " qubits");
  const std::size_t dim = std::size_t{1} << num_qubits;
  const std::uint64_t m = mask(num_qubits);
  std::vector<MatrixOperator> out;
  if (kind_ == Kind::match) {
    const std::uint64_t v = value(0, num_qubits);
    CMatrix in(dim), rest(dim);
    for (std::size_t i = 0; i < dim; ++i) ((i & m) == v ? in : rest)(i, i) = 1.0;
    out.push_back(MatrixOperator::unchecked(std::move(in), OperatorKind::projector));
    out.push_back(MatrixOperator::unchecked(std::move(rest), OperatorKind::projector));
    return out;
  }
  for (std::size_t cell = 0; cell < arity(); ++cell) {
    const std::uint64_t v = value(cell, num_qubits);
    CMatrix p(dim);
    for (std::size_t i = 0; i < dim; ++i)
      if ((i & m) == v) p(i, i) = 1.0;
    out.push_back(MatrixOperator::unchecked(std::move(p), OperatorKind::projector));
  }
  return out;
}

Povm PartitionSpec::povm(int num_qubits) const {
  return Povm(projectors(num_qubits), labels());
}

// ---------------------------------------------------------- group parity

ParityReport make_parity_report(std::vector<std::string> labels,
                                std::vector<double> probabilities, double epsilon) {
  if (labels.size() != probabilities.size() || probabilities.empty())
    throw InvalidArgument("parity report needs one probability per label");
  double sum = 0.0;
  for (double p : probabilities) sum += p;
  if (std::abs(sum - 1.0) > 1e-10)
    throw NumericalInvariantViolation("subspace probabilities sum to " + std::to_string(sum));
  const auto [lo, hi] = std::minmax_element(probabilities.begin(), probabilities.end());
  ParityReport r;
  r.gap = *hi - *lo;
  r.labels = std::move(labels);
  r.probabilities = std::move(probabilities);
  r.epsilon = epsilon;
  r.satisfied = r.gap <= epsilon;
  return r;
}

ParityReport statistical_parity_probs(const StateVector& psi, const PartitionSpec& spec,
                                      double epsilon) {
  return make_parity_report(spec.labels(), spec.masses(psi), epsilon);
}

namespace {

FairnessGap gap_of(measurement::OutcomeDistribution dist) {
  const auto [lo, hi] = std::minmax_element(dist.probabilities.begin(), dist.probabilities.end());
  return {*hi - *lo, std::move(dist)};
}

}  // namespace

FairnessGap quantum_fairness_gap(const DensityMatrix& rho, const Povm& povm) {
  return gap_of(measurement::born_probabilities(rho, povm));
}

FairnessGap quantum_fairness_gap(const StateVector& psi, const Povm& povm) {
  return gap_of(measurement::born_probabilities(psi, povm));
}

DisparateImpact disparate_impact_ratio(double group_a, double group_b) {
  const double lo = std::min(group_a, group_b);
  const double hi = std::max(group_a, group_b);
  if (hi <= 1e-12)
    return {std::numeric_limits<double>::infinity(),
            "both group probabilities are zero; ratio undefined"};
  return {lo / hi, ""};
}

DisparateImpact disparate_impact_ratio(const ParityReport& report) {
  if (report.probabilities.size() != 2)
    throw InvalidArgument("disparate impact needs a two-subspace report");
  return disparate_impact_ratio(report.probabilities[0], report.probabilities[1]);
}

// ------------------------------------------------------------- Lipschitz

std::string_view to_string(LipschitzVariant v) {
  switch (v) {
    case LipschitzVariant::metric: return "metric";
    case LipschitzVariant::entropy: return "entropy";
    case LipschitzVariant::povm: return "povm";
  }
  return "metric";
}

std::string_view to_string(EvolutionConvention c) {
  return c == EvolutionConvention::unitary_conjugation ? "A rho A^dag" : "A^dag rho A";
}

DensityMatrix evolve(const MatrixOperator& algorithm, const DensityMatrix& rho,
                     EvolutionConvention convention) {
  return convention == EvolutionConvention::unitary_conjugation
             ? evolve_density(algorithm, rho)
             : evolve_density(algorithm.adjoint(), rho);
}

namespace {

void check_lipschitz_inputs(std::span<const DensityMatrix> inputs,
                            const MatrixOperator& algorithm, double k) {
  if (!(k > 0.0 && k <= 1.0))
    throw InvalidArgument("Lipschitz constant K must lie in (0, 1], got " + std::to_string(k));
  if (inputs.size() < 2) throw InvalidArgument("Lipschitz check needs at least two inputs");
  if (algorithm.kind() != OperatorKind::unitary)
    throw InvalidArgument("Lipschitz algorithm must be unitary");
  for (const auto& rho : inputs)
    if (rho.dim() != algorithm.dim())
      throw DimensionMismatch("Lipschitz input dimension does not match the algorithm");
}

std::vector<DensityMatrix> evolve_all(std::span<const DensityMatrix> inputs,
                                      const MatrixOperator& algorithm,
                                      EvolutionConvention convention) {
  std::vector<DensityMatrix> out;
  out.reserve(inputs.size());
  for (const auto& rho : inputs) out.push_back(evolve(algorithm, rho, convention));
  return out;
}

// Shared pair bookkeeping for the metric and POVM forms: out <= K in.
LipschitzPair bounded_pair(std::size_t i, std::size_t j, double in, double out, double k,
                           double slack) {
  LipschitzPair p;
  p.i = i;
  p.j = j;
  p.input_distance = in;
  p.output_distance = out;
  if (in <= kCoincidentDistance) {
    p.coincident = true;
    p.satisfied = out <= slack;
  } else {
    p.ratio = out / in;
    p.satisfied = out <= k * in + slack;
  }
  return p;
}

void finalize(LipschitzReport& r) {
  r.satisfied = std::all_of(r.pairs.begin(), r.pairs.end(), [](const LipschitzPair& p) {
    return p.support_excluded || p.satisfied;
  });
}

}  // namespace

LipschitzReport lipschitz_check_metric(std::span<const DensityMatrix> inputs,
                                       const MatrixOperator& algorithm, double k,
                                       metrics::MetricChoice metric,
                                       EvolutionConvention convention, double slack) {
  check_lipschitz_inputs(inputs, algorithm, k);
  const auto outputs = evolve_all(inputs, algorithm, convention);
  LipschitzReport r;
  r.k = k;
  r.variant = LipschitzVariant::metric;
  r.metric = metric;
  r.convention = convention;
  r.slack = slack;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (std::size_t j = i + 1; j < inputs.size(); ++j) {
      const double in = metrics::distance(metric, inputs[i], inputs[j]);
      const double out = metrics::distance(metric, outputs[i], outputs[j]);
      LipschitzPair p = bounded_pair(i, j, in, out, k, slack);
      if (std::isinf(in) && std::isinf(out)) {
        p.support_excluded = true;
        p.ratio.reset();
      }
      r.pairs.push_back(p);
    }
  finalize(r);
  return r;
}

LipschitzReport lipschitz_check_entropy(std::span<const DensityMatrix> inputs,
                                        const MatrixOperator& algorithm, double k,
                                        EvolutionConvention convention, double slack) {
  check_lipschitz_inputs(inputs, algorithm, k);
  const auto outputs = evolve_all(inputs, algorithm, convention);
  LipschitzReport r;
  r.k = k;
  r.variant = LipschitzVariant::entropy;
  r.metric = metrics::MetricChoice::relative_entropy;
  r.convention = convention;
  r.slack = slack;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      if (i == j) continue;
      LipschitzPair p;
      p.i = i;
      p.j = j;
      p.input_distance = std::abs(metrics::relative_entropy(inputs[i], inputs[j]));
      p.output_distance = std::abs(metrics::relative_entropy(outputs[i], outputs[j]));
      const bool in_inf = std::isinf(p.input_distance);
      const bool out_inf = std::isinf(p.output_distance);
      if (in_inf && out_inf) {
        p.support_excluded = true;
        p.satisfied = true;
      } else if (in_inf) {
        p.satisfied = false;
      } else if (p.input_distance <= kCoincidentDistance) {
        p.coincident = true;
        p.satisfied = p.output_distance <= slack;
      } else {
        if (!out_inf) p.ratio = p.output_distance / p.input_distance;
        // Input side on the left, K times the output side on the right.
        p.satisfied = out_inf || p.input_distance <= k * p.output_distance + slack;
      }
      r.pairs.push_back(p);
    }
  finalize(r);
  return r;
}

LipschitzReport lipschitz_check_povm(std::span<const DensityMatrix> inputs,
                                     const MatrixOperator& algorithm, const Povm& input_povm,
                                     const Povm& output_povm, double k,
                                     EvolutionConvention convention, double slack) {
  check_lipschitz_inputs(inputs, algorithm, k);
  if (input_povm.dim() != algorithm.dim() || output_povm.dim() != algorithm.dim())
    throw DimensionMismatch("Lipschitz POVM dimension does not match the algorithm");
  const auto outputs = evolve_all(inputs, algorithm, convention);
  std::vector<std::vector<double>> in_dist, out_dist;
  for (const auto& rho : inputs)
    in_dist.push_back(measurement::born_probabilities(rho, input_povm).probabilities);
  for (const auto& rho : outputs)
    out_dist.push_back(measurement::born_probabilities(rho, output_povm).probabilities);

  LipschitzReport r;
  r.k = k;
  r.variant = LipschitzVariant::povm;
  r.convention = convention;
  r.slack = slack;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (std::size_t j = i + 1; j < inputs.size(); ++j)
      r.pairs.push_back(bounded_pair(i, j, measurement::total_variation(in_dist[i], in_dist[j]),
                                     measurement::total_variation(out_dist[i], out_dist[j]), k,
                                     slack));
  finalize(r);
  return r;
}

// ------------------------------------------------ sequential measurement

double max_commutator_norm(const Povm& groups, const Povm& outcomes) {
  if (groups.dim() != outcomes.dim())
    throw DimensionMismatch("group and outcome POVMs act on different spaces");
  double worst = 0.0;
  for (const auto& g : groups.effects())
    for (const auto& y : outcomes.effects()) worst = std::max(worst, commutator_norm(g, y));
  return worst;
}

SequentialAudit sequential_audit(const DensityMatrix& rho, const Povm& groups,
                                 const Povm& outcomes, double tol) {
  if (rho.dim() != groups.dim()) throw DimensionMismatch("sequential_audit: state dimension");
  SequentialAudit a;
  a.max_commutator = max_commutator_norm(groups, outcomes);
  if (a.max_commutator > tol)
    throw NonCommutingMeasurement("group and outcome measurements do not commute (norm " +
                                  std::to_string(a.max_commutator) + ")");
  a.group_labels = groups.labels();
  a.outcome_labels = outcomes.labels();
  const std::size_t ng = groups.size();
  const std::size_t ny = outcomes.size();
  a.joint.assign(ng, std::vector<double>(ny, 0.0));
  a.conditional.assign(ng, std::vector<double>(ny, std::numeric_limits<double>::quiet_NaN()));
  for (std::size_t g = 0; g < ng; ++g) {
    // Lueders update with M_g = sqrt(E_g).
    const CMatrix root = hermitian_fn(groups.effects()[g].matrix(), ScalarFunction::sqrt);
    const CMatrix post = root * rho.matrix() * root;
    const double pg = post.trace().real();
    for (std::size_t y = 0; y < ny; ++y)
      a.joint[g][y] = kernels::trace_product_real(outcomes.effects()[y].matrix().data(),
                                                  post.data(), post.dim());
    if (pg > 1e-12)
      for (std::size_t y = 0; y < ny; ++y) a.conditional[g][y] = a.joint[g][y] / pg;
  }
  a.parity_gap.assign(ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t g = 0; g < ng; ++g) {
      if (std::isnan(a.conditional[g][y])) continue;
      lo = std::min(lo, a.conditional[g][y]);
      hi = std::max(hi, a.conditional[g][y]);
    }
    a.parity_gap[y] = hi >= lo ? hi - lo : 0.0;
  }
  return a;
}

}  // namespace qfair::fairness
