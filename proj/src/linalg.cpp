#include "qfair/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "eigen_bridge.hpp"

namespace qfair {

Tolerances Tolerances::from_env() {
  Tolerances t;
  if (const char* raw = std::getenv("QFAIR_TOLERANCE")) {
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (end != raw && *end == '\0' && std::isfinite(v) && v > 0.0) t.composed = v;
  }
  return t;
}

int qubits_for_dim(std::size_t dim) {
  if (dim < 2 || !std::has_single_bit(dim))
    throw InvalidArgument("dimension " + std::to_string(dim) +
                          " is not a power of two >= 2");
  return std::countr_zero(dim);
}

namespace {

void require_dense_dim(std::size_t dim, const char* what) {
  const int n = qubits_for_dim(dim);
  if (n > kMaxDenseQubits)
    throw InvalidArgument(std::string(what) + ": dense matrices are limited to " +
                          std::to_string(kMaxDenseQubits) + " qubits");
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) +
                            " vs " + std::to_string(b));
}

}  // namespace

// ---------------------------------------------------------------- CMatrix

CMatrix::CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t dim, std::vector<Complex> data)
    : dim_(dim), data_(std::move(data)) {
  if (data_.size() != dim_ * dim_)
    throw DimensionMismatch("matrix data has " + std::to_string(data_.size()) +
                            " entries, expected " + std::to_string(dim_ * dim_));
}

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
  CMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
  require_same_dim(ket.size(), bra.size(), "outer");
  CMatrix m(ket.size());
  for (std::size_t r = 0; r < ket.size(); ++r)
    for (std::size_t c = 0; c < bra.size(); ++c) m(r, c) = ket[r] * std::conj(bra[c]);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex CMatrix::trace() const {
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_dim(dim_, o.dim_, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_dim(dim_, o.dim_, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (Complex& v : data_) v *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "matrix product");
  CMatrix c(a.dim());
  kernels::matmul(a.data(), b.data(), a.dim(), c.data());
  return c;
}

std::vector<Complex> operator*(const CMatrix& a, std::span<const Complex> x) {
  require_same_dim(a.dim(), x.size(), "matrix-vector product");
  std::vector<Complex> y(x.size());
  kernels::matvec(a.data(), a.dim(), x, y);
  return y;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

bool is_hermitian(const CMatrix& m, double tol) {
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = r; c < m.dim(); ++c)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
  return true;
}

Eigensystem eigh(const CMatrix& m, double tol) {
  if (!is_hermitian(m, tol)) throw InvalidArgument("eigh: matrix is not Hermitian");
  // Symmetrize so the solver sees an exactly Hermitian input.
  const detail::EigenMatrix h = 0.5 * (detail::as_eigen(m) + detail::as_eigen(m).adjoint());
  Eigen::SelfAdjointEigenSolver<detail::EigenMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericalInvariantViolation("eigh: eigensolver did not converge");
  Eigensystem es;
  es.values.assign(solver.eigenvalues().data(),
                   solver.eigenvalues().data() + solver.eigenvalues().size());
  es.vectors = detail::from_eigen(solver.eigenvectors());
  return es;
}

double spectral_norm(const CMatrix& m) {
  const Eigensystem es = eigh(m.adjoint() * m);
  return std::sqrt(std::max(0.0, es.values.back()));
}

// ------------------------------------------------------------ StateVector

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes, double tol) {
  const int n = qubits_for_dim(amplitudes.size());
  if (n > kMaxStateQubits)
    throw InvalidArgument("statevectors are limited to " + std::to_string(kMaxStateQubits) +
                          " qubits");
  const double norm2 = kernels::norm_squared(amplitudes);
  if (std::abs(norm2 - 1.0) > tol)
    throw InvalidArgument("statevector is not normalized (norm^2 = " +
                          std::to_string(norm2) + ")");
  return {n, std::move(amplitudes)};
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  if (num_qubits < 1 || num_qubits > kMaxStateQubits)
    throw InvalidArgument("qubit count " + std::to_string(num_qubits) + " out of range");
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (index >= dim) throw InvalidArgument("basis index out of range");
  std::vector<Complex> amps(dim, Complex{0.0, 0.0});
  amps[index] = 1.0;
  return {num_qubits, std::move(amps)};
}

bool phase_equal(const StateVector& a, const StateVector& b, double tol) {
  if (a.dim() != b.dim()) return false;
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < a.dim(); ++i)
    if (std::abs(a[i]) > std::abs(a[pivot])) pivot = i;
  if (std::abs(b[pivot]) <= tol) return false;
  const Complex phase = (b[pivot] / std::abs(b[pivot])) / (a[pivot] / std::abs(a[pivot]));
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (std::abs(a[i] * phase - b[i]) > tol) return false;
  return true;
}

// ---------------------------------------------------------- DensityMatrix

DensityMatrix DensityMatrix::from_matrix(CMatrix m, double tol) {
  require_dense_dim(m.dim(), "density matrix");
  if (!is_hermitian(m, tol)) throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(m.trace() - 1.0) > tol) throw InvalidArgument("density matrix trace != 1");
  if (eigh(m, tol).values.front() < -tol)
    throw InvalidArgument("density matrix has a negative eigenvalue");
  const int n = qubits_for_dim(m.dim());
  return {n, std::move(m)};
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxDenseQubits)
    throw InvalidArgument("qubit count out of range for a density matrix");
  const std::size_t dim = std::size_t{1} << num_qubits;
  return {num_qubits, CMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim))};
}

double DensityMatrix::purity() const {
  return kernels::trace_product_real(matrix_.data(), matrix_.data(), matrix_.dim());
}

// --------------------------------------------------------- MatrixOperator

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::unitary: return "unitary";
    case OperatorKind::projector: return "projector";
    case OperatorKind::effect: return "effect";
    case OperatorKind::general: return "general";
  }
  return "general";
}

MatrixOperator::MatrixOperator(CMatrix m, OperatorKind kind, double tol)
    : matrix_(std::move(m)), kind_(kind) {
  require_dense_dim(matrix_.dim(), "operator");
  switch (kind_) {
    case OperatorKind::unitary:
      if (max_abs_diff(matrix_.adjoint() * matrix_, CMatrix::identity(dim())) > tol)
        throw InvalidArgument("operator is not unitary");
      break;
    case OperatorKind::projector:
      if (!is_hermitian(matrix_, tol) || max_abs_diff(matrix_ * matrix_, matrix_) > tol)
        throw InvalidArgument("operator is not an orthogonal projector");
      break;
    case OperatorKind::effect:
      if (!is_hermitian(matrix_, tol) || eigh(matrix_, tol).values.front() < -tol)
        throw InvalidArgument("operator is not a positive effect");
      break;
    case OperatorKind::general:
      break;
  }
}

MatrixOperator MatrixOperator::unchecked(CMatrix m, OperatorKind kind) {
  qubits_for_dim(m.dim());
  return {std::move(m), kind, Unchecked{}};
}

MatrixOperator MatrixOperator::identity(std::size_t dim) {
  require_dense_dim(dim, "identity");
  return {CMatrix::identity(dim), OperatorKind::unitary, Unchecked{}};
}

MatrixOperator MatrixOperator::pauli_x() {
  return {CMatrix(2, {0.0, 1.0, 1.0, 0.0}), OperatorKind::unitary, Unchecked{}};
}

MatrixOperator MatrixOperator::pauli_y() {
  const Complex i{0.0, 1.0};
  return {CMatrix(2, {0.0, -i, i, 0.0}), OperatorKind::unitary, Unchecked{}};
}

MatrixOperator MatrixOperator::pauli_z() {
  return {CMatrix(2, {1.0, 0.0, 0.0, -1.0}), OperatorKind::unitary, Unchecked{}};
}

MatrixOperator MatrixOperator::hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return {CMatrix(2, {h, h, h, -h}), OperatorKind::unitary, Unchecked{}};
}

MatrixOperator MatrixOperator::adjoint() const {
  return {matrix_.adjoint(), kind_, Unchecked{}};
}

MatrixOperator operator*(const MatrixOperator& a, const MatrixOperator& b) {
  const bool unitary = a.kind() == OperatorKind::unitary && b.kind() == OperatorKind::unitary;
  return {a.matrix() * b.matrix(), unitary ? OperatorKind::unitary : OperatorKind::general,
          MatrixOperator::Unchecked{}};
}

// ------------------------------------------------------------------- Povm

Povm::Povm(std::vector<MatrixOperator> effects, std::vector<std::string> labels, double tol)
    : effects_(std::move(effects)), labels_(std::move(labels)) {
  if (effects_.empty()) throw InvalidArgument("POVM has no effects");
  if (labels_.empty()) {
    for (std::size_t i = 0; i < effects_.size(); ++i) labels_.push_back(std::to_string(i));
  }
  if (labels_.size() != effects_.size())
    throw InvalidArgument("POVM label count does not match effect count");
  const std::size_t dim = effects_.front().dim();
  CMatrix total(dim);
  for (auto& e : effects_) {
    require_same_dim(e.dim(), dim, "POVM effect");
    if (e.kind() == OperatorKind::general || e.kind() == OperatorKind::unitary)
      e = MatrixOperator(e.matrix(), OperatorKind::effect, tol);
    total += e.matrix();
  }
  if (max_abs_diff(total, CMatrix::identity(dim)) > tol)
    throw InvalidArgument("POVM effects do not sum to the identity");
}

Povm Povm::binary(const MatrixOperator& projector, std::string in_label,
                  std::string out_label) {
  if (projector.kind() != OperatorKind::projector)
    throw InvalidArgument("Povm::binary needs a projector");
  MatrixOperator complement = MatrixOperator::unchecked(
      CMatrix::identity(projector.dim()) - projector.matrix(), OperatorKind::projector);
  return Povm({projector, std::move(complement)}, {std::move(in_label), std::move(out_label)});
}

Povm Povm::computational_basis(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxDenseQubits)
    throw InvalidArgument("qubit count out of range for a dense POVM");
  const std::size_t dim = std::size_t{1} << num_qubits;
  std::vector<MatrixOperator> effects;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dim; ++i) {
    CMatrix m(dim);
    m(i, i) = 1.0;
    effects.push_back(MatrixOperator::unchecked(std::move(m), OperatorKind::projector));
    std::string bits(static_cast<std::size_t>(num_qubits), '0');
    for (int q = 1; q <= num_qubits; ++q)
      if (i & qubit_mask(q, num_qubits)) bits[static_cast<std::size_t>(q - 1)] = '1';
    labels.push_back(std::move(bits));
  }
  return Povm(std::move(effects), std::move(labels));
}

Povm Povm::trivial(std::size_t dim) {
  return Povm({MatrixOperator::identity(dim)}, {"any"});
}

// ------------------------------------------------------------- operations

MatrixOperator tensor(const MatrixOperator& a, const MatrixOperator& b) {
  const std::size_t dim = a.dim() * b.dim();
  require_dense_dim(dim, "tensor");
  CMatrix out(dim);
  kernels::kron(a.matrix().data(), a.dim(), b.matrix().data(), b.dim(), out.data());
  OperatorKind kind = OperatorKind::general;
  if (a.kind() == b.kind()) kind = a.kind();
  return MatrixOperator::unchecked(std::move(out), kind);
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() + b.num_qubits() > kMaxStateQubits)
    throw InvalidArgument("tensor product exceeds the statevector qubit limit");
  std::vector<Complex> out(a.dim() * b.dim());
  kernels::kron_vec(a.amplitudes(), b.amplitudes(), out);
  return StateVector::from_amplitudes(std::move(out));
}

StateVector apply(const MatrixOperator& u, const StateVector& psi, double tol) {
  if (u.kind() != OperatorKind::unitary)
    throw InvalidArgument("apply: operator is tagged " + std::string(to_string(u.kind())) +
                          ", not unitary");
  require_same_dim(u.dim(), psi.dim(), "apply");
  std::vector<Complex> out = u.matrix() * psi.amplitudes();
  const double norm2 = kernels::norm_squared(out);
  if (std::abs(norm2 - 1.0) > tol)
    throw NumericalInvariantViolation("apply: result lost normalization");
  return StateVector::from_amplitudes(std::move(out), tol);
}

DensityMatrix evolve_density(const MatrixOperator& u, const DensityMatrix& rho, double tol) {
  if (u.kind() != OperatorKind::unitary)
    throw InvalidArgument("evolve_density: operator is not unitary");
  require_same_dim(u.dim(), rho.dim(), "evolve_density");
  CMatrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  if (!is_hermitian(out, tol) || std::abs(out.trace() - 1.0) > tol)
    throw NumericalInvariantViolation("evolve_density: result is not a density matrix");
  return {rho.num_qubits(), std::move(out)};
}

DensityMatrix pure_density(const StateVector& psi) {
  require_dense_dim(psi.dim(), "pure_density");
  return {psi.num_qubits(), CMatrix::outer(psi.amplitudes(), psi.amplitudes())};
}

CMatrix hermitian_fn(const CMatrix& m, const std::function<double(double)>& f, double tol) {
  const Eigensystem es = eigh(m, tol);
  const auto v = detail::as_eigen(es.vectors);
  Eigen::VectorXd mapped(static_cast<Eigen::Index>(es.values.size()));
  for (std::size_t i = 0; i < es.values.size(); ++i)
    mapped[static_cast<Eigen::Index>(i)] = f(es.values[i]);
  const detail::EigenMatrix out = v * mapped.cast<Complex>().asDiagonal() * v.adjoint();
  return detail::from_eigen(out);
}

CMatrix hermitian_fn(const CMatrix& m, ScalarFunction f, double tol) {
  const auto clamp = [tol](double x) { return (x < 0.0 && x >= -tol) ? 0.0 : x; };
  switch (f) {
    case ScalarFunction::identity:
      return hermitian_fn(m, [](double x) { return x; }, tol);
    case ScalarFunction::abs:
      return hermitian_fn(m, [&](double x) { return std::abs(clamp(x)); }, tol);
    case ScalarFunction::sqrt:
      return hermitian_fn(
          m,
          [&](double x) {
            x = clamp(x);
            if (x < 0.0) throw InvalidArgument("sqrt of a matrix with a negative eigenvalue");
            return std::sqrt(x);
          },
          tol);
    case ScalarFunction::log2:
      return hermitian_fn(
          m,
          [&](double x) {
            x = clamp(x);
            if (x < 0.0) throw InvalidArgument("log of a matrix with a negative eigenvalue");
            return x <= 1e-12 ? 0.0 : std::log2(x);
          },
          tol);
  }
  throw InvalidArgument("unknown scalar function");
}

MatrixOperator hermitian_fn(const MatrixOperator& m, ScalarFunction f, double tol) {
  CMatrix out = hermitian_fn(m.matrix(), f, tol);
  // abs and sqrt of a Hermitian matrix are PSD.
  const OperatorKind kind = (f == ScalarFunction::abs || f == ScalarFunction::sqrt)
                                ? OperatorKind::effect
                                : OperatorKind::general;
  return MatrixOperator::unchecked(std::move(out), kind);
}

double commutator_norm(const MatrixOperator& a, const MatrixOperator& b) {
  require_same_dim(a.dim(), b.dim(), "commutator_norm");
  return spectral_norm(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

}  // namespace qfair
