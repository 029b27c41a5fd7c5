#pragma once

// Dense complex linear algebra on n-qubit Hilbert spaces.
//
// Basis ordering: qubit 1 is the most significant bit of the basis index, so
// |x1 x2 x3> is index 4*x1 + 2*x2 + x3.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfair/errors.hpp"
#include "qfair/kernels.hpp"

namespace qfair {

inline constexpr int kMaxStateQubits = 20;
inline constexpr int kMaxDenseQubits = 10;

// Bit of `qubit` (1-based, qubit 1 = MSB) inside an n-qubit basis index.
constexpr std::uint64_t qubit_mask(int qubit, int num_qubits) {
  return std::uint64_t{1} << (num_qubits - qubit);
}

// log2 of a power-of-two dimension; throws InvalidArgument otherwise.
int qubits_for_dim(std::size_t dim);

// Square, row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim);
  CMatrix(std::size_t dim, std::vector<Complex> data);

  static CMatrix identity(std::size_t dim);
  static CMatrix diagonal(std::span<const Complex> diag);
  static CMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

  std::size_t dim() const { return dim_; }
  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  Complex operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }

  CMatrix adjoint() const;
  Complex trace() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

std::vector<Complex> operator*(const CMatrix& a, std::span<const Complex> x);

double max_abs_diff(const CMatrix& a, const CMatrix& b);
bool is_hermitian(const CMatrix& m, double tol);
double spectral_norm(const CMatrix& m);

// Eigendecomposition of a Hermitian matrix; eigenvalues ascending, eigenvectors
// are the columns of `vectors`.
struct Eigensystem {
  std::vector<double> values;
  CMatrix vectors;
};
Eigensystem eigh(const CMatrix& m, double tol = 1e-10);

// Pure state over 2^n amplitudes, normalized.
class StateVector {
 public:
  // Validates length and normalization (within `tol`).
  static StateVector from_amplitudes(std::vector<Complex> amplitudes, double tol = 1e-10);
  static StateVector basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }
  double probability(std::size_t i) const { return std::norm(amplitudes_[i]); }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  StateVector(int num_qubits, std::vector<Complex> amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

  int num_qubits_ = 0;
  std::vector<Complex> amplitudes_;
};

// Equality up to a global phase, aligned at the largest-magnitude amplitude
// of `a`.
bool phase_equal(const StateVector& a, const StateVector& b, double tol = 1e-9);

class MatrixOperator;

// Mixed state: Hermitian, PSD, unit trace.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(CMatrix m, double tol = 1e-10);
  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return matrix_.dim(); }
  const CMatrix& matrix() const { return matrix_; }
  double purity() const;

 private:
  friend DensityMatrix pure_density(const StateVector&);
  friend DensityMatrix evolve_density(const MatrixOperator&, const DensityMatrix&, double);
  DensityMatrix(int num_qubits, CMatrix m) : num_qubits_(num_qubits), matrix_(std::move(m)) {}

  int num_qubits_ = 0;
  CMatrix matrix_;
};

enum class OperatorKind { unitary, projector, effect, general };
std::string_view to_string(OperatorKind kind);

class MatrixOperator {
 public:
  // Validates that `m` satisfies the invariant of `kind`.
  MatrixOperator(CMatrix m, OperatorKind kind, double tol = 1e-10);

  // Skips validation; the caller guarantees the kind invariant holds.
  static MatrixOperator unchecked(CMatrix m, OperatorKind kind);

  static MatrixOperator identity(std::size_t dim);
  static MatrixOperator pauli_x();
  static MatrixOperator pauli_y();
  static MatrixOperator pauli_z();
  static MatrixOperator hadamard();

  std::size_t dim() const { return matrix_.dim(); }
  int num_qubits() const { return qubits_for_dim(matrix_.dim()); }
  OperatorKind kind() const { return kind_; }
  const CMatrix& matrix() const { return matrix_; }
  MatrixOperator adjoint() const;

  // Unitary * unitary stays tagged unitary; every other product is general.
  friend MatrixOperator operator*(const MatrixOperator& a, const MatrixOperator& b);

 private:
  struct Unchecked {};
  MatrixOperator(CMatrix m, OperatorKind kind, Unchecked)
      : matrix_(std::move(m)), kind_(kind) {}

  CMatrix matrix_;
  OperatorKind kind_ = OperatorKind::general;
};

// Positive operator-valued measure: effects summing to the identity.
class Povm {
 public:
  Povm(std::vector<MatrixOperator> effects, std::vector<std::string> labels,
       double tol = 1e-10);

  static Povm binary(const MatrixOperator& projector, std::string in_label = "1",
                     std::string out_label = "0");
  static Povm computational_basis(int num_qubits);
  static Povm trivial(std::size_t dim);

  std::size_t size() const { return effects_.size(); }
  std::size_t dim() const { return effects_.front().dim(); }
  const std::vector<MatrixOperator>& effects() const { return effects_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<MatrixOperator> effects_;
  std::vector<std::string> labels_;
};

// Kronecker products; kind tags propagate when both factors share them.
MatrixOperator tensor(const MatrixOperator& a, const MatrixOperator& b);
StateVector tensor(const StateVector& a, const StateVector& b);

StateVector apply(const MatrixOperator& u, const StateVector& psi, double tol = 1e-10);
DensityMatrix evolve_density(const MatrixOperator& u, const DensityMatrix& rho,
                             double tol = 1e-10);
DensityMatrix pure_density(const StateVector& psi);

// Matrix functions through the Hermitian eigendecomposition. For abs, sqrt
// and log2, eigenvalues in [-tol, 0) are clamped to 0 first; log2 maps the
// kernel (eigenvalues <= 1e-12) to 0, i.e. it is the logarithm on the support.
enum class ScalarFunction { identity, abs, sqrt, log2 };
CMatrix hermitian_fn(const CMatrix& m, ScalarFunction f, double tol = 1e-10);
CMatrix hermitian_fn(const CMatrix& m, const std::function<double(double)>& f,
                     double tol = 1e-10);
MatrixOperator hermitian_fn(const MatrixOperator& m, ScalarFunction f, double tol = 1e-10);

// Spectral norm of AB - BA.
double commutator_norm(const MatrixOperator& a, const MatrixOperator& b);

}  // namespace qfair
