#pragma once

// Dense complex kernels used by every module. Each kernel exists twice:
// `serial` is the straightforward reference loop kept for testing, and
// `parallel` is the OpenMP version. The unqualified functions in
// `qfair::kernels` dispatch on problem size.
//
// Matrices are square, row-major, and passed as a flat span plus the
// dimension. Basis index bits follow the library's qubit ordering: qubit 1
// is the most significant bit.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace qfair {

using Complex = std::complex<double>;

namespace kernels {

// Probability mass of a statevector split by a basis predicate
// `(index & mask) == value`.
struct MassSplit {
  double inside = 0.0;
  double outside = 0.0;
};

#define QFAIR_KERNEL_DECLS                                                    \
  void matvec(std::span<const Complex> a, std::size_t dim,                    \
              std::span<const Complex> x, std::span<Complex> y);              \
  void matmul(std::span<const Complex> a, std::span<const Complex> b,         \
              std::size_t dim, std::span<Complex> c);                         \
  void kron(std::span<const Complex> a, std::size_t dim_a,                    \
            std::span<const Complex> b, std::size_t dim_b,                    \
            std::span<Complex> out);                                          \
  void kron_vec(std::span<const Complex> a, std::span<const Complex> b,       \
                std::span<Complex> out);                                      \
  double norm_squared(std::span<const Complex> x);                            \
  Complex inner(std::span<const Complex> x, std::span<const Complex> y);      \
  double trace_product_real(std::span<const Complex> a,                       \
                            std::span<const Complex> b, std::size_t dim);     \
  MassSplit masked_mass(std::span<const Complex> x, std::uint64_t mask,       \
                        std::uint64_t value);                                 \
  void oracle_reflect(std::span<Complex> x, std::uint64_t mask,               \
                      std::uint64_t value);                                   \
  void state_reflect(std::span<const Complex> psi, std::span<Complex> x);

namespace serial {
QFAIR_KERNEL_DECLS
}  // namespace serial

namespace parallel {
QFAIR_KERNEL_DECLS
}  // namespace parallel

// Size-dispatching front ends.
QFAIR_KERNEL_DECLS

#undef QFAIR_KERNEL_DECLS

// Below this many complex multiply-adds the serial kernel is used.
inline constexpr std::size_t kParallelWorkThreshold = std::size_t{1} << 15;

}  // namespace kernels
}  // namespace qfair
