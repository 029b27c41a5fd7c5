#include "qfair/kernels.hpp"

#include <omp.h>

#include <cassert>
#include <cstdint>

namespace qfair::kernels {

namespace parallel {

void matvec(std::span<const Complex> a, std::size_t dim,
            std::span<const Complex> x, std::span<Complex> y) {
  assert(a.size() == dim * dim && x.size() == dim && y.size() == dim);
  const auto n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    Complex acc{0.0, 0.0};
    const Complex* row = a.data() + r * n;
    for (std::int64_t c = 0; c < n; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void matmul(std::span<const Complex> a, std::span<const Complex> b,
            std::size_t dim, std::span<Complex> c) {
  assert(a.size() == dim * dim && b.size() == dim * dim &&
         c.size() == dim * dim);
  const auto n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    Complex* crow = c.data() + i * n;
    for (std::int64_t j = 0; j < n; ++j) crow[j] = Complex{0.0, 0.0};
    for (std::int64_t k = 0; k < n; ++k) {
      const Complex aik = a[i * n + k];
      if (aik == Complex{0.0, 0.0}) continue;
      const Complex* brow = b.data() + k * n;
      for (std::int64_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

void kron(std::span<const Complex> a, std::size_t dim_a,
          std::span<const Complex> b, std::size_t dim_b,
          std::span<Complex> out) {
  const std::size_t dim = dim_a * dim_b;
  assert(out.size() == dim * dim);
  const auto rows = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < rows; ++r) {
    const std::size_t ra = static_cast<std::size_t>(r) / dim_b;
    const std::size_t rb = static_cast<std::size_t>(r) % dim_b;
    for (std::size_t ca = 0; ca < dim_a; ++ca) {
      const Complex s = a[ra * dim_a + ca];
      for (std::size_t cb = 0; cb < dim_b; ++cb)
        out[r * dim + ca * dim_b + cb] = s * b[rb * dim_b + cb];
    }
  }
}

void kron_vec(std::span<const Complex> a, std::span<const Complex> b,
              std::span<Complex> out) {
  assert(out.size() == a.size() * b.size());
  const auto n = static_cast<std::int64_t>(out.size());
  const std::size_t nb = b.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k)
    out[k] = a[static_cast<std::size_t>(k) / nb] * b[static_cast<std::size_t>(k) % nb];
}

double norm_squared(std::span<const Complex> x) {
  double acc = 0.0;
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for reduction(+ : acc) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) acc += std::norm(x[i]);
  return acc;
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  assert(x.size() == y.size());
  double re = 0.0;
  double im = 0.0;
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for reduction(+ : re, im) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const Complex t = std::conj(x[i]) * y[i];
    re += t.real();
    im += t.imag();
  }
  return {re, im};
}

double trace_product_real(std::span<const Complex> a,
                          std::span<const Complex> b, std::size_t dim) {
  double acc = 0.0;
  const auto n = static_cast<std::int64_t>(dim);
#pragma omp parallel for reduction(+ : acc) schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      acc += (a[i * n + j] * b[j * n + i]).real();
  return acc;
}

MassSplit masked_mass(std::span<const Complex> x, std::uint64_t mask,
                      std::uint64_t value) {
  double inside = 0.0;
  double outside = 0.0;
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for reduction(+ : inside, outside) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double p = std::norm(x[i]);
    if ((static_cast<std::uint64_t>(i) & mask) == value)
      inside += p;
    else
      outside += p;
  }
  return {inside, outside};
}

void oracle_reflect(std::span<Complex> x, std::uint64_t mask,
                    std::uint64_t value) {
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    if ((static_cast<std::uint64_t>(i) & mask) != value) x[i] = -x[i];
}

void state_reflect(std::span<const Complex> psi, std::span<Complex> x) {
  assert(psi.size() == x.size());
  const Complex overlap = 2.0 * inner(psi, x);
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) x[i] = overlap * psi[i] - x[i];
}

}  // namespace parallel

namespace {
bool wide(std::size_t work) { return work >= kParallelWorkThreshold; }
}  // namespace

void matvec(std::span<const Complex> a, std::size_t dim,
            std::span<const Complex> x, std::span<Complex> y) {
  wide(dim * dim) ? parallel::matvec(a, dim, x, y)
                  : serial::matvec(a, dim, x, y);
}

void matmul(std::span<const Complex> a, std::span<const Complex> b,
            std::size_t dim, std::span<Complex> c) {
  wide(dim * dim * dim) ? parallel::matmul(a, b, dim, c)
                        : serial::matmul(a, b, dim, c);
}

void kron(std::span<const Complex> a, std::size_t dim_a,
          std::span<const Complex> b, std::size_t dim_b,
          std::span<Complex> out) {
  wide(out.size()) ? parallel::kron(a, dim_a, b, dim_b, out)
                   : serial::kron(a, dim_a, b, dim_b, out);
}

void kron_vec(std::span<const Complex> a, std::span<const Complex> b,
              std::span<Complex> out) {
  wide(out.size()) ? parallel::kron_vec(a, b, out)
                   : serial::kron_vec(a, b, out);
}

double norm_squared(std::span<const Complex> x) {
  return wide(x.size()) ? parallel::norm_squared(x) : serial::norm_squared(x);
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  return wide(x.size()) ? parallel::inner(x, y) : serial::inner(x, y);
}

double trace_product_real(std::span<const Complex> a,
                          std::span<const Complex> b, std::size_t dim) {
  return wide(dim * dim) ? parallel::trace_product_real(a, b, dim)
                         : serial::trace_product_real(a, b, dim);
}

MassSplit masked_mass(std::span<const Complex> x, std::uint64_t mask,
                      std::uint64_t value) {
  return wide(x.size()) ? parallel::masked_mass(x, mask, value)
                        : serial::masked_mass(x, mask, value);
}

void oracle_reflect(std::span<Complex> x, std::uint64_t mask,
                    std::uint64_t value) {
  wide(x.size()) ? parallel::oracle_reflect(x, mask, value)
                 : serial::oracle_reflect(x, mask, value);
}

void state_reflect(std::span<const Complex> psi, std::span<Complex> x) {
  wide(x.size()) ? parallel::state_reflect(psi, x)
                 : serial::state_reflect(psi, x);
}

}  // namespace qfair::kernels
