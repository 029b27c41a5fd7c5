#include "qfair/kernels.hpp"

#include <cassert>

namespace qfair::kernels::serial {

void matvec(std::span<const Complex> a, std::size_t dim,
            std::span<const Complex> x, std::span<Complex> y) {
  assert(a.size() == dim * dim && x.size() == dim && y.size() == dim);
  for (std::size_t r = 0; r < dim; ++r) {
    Complex acc{0.0, 0.0};
    const Complex* row = a.data() + r * dim;
    for (std::size_t c = 0; c < dim; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void matmul(std::span<const Complex> a, std::span<const Complex> b,
            std::size_t dim, std::span<Complex> c) {
  assert(a.size() == dim * dim && b.size() == dim * dim &&
         c.size() == dim * dim);
  for (std::size_t i = 0; i < dim * dim; ++i) c[i] = Complex{0.0, 0.0};
  // i-k-j order keeps the inner loop contiguous in both b and c.
  for (std::size_t i = 0; i < dim; ++i) {
    Complex* crow = c.data() + i * dim;
    for (std::size_t k = 0; k < dim; ++k) {
      const Complex aik = a[i * dim + k];
      if (aik == Complex{0.0, 0.0}) continue;
      const Complex* brow = b.data() + k * dim;
      for (std::size_t j = 0; j < dim; ++j) crow[j] += aik * brow[j];
    }
  }
}

void kron(std::span<const Complex> a, std::size_t dim_a,
          std::span<const Complex> b, std::size_t dim_b,
          std::span<Complex> out) {
  const std::size_t dim = dim_a * dim_b;
  assert(out.size() == dim * dim);
  for (std::size_t ra = 0; ra < dim_a; ++ra)
    for (std::size_t rb = 0; rb < dim_b; ++rb) {
      const std::size_t r = ra * dim_b + rb;
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
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i * b.size() + j] = a[i] * b[j];
}

double norm_squared(std::span<const Complex> x) {
  double acc = 0.0;
  for (const Complex& v : x) acc += std::norm(v);
  return acc;
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  assert(x.size() == y.size());
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

double trace_product_real(std::span<const Complex> a,
                          std::span<const Complex> b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      acc += (a[i * dim + j] * b[j * dim + i]).real();
  return acc;
}

MassSplit masked_mass(std::span<const Complex> x, std::uint64_t mask,
                      std::uint64_t value) {
  MassSplit split;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = std::norm(x[i]);
    if ((i & mask) == value)
      split.inside += p;
    else
      split.outside += p;
  }
  return split;
}

void oracle_reflect(std::span<Complex> x, std::uint64_t mask,
                    std::uint64_t value) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if ((i & mask) != value) x[i] = -x[i];
}

void state_reflect(std::span<const Complex> psi, std::span<Complex> x) {
  assert(psi.size() == x.size());
  const Complex overlap = 2.0 * inner(psi, x);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = overlap * psi[i] - x[i];
}

}  // namespace qfair::kernels::serial
