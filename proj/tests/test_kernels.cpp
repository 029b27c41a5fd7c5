#include <gtest/gtest.h>
#include <omp.h>

#include <vector>

#include "qfair/kernels.hpp"
#include "random_states.hpp"

namespace {

using qfair::Complex;
namespace k = qfair::kernels;

class KernelParity : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override {
    saved_threads_ = omp_get_max_threads();
    omp_set_num_threads(4);
  }
  void TearDown() override { omp_set_num_threads(saved_threads_); }

  qfair::testkit::RandomStates rs_{GetParam()};

 private:
  int saved_threads_ = 1;
};

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

TEST_P(KernelParity, MatvecAndMatmulMatchSerial) {
  const std::size_t dim = GetParam();
  const auto a = rs_.gaussian_vector(dim * dim);
  const auto b = rs_.gaussian_vector(dim * dim);
  const auto x = rs_.gaussian_vector(dim);

  std::vector<Complex> ys(dim), yp(dim);
  k::serial::matvec(a, dim, x, ys);
  k::parallel::matvec(a, dim, x, yp);
  EXPECT_LT(max_diff(ys, yp), 1e-12 * static_cast<double>(dim));

  std::vector<Complex> cs(dim * dim), cp(dim * dim);
  k::serial::matmul(a, b, dim, cs);
  k::parallel::matmul(a, b, dim, cp);
  EXPECT_LT(max_diff(cs, cp), 1e-12 * static_cast<double>(dim));
}

TEST_P(KernelParity, ReductionsMatchSerial) {
  const std::size_t dim = GetParam();
  const auto x = rs_.gaussian_vector(dim * dim);
  const auto y = rs_.gaussian_vector(dim * dim);
  EXPECT_NEAR(k::serial::norm_squared(x), k::parallel::norm_squared(x), 1e-9);
  EXPECT_LT(std::abs(k::serial::inner(x, y) - k::parallel::inner(x, y)), 1e-9);
  EXPECT_NEAR(k::serial::trace_product_real(x, y, dim), k::parallel::trace_product_real(x, y, dim),
              1e-9);
  const auto ms = k::serial::masked_mass(x, 0b101, 0b100);
  const auto mp = k::parallel::masked_mass(x, 0b101, 0b100);
  EXPECT_NEAR(ms.inside, mp.inside, 1e-9);
  EXPECT_NEAR(ms.outside, mp.outside, 1e-9);
}

TEST_P(KernelParity, ReflectionsAndKronMatchSerial) {
  const std::size_t dim = GetParam();
  const auto psi = rs_.gaussian_vector(dim * 4);
  auto xs = rs_.gaussian_vector(dim * 4);
  auto xp = xs;
  k::serial::oracle_reflect(xs, 0b10, 0b10);
  k::parallel::oracle_reflect(xp, 0b10, 0b10);
  EXPECT_EQ(xs, xp);
  k::serial::state_reflect(psi, xs);
  k::parallel::state_reflect(psi, xp);
  EXPECT_LT(max_diff(xs, xp), 1e-9);

  const auto a = rs_.gaussian_vector(4);
  const auto b = rs_.gaussian_vector(dim * dim);
  std::vector<Complex> ks(4 * dim * dim), kp(4 * dim * dim);
  k::serial::kron(a, 2, b, dim, ks);
  k::parallel::kron(a, 2, b, dim, kp);
  EXPECT_EQ(ks, kp);
  std::vector<Complex> vs(2 * dim), vp(2 * dim);
  k::serial::kron_vec(std::span(a).first(2), std::span(b).first(dim), vs);
  k::parallel::kron_vec(std::span(a).first(2), std::span(b).first(dim), vp);
  EXPECT_EQ(vs, vp);
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelParity, ::testing::Values(2, 8, 64, 256));

TEST(Kernels, KronFollowsQubitOrdering) {
  // |1> (x) |0> is index 2 when qubit 1 is the high bit.
  const std::vector<Complex> one{0.0, 1.0}, zero{1.0, 0.0};
  std::vector<Complex> out(4);
  k::kron_vec(one, zero, out);
  EXPECT_EQ(out, (std::vector<Complex>{0.0, 0.0, 1.0, 0.0}));
}

TEST(Kernels, InnerConjugatesLeftArgument) {
  const std::vector<Complex> x{{0.0, 1.0}}, y{{0.0, 1.0}};
  EXPECT_EQ(k::inner(x, y), Complex(1.0, 0.0));
}

TEST(Kernels, OracleReflectNegatesComplement) {
  std::vector<Complex> x{1.0, 1.0, 1.0, 1.0};
  k::oracle_reflect(x, 0b10, 0b10);
  EXPECT_EQ(x, (std::vector<Complex>{-1.0, -1.0, 1.0, 1.0}));
}

TEST(Kernels, StateReflectFixesPsi) {
  const std::vector<Complex> psi{0.6, 0.8};
  std::vector<Complex> x = psi;
  k::state_reflect(psi, x);
  EXPECT_NEAR(std::abs(x[0] - psi[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(x[1] - psi[1]), 0.0, 1e-15);
  std::vector<Complex> perp{0.8, -0.6};
  k::state_reflect(psi, perp);
  EXPECT_NEAR(std::abs(perp[0] + 0.8), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(perp[1] - 0.6), 0.0, 1e-15);
}

}  // namespace
