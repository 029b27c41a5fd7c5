#include "qfair/metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "eigen_bridge.hpp"

namespace qfair::metrics {

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* what) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()));
}

// Eigenvalues below this are eigensolver roundoff; their square roots would leak ~1e-8 into F.
constexpr double kSupportFloor = 1e-14;

detail::EigenMatrix support_factor(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<detail::EigenMatrix> es(detail::EigenMatrix(detail::as_eigen(m)));
  const Eigen::VectorXd& values = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values[i] > kSupportFloor) keep.push_back(i);
  detail::EigenMatrix out(values.size(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]) * std::sqrt(values[keep[k]]);
  return out;
}

}  // namespace

std::string_view to_string(MetricChoice m) {
  switch (m) {
    case MetricChoice::trace: return "trace";
    case MetricChoice::fidelity_angle: return "fidelity-angle";
    case MetricChoice::relative_entropy: return "relative-entropy";
  }
  return "trace";
}

MetricChoice parse_metric(std::string_view name) {
  if (name == "trace") return MetricChoice::trace;
  if (name == "fidelity-angle" || name == "fidelity_angle") return MetricChoice::fidelity_angle;
  if (name == "relative-entropy" || name == "relative_entropy")
    return MetricChoice::relative_entropy;
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

int hamming(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) throw InvalidArgument("hamming: length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

int hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw InvalidArgument("hamming: length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "trace_distance");
  const Eigensystem es = eigh(rho.matrix() - sigma.matrix());
  double sum = 0.0;
  for (double v : es.values) sum += std::abs(v);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "fidelity");
  // F = ||A^dagger B||_1 with rho = A A^dagger, sigma = B B^dagger over the numerical support.
  const detail::EigenMatrix a = support_factor(rho.matrix());
  const detail::EigenMatrix b = support_factor(sigma.matrix());
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  const detail::EigenMatrix overlap = a.adjoint() * b;
  const double f = Eigen::JacobiSVD<detail::EigenMatrix>(overlap).singularValues().sum();
  return std::clamp(f, 0.0, 1.0);
}

double fidelity_angle(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::acos(fidelity(rho, sigma));
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "relative_entropy");
  const Eigensystem r = eigh(rho.matrix());
  const Eigensystem s = eigh(sigma.matrix());
  const std::size_t dim = rho.dim();

  double neg_entropy = 0.0;  // tr(rho log rho)
  for (double p : r.values)
    if (p > kKernelThreshold) neg_entropy += p * std::log2(p);

  // tr(rho log sigma) = sum_l <v_l|rho|v_l> log q_l over sigma's eigenbasis.
  double cross = 0.0;
  for (std::size_t l = 0; l < dim; ++l) {
    std::vector<Complex> v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = s.vectors(i, l);
    const std::vector<Complex> rv = rho.matrix() * std::span<const Complex>(v);
    const double weight = kernels::inner(v, rv).real();
    const double q = s.values[l];
    if (q <= kKernelThreshold) {
      if (weight > kKernelThreshold) return kInfinite;
      continue;
    }
    cross += weight * std::log2(q);
  }
  return neg_entropy - cross;
}

double distance(MetricChoice metric, const DensityMatrix& rho, const DensityMatrix& sigma) {
  switch (metric) {
    case MetricChoice::trace: return trace_distance(rho, sigma);
    case MetricChoice::fidelity_angle: return fidelity_angle(rho, sigma);
    case MetricChoice::relative_entropy: return relative_entropy(rho, sigma);
  }
  throw InvalidArgument("unknown metric");
}

}  // namespace qfair::metrics
