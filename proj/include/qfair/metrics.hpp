#pragma once

// Distances between bit strings and between quantum states.

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

#include "qfair/linalg.hpp"

namespace qfair::metrics {

enum class MetricChoice { trace, fidelity_angle, relative_entropy };

std::string_view to_string(MetricChoice m);
// Accepts "trace", "fidelity-angle" and "relative-entropy" (underscores also).
MetricChoice parse_metric(std::string_view name);

// Returned by relative_entropy when supp(rho) is not inside supp(sigma).
inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

// Eigenvalues of sigma below this are treated as exact zeros.
inline constexpr double kKernelThreshold = 1e-12;

int hamming(std::string_view a, std::string_view b);
int hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

// (1/2) tr|rho - sigma|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// arccos F, in [0, pi/2].
double fidelity_angle(const DensityMatrix& rho, const DensityMatrix& sigma);

// S(rho || sigma) = tr(rho log rho) - tr(rho log sigma) in bits, or kInfinite.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

double distance(MetricChoice metric, const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace qfair::metrics
