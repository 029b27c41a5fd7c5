#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfair/linalg.hpp"

namespace qfair::measurement {

struct OutcomeDistribution {
  std::vector<std::string> labels;
  std::vector<double> probabilities;

  // Throws InvalidArgument for an unknown label.
  double at(std::string_view label) const;
};

// p(m) = tr(E_m rho). Probabilities within tol of [0, 1] are clamped into it.
OutcomeDistribution born_probabilities(const DensityMatrix& rho, const Povm& povm,
                                       double tol = 1e-10);
OutcomeDistribution born_probabilities(const StateVector& psi, const Povm& povm,
                                       double tol = 1e-10);

struct PostMeasurement {
  StateVector state;
  double probability;
};

// M|psi> / sqrt(<psi|M^dag M|psi>). Throws ZeroProbabilityOutcome when the
// outcome probability is <= 1e-12.
PostMeasurement post_measurement_state(const StateVector& psi, const MatrixOperator& m);

// Identifier of the sampling scheme: std::mt19937_64 seeded with the given
// seed, 53-bit uniforms from the top bits of each draw, inverse CDF over the
// exact distribution. Changing any of that must change this string.
inline constexpr std::string_view kSamplerId = "mt19937_64/u53-inverse-cdf/v1";

struct Histogram {
  std::vector<std::string> labels;
  std::vector<std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::string sampler{kSamplerId};

  std::vector<double> frequencies() const;
  friend bool operator==(const Histogram&, const Histogram&) = default;
};

Histogram sample(const OutcomeDistribution& dist, std::uint64_t shots, std::uint64_t seed);
Histogram sample(const StateVector& psi, const Povm& povm, std::uint64_t shots,
                 std::uint64_t seed);
Histogram sample(const DensityMatrix& rho, const Povm& povm, std::uint64_t shots,
                 std::uint64_t seed);

// Computational-basis sampling straight from |c_i|^2, without a dense POVM.
Histogram sample_basis(const StateVector& psi, std::uint64_t shots, std::uint64_t seed);

// Schmidt-rank test for two-qubit pure states.
bool entangled_state_check(const StateVector& psi);

// (1/2) sum |p - q|.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace qfair::measurement
