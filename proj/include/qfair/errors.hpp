#pragma once

#include <stdexcept>
#include <string>

namespace qfair {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: malformed shapes, out-of-range parameters, invalid
// partitions, unparsable files.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A measurement outcome whose probability is (numerically) zero was
// requested; the post-measurement state is undefined.
class ZeroProbabilityOutcome : public Error {
 public:
  using Error::Error;
};

// Protected-subspace mass of 0 or 1: the oracle marks nothing or everything,
// so amplitude amplification has no rotation plane.
class DegenerateMass : public Error {
 public:
  using Error::Error;
};

// Sequential measurements were requested for operators that do not commute.
class NonCommutingMeasurement : public Error {
 public:
  using Error::Error;
};

// A computed result broke a structural invariant beyond tolerance (e.g. the
// post-repair mass disagrees with the closed-form prediction).
class NumericalInvariantViolation : public Error {
 public:
  using Error::Error;
};

// Structural tolerances (normalization, hermiticity, completeness) and the
// looser tolerance used for composed numerical results.
struct Tolerances {
  double structural = 1e-10;
  double composed = 1e-9;

  // `composed` is overridden by QFAIR_TOLERANCE when that variable holds a
  // positive finite number.
  static Tolerances from_env();
};

}  // namespace qfair
