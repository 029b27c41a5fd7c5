#pragma once

#include <Eigen/Dense>

#include "qfair/linalg.hpp"

namespace qfair::detail {

using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const EigenMatrix> as_eigen(const CMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  return {m.data().data(), n, n};
}

inline CMatrix from_eigen(const EigenMatrix& m) {
  CMatrix out(static_cast<std::size_t>(m.rows()));
  Eigen::Map<EigenMatrix>(out.data().data(), m.rows(), m.cols()) = m;
  return out;
}

}  // namespace qfair::detail
