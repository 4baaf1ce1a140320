#pragma once

#include <Eigen/Dense>

namespace patholab {

// Small dense vectors/matrices, stack-allocated up to dimension 8.
// Every coefficient field in the catalog lives in R^n with 2 <= n <= 8.
inline constexpr int kMaxDim = 8;

using VecN = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using MatN = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Spectral norm of a symmetric matrix (largest eigenvalue magnitude).
inline double spectral_norm_symmetric(const MatN& m) {
  Eigen::SelfAdjointEigenSolver<MatN> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace patholab
