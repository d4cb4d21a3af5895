#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace rdl {

using Index = Eigen::Index;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealMatrix = RMatrix<double>;
using RealVector = RVector<double>;

/// Dimensions of a system-environment split. Joint operators use the
/// system-major Kronecker index i * d_e + k.
struct BipartiteDims {
  Index d_s = 2;
  Index d_e = 1;

  Index joint() const { return d_s * d_e; }

  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

/// Absolute max-norm thresholds shared by every module.
struct ToleranceConfig {
  double herm = 1e-9;
  double trace = 1e-9;
  double unitary = 1e-9;
  double psd = 1e-9;
  double rank = 1e-8;
  double consistency = 1e-8;

  static ToleranceConfig uniform(double tol) {
    return {tol, tol, tol, tol, tol, tol};
  }
};

}  // namespace rdl
