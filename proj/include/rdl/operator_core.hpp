#pragma once

// Dense operator algebra on bipartite Hilbert spaces: Kronecker products,
// partial traces, unitary conjugation, Hermitian operator bases and
// eigendecomposition. Everything is a free function template over
// Eigen::MatrixBase so expressions can be passed without materializing.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdl/errors.hpp"
#include "rdl/types.hpp"

namespace rdl {

template <typename Derived>
using PlainMatrix =
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

/// Largest absolute entry; zero for empty matrices.
template <typename Derived>
RealOf<Derived> max_abs(const Eigen::MatrixBase<Derived>& x) {
  if (x.size() == 0) return RealOf<Derived>(0);
  return x.cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& x, const char* what) {
  if (x.rows() != x.cols() || x.rows() == 0) {
    throw DimensionError(std::string(what) + " must be a non-empty square matrix, got " +
                         std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  }
}

/// Pauli matrix sigma^(k) for k = 1, 2, 3; k = 0 gives the 2x2 identity.
template <typename Real = double>
CMatrix<Real> pauli(int k) {
  using C = std::complex<Real>;
  CMatrix<Real> s = CMatrix<Real>::Zero(2, 2);
  switch (k) {
    case 0: s(0, 0) = 1; s(1, 1) = 1; break;
    case 1: s(0, 1) = 1; s(1, 0) = 1; break;
    case 2: s(0, 1) = C(0, -1); s(1, 0) = C(0, 1); break;
    case 3: s(0, 0) = 1; s(1, 1) = -1; break;
    default: throw InputError("pauli index must be in 0..3");
  }
  return s;
}

/// Kronecker product, (A (x) B)[i*dB + k, j*dB + l] = A[i,j] B[k,l].
template <typename DA, typename DB>
PlainMatrix<DA> tensor(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  static_assert(std::is_same_v<typename DA::Scalar, typename DB::Scalar>,
                "tensor operands must share a scalar type");
  const Index br = b.rows();
  const Index bc = b.cols();
  PlainMatrix<DA> out(a.rows() * br, a.cols() * bc);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

namespace detail {
template <typename Derived>
void require_joint(const Eigen::MatrixBase<Derived>& x, const BipartiteDims& dims) {
  if (dims.d_s < 1 || dims.d_e < 1) throw DimensionError("bipartite dimensions must be positive");
  if (x.rows() != dims.joint() || x.cols() != dims.joint()) {
    throw DimensionError("joint operator has side " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", expected " +
                         std::to_string(dims.joint()));
  }
}
}  // namespace detail

/// Tr_E: Y[i,j] = sum_k X[i*d_e + k, j*d_e + k].
template <typename Derived>
PlainMatrix<Derived> partial_trace_env(const Eigen::MatrixBase<Derived>& x,
                                       const BipartiteDims& dims) {
  detail::require_joint(x, dims);
  const Index de = dims.d_e;
  PlainMatrix<Derived> y(dims.d_s, dims.d_s);
  for (Index i = 0; i < dims.d_s; ++i)
    for (Index j = 0; j < dims.d_s; ++j) y(i, j) = x.block(i * de, j * de, de, de).trace();
  return y;
}

/// Tr_S: Z[k,l] = sum_i X[i*d_e + k, i*d_e + l].
template <typename Derived>
PlainMatrix<Derived> partial_trace_sys(const Eigen::MatrixBase<Derived>& x,
                                       const BipartiteDims& dims) {
  detail::require_joint(x, dims);
  const Index de = dims.d_e;
  PlainMatrix<Derived> z = PlainMatrix<Derived>::Zero(de, de);
  for (Index i = 0; i < dims.d_s; ++i) z += x.block(i * de, i * de, de, de);
  return z;
}

template <typename Derived>
RealOf<Derived> hermiticity_deviation(const Eigen::MatrixBase<Derived>& x) {
  return max_abs(x - x.adjoint());
}

template <typename Derived>
RealOf<Derived> unitarity_deviation(const Eigen::MatrixBase<Derived>& u) {
  return max_abs(u.adjoint() * u - PlainMatrix<Derived>::Identity(u.rows(), u.cols()));
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& x, double tol, const char* what) {
  require_square(x, what);
  const double dev = hermiticity_deviation(x);
  if (!(dev <= tol)) {
    throw HermiticityError(std::string(what) + " is not Hermitian (deviation " +
                               std::to_string(dev) + ")",
                           dev);
  }
}

template <typename Derived>
void require_unitary(const Eigen::MatrixBase<Derived>& u, double tol) {
  require_square(u, "unitary");
  const double dev = unitarity_deviation(u);
  if (!(dev <= tol)) {
    throw UnitarityError("matrix is not unitary (max |U^dag U - I| = " + std::to_string(dev) +
                             ")",
                         dev);
  }
}

/// U X U^dagger without validating U. Callers that have already checked U
/// once use this in inner loops.
template <typename DU, typename DX>
PlainMatrix<DX> conjugate(const Eigen::MatrixBase<DU>& u, const Eigen::MatrixBase<DX>& x) {
  return u * x * u.adjoint();
}

/// Ad_U(X) = U X U^dagger; U is checked for unitarity.
template <typename DU, typename DX>
PlainMatrix<DX> adjoint_action(const Eigen::MatrixBase<DU>& u, const Eigen::MatrixBase<DX>& x,
                               double tol_unitary = ToleranceConfig{}.unitary) {
  require_square(x, "operator");
  if (u.rows() != x.rows() || u.cols() != x.cols())
    throw DimensionError("unitary and operator sides differ");
  require_unitary(u, tol_unitary);
  return conjugate(u, x);
}

template <typename Real>
struct HermitianEigen {
  RVector<Real> values;   // ascending
  CMatrix<Real> vectors;  // orthonormal columns
};

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascend; every
/// eigenvector has its first component above 1e-10 in modulus made real
/// positive so the output is reproducible.
template <typename Derived>
HermitianEigen<RealOf<Derived>> hermitian_eigen(const Eigen::MatrixBase<Derived>& x) {
  using Real = RealOf<Derived>;
  require_square(x, "Hermitian operator");
  const CMatrix<Real> sym = (x + x.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  HermitianEigen<Real> out{es.eigenvalues(), es.eigenvectors()};
  for (Index c = 0; c < out.vectors.cols(); ++c) {
    for (Index r = 0; r < out.vectors.rows(); ++r) {
      const auto z = out.vectors(r, c);
      if (std::abs(z) > Real(1e-10)) {
        out.vectors.col(c) *= std::conj(z) / std::abs(z);
        out.vectors(r, c) = std::abs(z);
        break;
      }
    }
  }
  return out;
}

template <typename Derived>
RVector<RealOf<Derived>> hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& x) {
  using Real = RealOf<Derived>;
  require_square(x, "Hermitian operator");
  const CMatrix<Real> sym = (x + x.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

/// Hilbert-Schmidt inner product trace(A^dagger B).
template <typename DA, typename DB>
typename DA::Scalar hs_inner(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  return a.conjugate().cwiseProduct(b).sum();
}

/// Checks the density-matrix invariants; throws NotAStateError naming the
/// first one that fails.
template <typename Derived>
void check_density_matrix(const Eigen::MatrixBase<Derived>& rho,
                          const ToleranceConfig& tol = {}, const char* what = "state") {
  const double nan = std::nan("");
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw NotAStateError(std::string(what) + " is not a square matrix", nan);
  const double herm = hermiticity_deviation(rho);
  if (!(herm <= tol.herm))
    throw NotAStateError(std::string(what) + " is not Hermitian (deviation " +
                             std::to_string(herm) + ")",
                         nan);
  const double tr_err = std::abs(rho.trace() - typename Derived::Scalar(1));
  if (!(tr_err <= tol.trace))
    throw NotAStateError(std::string(what) + " does not have unit trace (|tr - 1| = " +
                             std::to_string(tr_err) + ")",
                         nan);
  const double lo = hermitian_eigenvalues(rho)(0);
  if (!(lo >= -tol.psd))
    throw NotAStateError(std::string(what) + " is not positive semidefinite (min eigenvalue " +
                             std::to_string(lo) + ")",
                         lo);
}

template <typename Derived>
bool is_density_matrix(const Eigen::MatrixBase<Derived>& rho, const ToleranceConfig& tol = {}) {
  try {
    check_density_matrix(rho, tol);
    return true;
  } catch (const NotAStateError&) {
    return false;
  }
}

// Orthonormal Hermitian basis of d x d operators. Index 0 is I/sqrt(d),
// then the d(d-1)/2 symmetric off-diagonal elements (j<k, lexicographic),
// the antisymmetric ones in the same order, and the d-1 diagonal ones.
// For d = 2 this is {I, sigma1, sigma2, sigma3} / sqrt(2).

namespace detail {
inline Index pair_count(Index d) { return d * (d - 1) / 2; }
}  // namespace detail

/// Coordinates c_a = <B_a, X> of X in the Hermitian basis, computed in O(d^2)
/// without forming the basis. Real for Hermitian X.
template <typename Derived>
CVector<RealOf<Derived>> hermitian_coordinates(const Eigen::MatrixBase<Derived>& x) {
  using Real = RealOf<Derived>;
  using C = std::complex<Real>;
  require_square(x, "operator");
  const Index d = x.rows();
  const Index p = detail::pair_count(d);
  const Real r2 = std::sqrt(Real(2));
  const C i(0, 1);
  CVector<Real> c(d * d);
  c(0) = C(x.trace()) / std::sqrt(Real(d));
  Index q = 0;
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k, ++q) {
      const C xjk = x(j, k);
      const C xkj = x(k, j);
      c(1 + q) = (xkj + xjk) / r2;
      c(1 + p + q) = (-i * xkj + i * xjk) / r2;
    }
  }
  for (Index l = 1; l < d; ++l) {
    C acc = 0;
    for (Index j = 0; j < l; ++j) acc += C(x(j, j));
    acc -= Real(l) * C(x(l, l));
    c(2 * p + l) = acc / std::sqrt(Real(l * (l + 1)));
  }
  return c;
}

/// Inverse of hermitian_coordinates: X = sum_a c_a B_a.
template <typename Derived>
CMatrix<RealOf<Derived>> from_hermitian_coordinates(const Eigen::MatrixBase<Derived>& c, Index d) {
  using Real = RealOf<Derived>;
  using C = std::complex<Real>;
  if (c.size() != d * d) throw DimensionError("coordinate vector length must be d^2");
  const Index p = detail::pair_count(d);
  const Real r2 = std::sqrt(Real(2));
  const C i(0, 1);
  CMatrix<Real> x = CMatrix<Real>::Identity(d, d) * (C(c(0)) / std::sqrt(Real(d)));
  Index q = 0;
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k, ++q) {
      const C s = C(c(1 + q)) / r2;
      const C a = C(c(1 + p + q)) / r2;
      x(j, k) += s - i * a;
      x(k, j) += s + i * a;
    }
  }
  for (Index l = 1; l < d; ++l) {
    const C w = C(c(2 * p + l)) / std::sqrt(Real(l * (l + 1)));
    for (Index j = 0; j < l; ++j) x(j, j) += w;
    x(l, l) -= Real(l) * w;
  }
  return x;
}

/// The d^2 basis matrices themselves, in coordinate order.
template <typename Real = double>
std::vector<CMatrix<Real>> hermitian_basis(Index d) {
  if (d < 1) throw DimensionError("basis dimension must be positive");
  std::vector<CMatrix<Real>> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  for (Index a = 0; a < d * d; ++a)
    basis.push_back(from_hermitian_coordinates(CVector<Real>::Unit(d * d, a), d));
  return basis;
}

/// D(rho, sigma) = (1/2) sum |lambda_i(rho - sigma)|.
template <typename DA, typename DB>
RealOf<DA> trace_distance(const Eigen::MatrixBase<DA>& rho, const Eigen::MatrixBase<DB>& sigma,
                          double tol_herm = ToleranceConfig{}.herm) {
  require_hermitian(rho, tol_herm, "first trace-distance argument");
  require_hermitian(sigma, tol_herm, "second trace-distance argument");
  if (rho.rows() != sigma.rows()) throw DimensionError("trace-distance arguments differ in size");
  return hermitian_eigenvalues(rho - sigma).cwiseAbs().sum() / RealOf<DA>(2);
}

}  // namespace rdl
