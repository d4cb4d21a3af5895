#include "rdl/map_builder.hpp"

#include <cmath>

#include "rdl/errors.hpp"
#include "rdl/operator_core.hpp"

namespace rdl {

const char* to_string(Extension e) { return e == Extension::zero ? "zero" : "none"; }

AssignmentMap build_assignment(const SubspaceV& v) {
  if (v.independent_pairs.empty()) throw InputError("subspace has no independent states");
  return AssignmentMap{v.dims, v.independent_pairs, v.tol_rank};
}

ComplexMatrix apply_assignment(const AssignmentMap& lambda, const ComplexMatrix& x) {
  const Expansion e = expand_over_pairs(x, lambda.pairs, lambda.tol_membership);
  const Index d = lambda.dims.joint();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < lambda.pairs.size(); ++i)
    out += e.coefficients(static_cast<Index>(i)) * lambda.pairs[i].joint;
  return out;
}

ComplexMatrix choi_from_matrix(const ComplexMatrix& matrix, Index d) {
  if (matrix.rows() != d * d || matrix.cols() != d * d)
    throw DimensionError("superoperator matrix must be d^2 x d^2");
  ComplexMatrix choi(d * d, d * d);
  for (Index j = 0; j < d; ++j) {
    for (Index k = 0; k < d; ++k) {
      ComplexMatrix unit = ComplexMatrix::Zero(d, d);
      unit(j, k) = 1.0;
      const ComplexVector image = matrix * hermitian_coordinates(unit);
      choi.block(j * d, k * d, d, d) = from_hermitian_coordinates(image, d);
    }
  }
  return choi;
}

Superoperator superoperator_from_map(Index d,
                                     const std::function<ComplexMatrix(const ComplexMatrix&)>& phi) {
  Superoperator s;
  s.d_s = d;
  s.matrix.resize(d * d, d * d);
  const auto basis = hermitian_basis(d);
  for (Index b = 0; b < d * d; ++b) {
    const ComplexMatrix image = phi(basis[static_cast<std::size_t>(b)]);
    if (image.rows() != d || image.cols() != d) throw DimensionError("map changes operator size");
    s.matrix.col(b) = hermitian_coordinates(image);
  }
  s.choi = choi_from_matrix(s.matrix, d);
  s.domain_projector = RealMatrix::Identity(d * d, d * d);
  s.extension = Extension::none;
  return s;
}

ComplexMatrix apply(const Superoperator& s, const ComplexMatrix& x) {
  if (x.rows() != s.d_s || x.cols() != s.d_s) throw DimensionError("operator size mismatch");
  return from_hermitian_coordinates(ComplexVector(s.matrix * hermitian_coordinates(x)), s.d_s);
}

Superoperator build_dynamical_map(const AssignmentMap& lambda, const ComplexMatrix& u,
                                  Extension extension,
                                  const std::optional<ConsistencyReport>& certificate,
                                  double tol_unitary) {
  const BipartiteDims dims = lambda.dims;
  if (u.rows() != dims.joint() || u.cols() != dims.joint())
    throw DimensionError("unitary has side " + std::to_string(u.rows()) + ", expected " +
                         std::to_string(dims.joint()));
  require_unitary(u, tol_unitary);

  const Index ds = dims.d_s;
  const Index full = ds * ds;
  const Index m = static_cast<Index>(lambda.pairs.size());
  if (m == 0) throw InputError("assignment map has no pairs");
  if (extension == Extension::none && m < full)
    throw IncompleteDomainError("V_S has dimension " + std::to_string(m) + " < " +
                                std::to_string(full) +
                                "; the map is undefined off V_S without an extension");

  RealMatrix reduced(full, m);
  for (Index i = 0; i < m; ++i)
    reduced.col(i) = hermitian_coordinates(lambda.pairs[static_cast<std::size_t>(i)].reduced).real();
  Eigen::HouseholderQR<RealMatrix> qr(reduced);
  const RealMatrix q = qr.householderQ() * RealMatrix::Identity(full, m);
  const RealMatrix projector =
      extension == Extension::zero ? RealMatrix(q * q.transpose()) : RealMatrix::Identity(full, full);

  // Images of the independent states: Tr_E(U rho_SE^(i) U^dagger).
  ComplexMatrix images(full, m);
  for (Index i = 0; i < m; ++i) {
    const auto& joint = lambda.pairs[static_cast<std::size_t>(i)].joint;
    images.col(i) = hermitian_coordinates(partial_trace_env(conjugate(u, joint), dims));
  }

  Superoperator s;
  s.d_s = ds;
  s.matrix.resize(full, full);
  for (Index b = 0; b < full; ++b) {
    const ComplexMatrix x = from_hermitian_coordinates(RealVector(projector.col(b)), ds);
    const Expansion e = expand_over_pairs(x, lambda.pairs, lambda.tol_membership);
    s.matrix.col(b) = images * e.coefficients;
  }
  s.choi = choi_from_matrix(s.matrix, ds);
  s.domain_projector = projector;
  s.extension = extension;
  s.consistency_certified = certificate.has_value() && certificate->consistent;
  return s;
}

SignedKraus decompose_signed_kraus(const Superoperator& s, double tol) {
  require_hermitian(s.choi, tol, "Choi matrix");
  const Index d = s.d_s;
  const auto eig = hermitian_eigen(s.choi);
  SignedKraus k;
  k.d_s = d;
  for (Index n = 0; n < eig.values.size(); ++n) {
    const double lambda = eig.values(n);
    if (std::abs(lambda) <= tol) continue;
    ComplexMatrix op(d, d);
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c) op(r, c) = eig.vectors(c * d + r, n);
    k.terms.push_back({lambda > 0 ? 1.0 : -1.0, std::sqrt(std::abs(lambda)) * op});
  }
  return k;
}

ComplexMatrix apply(const SignedKraus& k, const ComplexMatrix& x) {
  if (x.rows() != k.d_s || x.cols() != k.d_s) throw DimensionError("operator size mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(k.d_s, k.d_s);
  for (const auto& t : k.terms) out += t.e * t.op * x * t.op.adjoint();
  return out;
}

double normalization_error(const SignedKraus& k) {
  ComplexMatrix sum = ComplexMatrix::Zero(k.d_s, k.d_s);
  for (const auto& t : k.terms) sum += t.e * t.op.adjoint() * t.op;
  return max_abs(sum - ComplexMatrix::Identity(k.d_s, k.d_s));
}

Verdicts verdicts(const Superoperator& s, double tol) {
  Verdicts v;
  const Index d = s.d_s;
  v.hermiticity_error = hermiticity_deviation(s.choi);
  v.trace_error =
      max_abs(partial_trace_env(s.choi, BipartiteDims{d, d}) - ComplexMatrix::Identity(d, d));
  v.min_choi_eigenvalue = hermitian_eigenvalues(s.choi)(0);
  v.hermitian_preserving = v.hermiticity_error <= tol;
  v.trace_preserving = v.trace_error <= tol;
  v.completely_positive = v.hermitian_preserving && v.min_choi_eigenvalue >= -tol;
  return v;
}

}  // namespace rdl
