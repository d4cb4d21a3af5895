#include "rdl/subspace.hpp"

#include <algorithm>

#include "rdl/errors.hpp"
#include "rdl/operator_core.hpp"

namespace rdl {

namespace {

RealVector unit_coords(const ComplexMatrix& op) {
  RealVector v = hermitian_coordinates(op).real();
  const double n = v.norm();
  if (n > 0) v /= n;
  return v;
}

double min_singular(const RealMatrix& cols) {
  if (cols.cols() == 0) return 0.0;
  if (cols.cols() > cols.rows()) return 0.0;
  Eigen::JacobiSVD<RealMatrix> svd(cols);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

std::vector<ComplexMatrix> to_operators(const RealMatrix& coords, Index d) {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(coords.cols()));
  for (Index c = 0; c < coords.cols(); ++c)
    out.push_back(from_hermitian_coordinates(coords.col(c), d));
  return out;
}

}  // namespace

std::vector<ComplexMatrix> SubspaceV::span_basis() const {
  return to_operators(span_coords, dims.joint());
}

std::vector<ComplexMatrix> SubspaceV::kernel_basis() const {
  return to_operators(kernel_coords, dims.joint());
}

double smallest_singular_value(const std::vector<ComplexMatrix>& ops) {
  if (ops.empty()) return 0.0;
  const Index d = ops.front().rows();
  RealMatrix cols(d * d, static_cast<Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k) cols.col(static_cast<Index>(k)) = unit_coords(ops[k]);
  return min_singular(cols);
}

std::vector<IndependentPair> select_independent(const StateFamily& family, double tol_rank) {
  if (family.members.empty()) throw EmptyFamilyError("state family has no members");
  const Index ds = family.dims.d_s;
  const Index full = ds * ds;
  std::vector<IndependentPair> pairs;
  RealMatrix kept(full, 0);
  for (std::size_t k = 0; k < family.members.size() && kept.cols() < full; ++k) {
    ComplexMatrix reduced = partial_trace_env(family.members[k], family.dims);
    RealMatrix candidate(full, kept.cols() + 1);
    candidate << kept, unit_coords(reduced);
    if (min_singular(candidate) > tol_rank) {
      kept = std::move(candidate);
      pairs.push_back({std::move(reduced), family.members[k], k});
    }
  }
  return pairs;
}

SubspaceV build_subspace(const StateFamily& family, double tol_rank) {
  if (family.members.empty()) throw EmptyFamilyError("state family has no members");
  const BipartiteDims dims = family.dims;
  const Index d = dims.joint();
  const Index ds = dims.d_s;

  RealMatrix members(d * d, static_cast<Index>(family.members.size()));
  for (std::size_t k = 0; k < family.members.size(); ++k)
    members.col(static_cast<Index>(k)) = unit_coords(family.members[k]);

  Eigen::BDCSVD<RealMatrix> span_svd(members, Eigen::ComputeThinU);
  const auto& sv = span_svd.singularValues();
  const Index rank = static_cast<Index>((sv.array() > tol_rank).count());
  RealMatrix span = span_svd.matrixU().leftCols(rank);

  // Tr_E restricted to V, as a map from V-coordinates to system coordinates.
  RealMatrix trace_map(ds * ds, rank);
  for (Index c = 0; c < rank; ++c) {
    const ComplexMatrix x = from_hermitian_coordinates(span.col(c), d);
    trace_map.col(c) = hermitian_coordinates(partial_trace_env(x, dims)).real();
  }
  RealMatrix kernel(d * d, 0);
  if (rank > 0) {
    Eigen::JacobiSVD<RealMatrix> tr_svd(trace_map, Eigen::ComputeFullV);
    const Index image = static_cast<Index>((tr_svd.singularValues().array() > tol_rank).count());
    kernel = span * tr_svd.matrixV().rightCols(rank - image);
  }

  SubspaceV v;
  v.dims = dims;
  v.span_coords = std::move(span);
  v.kernel_coords = std::move(kernel);
  v.independent_pairs = select_independent(family, tol_rank);
  v.tol_rank = tol_rank;
  return v;
}

Expansion expand_over_pairs(const ComplexMatrix& x, const std::vector<IndependentPair>& pairs,
                            double tol) {
  if (pairs.empty()) throw InputError("no independent states to expand over");
  const Index ds = pairs.front().reduced.rows();
  if (x.rows() != ds || x.cols() != ds)
    throw DimensionError("operator to expand must be " + std::to_string(ds) + "x" +
                         std::to_string(ds));
  const Index m = static_cast<Index>(pairs.size());
  RealMatrix basis(ds * ds, m);
  for (Index i = 0; i < m; ++i)
    basis.col(i) = hermitian_coordinates(pairs[static_cast<std::size_t>(i)].reduced).real();
  const ComplexVector target = hermitian_coordinates(x);

  const auto qr = basis.colPivHouseholderQr();
  const RealVector re = qr.solve(RealVector(target.real()));
  const RealVector im = qr.solve(RealVector(target.imag()));

  Expansion e;
  e.coefficients = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
  ComplexMatrix recon = ComplexMatrix::Zero(ds, ds);
  for (Index i = 0; i < m; ++i) recon += e.coefficients(i) * pairs[static_cast<std::size_t>(i)].reduced;
  e.residual = max_abs(x - recon);
  if (!(e.residual <= tol))
    throw NotInVSError("operator is not in V_S (residual " + std::to_string(e.residual) + ")",
                       e.residual);
  return e;
}

Expansion expand_in_V(const ComplexMatrix& x, const SubspaceV& v, double tol) {
  return expand_over_pairs(x, v.independent_pairs, tol);
}

JointExpansion decompose_in_V(const ComplexMatrix& x, const SubspaceV& v, double tol) {
  const Index d = v.dims.joint();
  if (x.rows() != d || x.cols() != d)
    throw DimensionError("joint operator must be " + std::to_string(d) + "x" + std::to_string(d));
  const Expansion reduced = expand_in_V(partial_trace_env(x, v.dims), v, tol);

  JointExpansion out;
  out.coefficients = reduced.coefficients;
  out.kernel_part = x;
  for (Index i = 0; i < v.m(); ++i)
    out.kernel_part -= reduced.coefficients(i) * v.independent_pairs[static_cast<std::size_t>(i)].joint;

  const ComplexVector k = hermitian_coordinates(out.kernel_part);
  const ComplexVector off =
      k - v.kernel_coords.cast<Complex>() * (v.kernel_coords.transpose().cast<Complex>() * k);
  const double outside = max_abs(from_hermitian_coordinates(off, d));
  out.residual = std::max(reduced.residual, outside);
  if (!(outside <= tol))
    throw NotInVSError("operator is not in V (distance " + std::to_string(outside) + ")",
                       outside);
  return out;
}

}  // namespace rdl
