#pragma once

#include <vector>

#include "rdl/state_family.hpp"
#include "rdl/types.hpp"

namespace rdl {

/// A reduced state rho_S^(i) together with the family member it came from.
struct IndependentPair {
  ComplexMatrix reduced;
  ComplexMatrix joint;
  std::size_t member_index = 0;
};

/// V = span_C of a family, stored in coordinates of
/// hermitian_basis(d_s * d_e). Every basis vector is real there, so the
/// corresponding operators are Hermitian.
struct SubspaceV {
  BipartiteDims dims;
  RealMatrix span_coords;    // orthonormal columns spanning V
  RealMatrix kernel_coords;  // orthonormal columns spanning {Y in V : Tr_E Y = 0}
  std::vector<IndependentPair> independent_pairs;
  double tol_rank = 1e-8;

  Index dim() const { return span_coords.cols(); }
  Index kernel_dim() const { return kernel_coords.cols(); }
  Index m() const { return static_cast<Index>(independent_pairs.size()); }

  std::vector<ComplexMatrix> span_basis() const;
  std::vector<ComplexMatrix> kernel_basis() const;
};

/// Greedy scan in family order: a member is kept when its (unit-normalized)
/// reduced-state coordinates raise the numerical rank, i.e. the smallest
/// singular value of the kept columns stays above tol_rank.
std::vector<IndependentPair> select_independent(const StateFamily& family, double tol_rank);

SubspaceV build_subspace(const StateFamily& family, double tol_rank = ToleranceConfig{}.rank);

struct Expansion {
  ComplexVector coefficients;  // d_i over the independent reduced states
  double residual = 0.0;       // max |x - sum d_i rho_S^(i)|
};

/// Least-squares expansion of x over independent reduced states. Throws
/// NotInVSError when the residual exceeds tol.
Expansion expand_over_pairs(const ComplexMatrix& x, const std::vector<IndependentPair>& pairs,
                            double tol);

/// x in V_S written as sum d_i rho_S^(i).
Expansion expand_in_V(const ComplexMatrix& x, const SubspaceV& v, double tol);

struct JointExpansion {
  ComplexVector coefficients;
  ComplexMatrix kernel_part;  // X - sum d_i rho_SE^(i), traceless over E
  double residual = 0.0;      // worst of the reduced residual and distance of X from V
};

/// X in V written as sum d_i rho_SE^(i) + Y with Tr_E Y = 0 and Y in the
/// kernel span. Throws NotInVSError when X is not in V within tol.
JointExpansion decompose_in_V(const ComplexMatrix& x, const SubspaceV& v, double tol);

/// Smallest singular value of the coordinate matrix whose columns are the
/// unit-normalized Hermitian coordinates of the given operators.
double smallest_singular_value(const std::vector<ComplexMatrix>& ops);

}  // namespace rdl
