#pragma once

#include <cstdint>
#include <optional>

#include "rdl/state_family.hpp"
#include "rdl/subspace.hpp"
#include "rdl/types.hpp"

namespace rdl {

enum class ConsistencyStatus {
  consistent,    // max_violation <= tolerance
  marginal,      // tolerance < max_violation <= 10 * tolerance
  inconsistent,  // max_violation > 10 * tolerance
  vacuous,       // nothing was tested (pairwise check only)
};

const char* to_string(ConsistencyStatus s);

struct ConsistencyReport {
  bool consistent = true;
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::optional<ComplexMatrix> witness;
  std::optional<std::size_t> pairs_tested;
  ConsistencyStatus status = ConsistencyStatus::consistent;
};

/// max |Tr_E(U Y U^dagger)|; U is trusted to be unitary.
double evolution_violation(const ComplexMatrix& u, const ComplexMatrix& y, const BipartiteDims& dims);

/// U-consistency of V: Tr_E o Ad_U must annihilate the traceless kernel.
/// Checking the orthonormal kernel basis certifies the whole kernel by
/// linearity. The witness is the basis element with the worst violation.
ConsistencyReport check_subspace_consistency(const SubspaceV& v, const ComplexMatrix& u,
                                             double tol = ToleranceConfig{}.consistency,
                                             double tol_unitary = ToleranceConfig{}.unitary);

/// Tests every pair of members with equal marginals (within tol_rank) for
/// equal evolved marginals. Vacuously consistent when no such pair exists.
ConsistencyReport check_pairwise_consistency(const StateFamily& family, const ComplexMatrix& u,
                                             double tol = ToleranceConfig{}.consistency,
                                             double tol_rank = ToleranceConfig{}.rank,
                                             double tol_unitary = ToleranceConfig{}.unitary);

/// Samples equal-marginal pairs from the convex hull of the family and
/// compares their evolved marginals. Each trial draws a random convex
/// combination rho of members, expands Tr_E rho = sum a_i rho_S^(i) over
/// the independent reduced states, and forms
///   sigma_hat   = (rho + sum_{a_i<0} |a_i| rho_SE^(i)) / A,
///   sigma_tilde = (sum_{a_i>0} a_i rho_SE^(i)) / A,   A = sum_{a_i>0} a_i,
/// both convex combinations of members with sigma_hat - sigma_tilde = Y / A.
ConsistencyReport check_hull_consistency(const StateFamily& family, const ComplexMatrix& u,
                                         double tol, int trials, std::uint64_t seed,
                                         double tol_rank = ToleranceConfig{}.rank,
                                         double tol_unitary = ToleranceConfig{}.unitary);

}  // namespace rdl
