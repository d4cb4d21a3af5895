#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rdl/consistency.hpp"
#include "rdl/subspace.hpp"
#include "rdl/types.hpp"

namespace rdl {

/// Lambda_S: V_S -> V, fixed by Lambda_S(rho_S^(i)) = rho_SE^(i) and
/// extended linearly.
struct AssignmentMap {
  BipartiteDims dims;
  std::vector<IndependentPair> pairs;
  double tol_membership = 1e-8;
};

AssignmentMap build_assignment(const SubspaceV& v);

/// sum d_i rho_SE^(i) for x = sum d_i rho_S^(i). Throws NotInVSError when x
/// is outside V_S.
ComplexMatrix apply_assignment(const AssignmentMap& lambda, const ComplexMatrix& x);

/// How a map known only on V_S is extended to all operators: `zero` maps
/// the Hilbert-Schmidt orthogonal complement of V_S to zero, `none`
/// refuses to build unless V_S is everything.
enum class Extension { zero, none };

const char* to_string(Extension e);

/// Linear map on d_s x d_s operators.
///   matrix(a, b) = <B_a, Phi(B_b)> in hermitian_basis(d_s) coordinates;
///   choi = sum_{jk} |j><k| (x) Phi(|j><k|), unnormalized, so
///   choi(j*d + r, k*d + c) = Phi(|j><k|)(r, c) and TP <=> Tr_out choi = I.
struct Superoperator {
  Index d_s = 2;
  ComplexMatrix matrix;
  ComplexMatrix choi;
  RealMatrix domain_projector;  // projector onto V_S in Hermitian coordinates
  Extension extension = Extension::none;
  bool consistency_certified = false;
};

/// Wraps an arbitrary linear map given as a callable on d x d operators.
Superoperator superoperator_from_map(Index d,
                                     const std::function<ComplexMatrix(const ComplexMatrix&)>& phi);

ComplexMatrix choi_from_matrix(const ComplexMatrix& matrix, Index d);

/// Phi(x) via the superoperator matrix.
ComplexMatrix apply(const Superoperator& s, const ComplexMatrix& x);

/// Phi_S = Tr_E o Ad_U o Lambda_S, assembled column by column on the
/// Hermitian basis (projected onto V_S first under Extension::zero).
/// The result records whether a passing consistency report was supplied;
/// an inconsistent V still yields the map fixed by the chosen pairs.
Superoperator build_dynamical_map(const AssignmentMap& lambda, const ComplexMatrix& u,
                                  Extension extension = Extension::zero,
                                  const std::optional<ConsistencyReport>& certificate = std::nullopt,
                                  double tol_unitary = ToleranceConfig{}.unitary);

/// Phi(rho) = sum_i e_i E_i rho E_i^dagger with e_i = +-1.
struct SignedKraus {
  struct Term {
    double e;
    ComplexMatrix op;
  };
  Index d_s = 2;
  std::vector<Term> terms;
};

/// Eigendecomposes the Choi matrix. Each eigenpair with |lambda| > tol gives
/// e = sign(lambda) and E[r][c] = sqrt|lambda| v[c*d + r]; terms follow
/// ascending eigenvalue, so negative terms come first.
SignedKraus decompose_signed_kraus(const Superoperator& s, double tol = 1e-10);

ComplexMatrix apply(const SignedKraus& k, const ComplexMatrix& x);

/// max |sum e_i E_i^dagger E_i - I|.
double normalization_error(const SignedKraus& k);

struct Verdicts {
  bool hermitian_preserving = false;
  bool trace_preserving = false;
  bool completely_positive = false;
  double hermiticity_error = 0.0;  // max |choi - choi^dagger|
  double trace_error = 0.0;        // max |Tr_out choi - I|
  double min_choi_eigenvalue = 0.0;
};

Verdicts verdicts(const Superoperator& s, double tol = 1e-9);

}  // namespace rdl
