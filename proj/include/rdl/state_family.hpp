#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdl/types.hpp"

namespace rdl {

/// A finite set of joint density matrices sharing one bipartite split.
struct StateFamily {
  BipartiteDims dims;
  std::vector<ComplexMatrix> members;
  std::string label;
};

/// Validates and wraps members: non-empty, common side d_s * d_e, and every
/// member a density matrix.
StateFamily make_family(const BipartiteDims& dims, std::vector<ComplexMatrix> members,
                        std::string label, const ToleranceConfig& tol = {});

/// Tr_E of every member, in family order.
std::vector<ComplexMatrix> reduced_states(const StateFamily& family);

/// Bloch-type parameters of a two-qubit state:
/// rho = (1/4)(I + a.sigma (x) I + I (x) b.sigma + sum g_ij sigma_i (x) sigma_j).
/// gamma(i, j) pairs system Pauli i+1 with environment Pauli j+1.
struct TwoQubitParams {
  Eigen::Vector3d alpha = Eigen::Vector3d::Zero();
  Eigen::Vector3d beta = Eigen::Vector3d::Zero();
  Eigen::Matrix3d gamma = Eigen::Matrix3d::Zero();
};

/// Builds the 4x4 operator from the parameters and validates it is a
/// state. Throws InputError for parameters outside [-1, 1] and
/// NotAStateError (carrying the minimum eigenvalue) if not PSD.
ComplexMatrix assemble_two_qubit(const TwoQubitParams& p, const ToleranceConfig& tol = {});

/// Exact inverse of the expansion via Hilbert-Schmidt projections,
/// e.g. gamma_ij = trace((sigma_i (x) sigma_j) rho).
TwoQubitParams extract_two_qubit(const ComplexMatrix& rho);

/// {rho_S (x) omega_E}; the label records omega_E.
StateFamily product_family(const std::vector<ComplexMatrix>& states_s, const ComplexMatrix& omega_e,
                           const ToleranceConfig& tol = {});

struct RejectedSample {
  std::size_t index;
  std::string reason;
  double min_eigenvalue;  // NaN unless rejected for positivity
};

struct ConstrainedFamily {
  StateFamily family;
  std::vector<TwoQubitParams> accepted;
  std::vector<RejectedSample> rejected;
};

/// Two-qubit states whose gamma_11 and gamma_21 are affine in alpha:
/// gamma_11 = a11 + b11.alpha, gamma_21 = a21 + b21.alpha. Those entries
/// of each sample are overwritten; samples that leave [-1, 1] or lose
/// positivity are reported and skipped. Throws EmptyFamilyError when
/// nothing survives.
ConstrainedFamily constrained_two_qubit_family(double a11, double a21, const Eigen::Vector3d& b11,
                                               const Eigen::Vector3d& b21,
                                               const std::vector<TwoQubitParams>& samples,
                                               const ToleranceConfig& tol = {});

/// Seeded sampler: every alpha, beta and gamma entry uniform in
/// [-scale, scale]. Results are not guaranteed to be states.
std::vector<TwoQubitParams> uniform_two_qubit_samples(std::size_t count, std::uint64_t seed,
                                                      double scale);

/// The six qubit Pauli eigenstates |0>,|1>,|+>,|->,|+i>,|-i>.
std::vector<ComplexMatrix> pauli_eigenstates();

}  // namespace rdl
