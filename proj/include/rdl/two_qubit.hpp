#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rdl/consistency.hpp"
#include "rdl/map_builder.hpp"
#include "rdl/state_family.hpp"
#include "rdl/subspace.hpp"

namespace rdl {

/// H = (omega / 2) sigma3 (x) sigma1 with hbar = 1; only omega * t matters.
struct ModelParams {
  double omega = 1.0;
  double t = 0.0;

  double phase() const { return omega * t; }
};

ComplexMatrix model_hamiltonian(double omega);

/// exp(-i H t) = cos(wt/2) I - i sin(wt/2) sigma3 (x) sigma1, since
/// (sigma3 (x) sigma1)^2 = I.
ComplexMatrix model_unitary(const ModelParams& p);

/// U |psi>|phi> = |phi>|psi> on C^d (x) C^d.
ComplexMatrix swap_unitary(Index d);

/// alpha_i = trace(sigma_i rho) for a qubit operator.
Eigen::Vector3d bloch_vector(const ComplexMatrix& rho);

/// Closed-form system Bloch vector after the model evolution:
/// (a1 cos wt - g21 sin wt, a2 cos wt + g11 sin wt, a3).
Eigen::Vector3d analytic_bloch_step(const Eigen::Vector3d& alpha, double gamma11, double gamma21,
                                    double wt);

/// gamma_11 = a11 + b11.alpha, gamma_21 = a21 + b21.alpha.
struct LinearityCoefficients {
  double a11 = 0.0;
  double a21 = 0.0;
  Eigen::Vector3d b11 = Eigen::Vector3d::Zero();
  Eigen::Vector3d b21 = Eigen::Vector3d::Zero();
};

struct LinearityRecord {
  Eigen::Vector3d alpha = Eigen::Vector3d::Zero();
  double gamma11 = 0.0;
  double gamma21 = 0.0;
};

/// Reads alpha, gamma_11 and gamma_21 off a 4x4 joint state.
LinearityRecord linearity_record(const ComplexMatrix& rho_se);

/// Forward model: the record a state with this alpha would need to satisfy
/// the affine constraint.
LinearityRecord constrained_record(const LinearityCoefficients& c, const Eigen::Vector3d& alpha);

/// Solves [1 alpha^(j)] (a, b) = gamma^(j) for both gamma_11 and gamma_21
/// from exactly four records. Throws SingularSystemError when the 4x4
/// matrix is singular or its condition number exceeds 1e12.
LinearityCoefficients solve_linearity_coefficients(std::span<const LinearityRecord> records);

struct LinearityResidual {
  double gamma11 = 0.0;
  double gamma21 = 0.0;
};

/// gamma - a - b.alpha for every member; zero residuals everywhere is
/// exactly the linearity condition for the model Hamiltonian.
std::vector<LinearityResidual> linearity_residuals(const StateFamily& family,
                                                   const LinearityCoefficients& c);

ConstrainedFamily constrained_two_qubit_family(const LinearityCoefficients& c,
                                               const std::vector<TwoQubitParams>& samples,
                                               const ToleranceConfig& tol = {});

struct PairDistance {
  std::size_t first = 0;
  std::size_t second = 0;
  double before = 0.0;
  double after = 0.0;
  bool increased = false;
};

/// Trace distances of every pair of inputs before and after the map.
std::vector<PairDistance> pair_distances(const Superoperator& s,
                                         const std::vector<ComplexMatrix>& inputs,
                                         double tol);

struct SwapReport {
  StateFamily family;
  ConsistencyReport consistency;
  Superoperator map;
  SignedKraus kraus;
  Verdicts verdicts;
  std::vector<ComplexMatrix> outputs;
  double max_output_deviation = 0.0;  // max_k |Phi(rho_k) - omega_E|
  std::vector<PairDistance> pairs;
};

/// Product family {rho_S (x) omega_E} evolved by the swap: the reduced map
/// is the constant map onto omega_E.
SwapReport swap_experiment(const std::vector<ComplexMatrix>& states_s, const ComplexMatrix& omega_e,
                           const ToleranceConfig& tol = {});

struct ExperimentReport {
  ConsistencyReport consistency;
  Superoperator map;
  SignedKraus kraus;
  Verdicts verdicts;
  std::vector<PairDistance> pairs;
  std::size_t increases = 0;
};

/// Builds Phi_S over a caller-supplied V and probes trace-distance
/// contractivity on system-state pairs, which must lie in V_S.
ExperimentReport custom_subspace_experiment(
    const SubspaceV& v, const ComplexMatrix& u,
    const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& probe_pairs,
    const ToleranceConfig& tol = {});

/// One row of the Bloch comparison table: the analytic closed form, the
/// constructed linear map, and direct evolution of the joint state.
struct BlochRow {
  Eigen::Vector3d alpha;
  double gamma11 = 0.0;
  double gamma21 = 0.0;
  Eigen::Vector3d analytic;
  Eigen::Vector3d mapped;
  Eigen::Vector3d direct;
};

std::vector<BlochRow> bloch_table(const StateFamily& family, const Superoperator& map,
                                  const ModelParams& p);

}  // namespace rdl
