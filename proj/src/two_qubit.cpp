#include "rdl/two_qubit.hpp"

#include <cmath>
#include <limits>

#include "rdl/errors.hpp"
#include "rdl/operator_core.hpp"

namespace rdl {

namespace {

const ComplexMatrix& coupling() {
  static const ComplexMatrix zx = tensor(pauli(3), pauli(1));
  return zx;
}

}  // namespace

ComplexMatrix model_hamiltonian(double omega) { return 0.5 * omega * coupling(); }

ComplexMatrix model_unitary(const ModelParams& p) {
  if (!(p.omega > 0)) throw InputError("omega must be positive");
  if (!(p.t >= 0)) throw InputError("t must be non-negative");
  const double half = 0.5 * p.phase();
  return std::cos(half) * ComplexMatrix::Identity(4, 4) -
         Complex(0, std::sin(half)) * coupling();
}

ComplexMatrix swap_unitary(Index d) {
  if (d < 1) throw DimensionError("swap dimension must be positive");
  ComplexMatrix u = ComplexMatrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) u(j * d + i, i * d + j) = 1.0;
  return u;
}

Eigen::Vector3d bloch_vector(const ComplexMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw DimensionError("Bloch vector needs a qubit operator");
  Eigen::Vector3d a;
  for (int i = 0; i < 3; ++i) a(i) = hs_inner(pauli(i + 1), rho).real();
  return a;
}

Eigen::Vector3d analytic_bloch_step(const Eigen::Vector3d& alpha, double gamma11, double gamma21,
                                    double wt) {
  const double c = std::cos(wt);
  const double s = std::sin(wt);
  return {alpha(0) * c - gamma21 * s, alpha(1) * c + gamma11 * s, alpha(2)};
}

LinearityRecord linearity_record(const ComplexMatrix& rho_se) {
  if (rho_se.rows() != 4 || rho_se.cols() != 4) throw DimensionError("two-qubit state must be 4x4");
  const ComplexMatrix id = pauli(0);
  LinearityRecord r;
  for (int i = 0; i < 3; ++i) r.alpha(i) = hs_inner(tensor(pauli(i + 1), id), rho_se).real();
  r.gamma11 = hs_inner(tensor(pauli(1), pauli(1)), rho_se).real();
  r.gamma21 = hs_inner(tensor(pauli(2), pauli(1)), rho_se).real();
  return r;
}

LinearityRecord constrained_record(const LinearityCoefficients& c, const Eigen::Vector3d& alpha) {
  return {alpha, c.a11 + c.b11.dot(alpha), c.a21 + c.b21.dot(alpha)};
}

LinearityCoefficients solve_linearity_coefficients(std::span<const LinearityRecord> records) {
  if (records.size() != 4)
    throw SingularSystemError("the linearity solve needs exactly four records, got " +
                                  std::to_string(records.size()),
                              std::numeric_limits<double>::infinity());
  Eigen::Matrix4d m;
  Eigen::Vector4d g11;
  Eigen::Vector4d g21;
  for (int j = 0; j < 4; ++j) {
    m(j, 0) = 1.0;
    m.block<1, 3>(j, 1) = records[static_cast<std::size_t>(j)].alpha.transpose();
    g11(j) = records[static_cast<std::size_t>(j)].gamma11;
    g21(j) = records[static_cast<std::size_t>(j)].gamma21;
  }
  const Eigen::Vector4d sv = Eigen::JacobiSVD<Eigen::Matrix4d>(m).singularValues();
  const double cond = sv(3) > 0 ? sv(0) / sv(3) : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12))
    throw SingularSystemError("Bloch records are linearly dependent (condition number " +
                                  std::to_string(cond) + ")",
                              cond);
  const Eigen::PartialPivLU<Eigen::Matrix4d> lu(m);
  const Eigen::Vector4d x11 = lu.solve(g11);
  const Eigen::Vector4d x21 = lu.solve(g21);
  return {x11(0), x21(0), x11.tail<3>(), x21.tail<3>()};
}

std::vector<LinearityResidual> linearity_residuals(const StateFamily& family,
                                                   const LinearityCoefficients& c) {
  if (family.dims != BipartiteDims{2, 2}) throw DimensionError("linearity residuals need two qubits");
  std::vector<LinearityResidual> out;
  out.reserve(family.members.size());
  for (const auto& m : family.members) {
    const LinearityRecord r = linearity_record(m);
    const LinearityRecord fit = constrained_record(c, r.alpha);
    out.push_back({r.gamma11 - fit.gamma11, r.gamma21 - fit.gamma21});
  }
  return out;
}

ConstrainedFamily constrained_two_qubit_family(const LinearityCoefficients& c,
                                               const std::vector<TwoQubitParams>& samples,
                                               const ToleranceConfig& tol) {
  return constrained_two_qubit_family(c.a11, c.a21, c.b11, c.b21, samples, tol);
}

std::vector<PairDistance> pair_distances(const Superoperator& s,
                                         const std::vector<ComplexMatrix>& inputs, double tol) {
  std::vector<ComplexMatrix> outputs;
  outputs.reserve(inputs.size());
  for (const auto& x : inputs) outputs.push_back(rdl::apply(s, x));
  std::vector<PairDistance> out;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t j = i + 1; j < inputs.size(); ++j) {
      PairDistance p{i, j, trace_distance(inputs[i], inputs[j], tol),
                     trace_distance(outputs[i], outputs[j], tol), false};
      p.increased = p.after > p.before + tol;
      out.push_back(p);
    }
  }
  return out;
}

SwapReport swap_experiment(const std::vector<ComplexMatrix>& states_s, const ComplexMatrix& omega_e,
                           const ToleranceConfig& tol) {
  SwapReport r;
  r.family = product_family(states_s, omega_e, tol);
  if (r.family.dims.d_s != r.family.dims.d_e)
    throw DimensionError("the swap needs equal system and environment dimensions");
  const SubspaceV v = build_subspace(r.family, tol.rank);
  const ComplexMatrix u = swap_unitary(r.family.dims.d_s);
  r.consistency = check_subspace_consistency(v, u, tol.consistency, tol.unitary);
  r.map = build_dynamical_map(build_assignment(v), u, Extension::zero, r.consistency, tol.unitary);
  r.kraus = decompose_signed_kraus(r.map, tol.psd);
  r.verdicts = verdicts(r.map, tol.psd);
  for (const auto& rho : states_s) {
    r.outputs.push_back(rdl::apply(r.map, rho));
    r.max_output_deviation = std::max(r.max_output_deviation, max_abs(r.outputs.back() - omega_e));
  }
  r.pairs = pair_distances(r.map, states_s, tol.herm);
  return r;
}

ExperimentReport custom_subspace_experiment(
    const SubspaceV& v, const ComplexMatrix& u,
    const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& probe_pairs,
    const ToleranceConfig& tol) {
  ExperimentReport r;
  r.consistency = check_subspace_consistency(v, u, tol.consistency, tol.unitary);
  r.map = build_dynamical_map(build_assignment(v), u, Extension::zero, r.consistency, tol.unitary);
  r.kraus = decompose_signed_kraus(r.map, tol.psd);
  r.verdicts = verdicts(r.map, tol.psd);
  for (std::size_t k = 0; k < probe_pairs.size(); ++k) {
    const auto& [rho, sigma] = probe_pairs[k];
    expand_in_V(rho, v, tol.rank);
    expand_in_V(sigma, v, tol.rank);
    PairDistance p = pair_distances(r.map, {rho, sigma}, tol.herm).front();
    p.first = 2 * k;
    p.second = 2 * k + 1;
    if (p.increased) ++r.increases;
    r.pairs.push_back(p);
  }
  return r;
}

std::vector<BlochRow> bloch_table(const StateFamily& family, const Superoperator& map,
                                  const ModelParams& p) {
  if (family.dims != BipartiteDims{2, 2}) throw DimensionError("Bloch table needs two qubits");
  const ComplexMatrix u = model_unitary(p);
  std::vector<BlochRow> rows;
  rows.reserve(family.members.size());
  for (const auto& m : family.members) {
    const LinearityRecord rec = linearity_record(m);
    BlochRow row;
    row.alpha = rec.alpha;
    row.gamma11 = rec.gamma11;
    row.gamma21 = rec.gamma21;
    row.analytic = analytic_bloch_step(rec.alpha, rec.gamma11, rec.gamma21, p.phase());
    row.mapped = bloch_vector(rdl::apply(map, partial_trace_env(m, family.dims)));
    row.direct = bloch_vector(partial_trace_env(conjugate(u, m), family.dims));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rdl
