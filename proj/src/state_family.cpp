#include "rdl/state_family.hpp"

#include <cmath>
#include <sstream>

#include "rdl/errors.hpp"
#include "rdl/operator_core.hpp"
#include "rdl/sampling.hpp"

namespace rdl {

namespace {

bool in_unit_range(double v) { return v >= -1.0 && v <= 1.0; }

std::string first_out_of_range(const TwoQubitParams& p) {
  static const char* axes = "123";
  for (int i = 0; i < 3; ++i) {
    if (!in_unit_range(p.alpha(i))) return std::string("alpha_") + axes[i];
    if (!in_unit_range(p.beta(i))) return std::string("beta_") + axes[i];
    for (int j = 0; j < 3; ++j)
      if (!in_unit_range(p.gamma(i, j))) return std::string("gamma_") + axes[i] + axes[j];
  }
  return {};
}

ComplexMatrix assemble_unchecked(const TwoQubitParams& p) {
  const ComplexMatrix id = pauli(0);
  ComplexMatrix rho = tensor(id, id);
  for (int i = 0; i < 3; ++i) {
    const ComplexMatrix si = pauli(i + 1);
    rho += p.alpha(i) * tensor(si, id);
    rho += p.beta(i) * tensor(id, si);
    for (int j = 0; j < 3; ++j) rho += p.gamma(i, j) * tensor(si, pauli(j + 1));
  }
  return rho / 4.0;
}

}  // namespace

StateFamily make_family(const BipartiteDims& dims, std::vector<ComplexMatrix> members,
                        std::string label, const ToleranceConfig& tol) {
  if (dims.d_s < 2) throw DimensionError("system dimension must be at least 2");
  if (dims.d_e < 1) throw DimensionError("environment dimension must be positive");
  if (members.empty()) throw EmptyFamilyError("state family has no members");
  for (std::size_t k = 0; k < members.size(); ++k) {
    const auto& m = members[k];
    if (m.rows() != dims.joint() || m.cols() != dims.joint()) {
      throw DimensionError("family member " + std::to_string(k) + " has side " +
                           std::to_string(m.rows()) + ", expected " +
                           std::to_string(dims.joint()));
    }
    const std::string what = "family member " + std::to_string(k);
    check_density_matrix(m, tol, what.c_str());
  }
  return StateFamily{dims, std::move(members), std::move(label)};
}

std::vector<ComplexMatrix> reduced_states(const StateFamily& family) {
  std::vector<ComplexMatrix> out;
  out.reserve(family.members.size());
  for (const auto& m : family.members) out.push_back(partial_trace_env(m, family.dims));
  return out;
}

ComplexMatrix assemble_two_qubit(const TwoQubitParams& p, const ToleranceConfig& tol) {
  if (auto bad = first_out_of_range(p); !bad.empty())
    throw InputError("two-qubit parameter " + bad + " outside [-1, 1]");
  ComplexMatrix rho = assemble_unchecked(p);
  check_density_matrix(rho, tol, "assembled two-qubit operator");
  return rho;
}

TwoQubitParams extract_two_qubit(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DimensionError("two-qubit state must be 4x4");
  const ComplexMatrix id = pauli(0);
  TwoQubitParams p;
  for (int i = 0; i < 3; ++i) {
    const ComplexMatrix si = pauli(i + 1);
    p.alpha(i) = hs_inner(tensor(si, id), rho).real();
    p.beta(i) = hs_inner(tensor(id, si), rho).real();
    for (int j = 0; j < 3; ++j) p.gamma(i, j) = hs_inner(tensor(si, pauli(j + 1)), rho).real();
  }
  return p;
}

StateFamily product_family(const std::vector<ComplexMatrix>& states_s, const ComplexMatrix& omega_e,
                           const ToleranceConfig& tol) {
  check_density_matrix(omega_e, tol, "environment state");
  if (states_s.empty()) throw EmptyFamilyError("no system states supplied");
  const Index ds = states_s.front().rows();
  std::vector<ComplexMatrix> members;
  members.reserve(states_s.size());
  for (std::size_t k = 0; k < states_s.size(); ++k) {
    const std::string what = "system state " + std::to_string(k);
    if (states_s[k].rows() != ds) throw DimensionError(what + " differs in dimension");
    check_density_matrix(states_s[k], tol, what.c_str());
    members.push_back(tensor(states_s[k], omega_e));
  }
  std::ostringstream label;
  label << "product family, omega_E = [";
  for (Index r = 0; r < omega_e.rows(); ++r) {
    label << (r ? "; " : "");
    for (Index c = 0; c < omega_e.cols(); ++c)
      label << (c ? ", " : "") << omega_e(r, c).real() << (omega_e(r, c).imag() < 0 ? "-" : "+")
            << std::abs(omega_e(r, c).imag()) << "i";
  }
  label << "]";
  return make_family(BipartiteDims{ds, omega_e.rows()}, std::move(members), label.str(), tol);
}

ConstrainedFamily constrained_two_qubit_family(double a11, double a21, const Eigen::Vector3d& b11,
                                               const Eigen::Vector3d& b21,
                                               const std::vector<TwoQubitParams>& samples,
                                               const ToleranceConfig& tol) {
  ConstrainedFamily out;
  std::vector<ComplexMatrix> members;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    TwoQubitParams p = samples[k];
    p.gamma(0, 0) = a11 + b11.dot(p.alpha);
    p.gamma(1, 0) = a21 + b21.dot(p.alpha);
    if (auto bad = first_out_of_range(p); !bad.empty()) {
      out.rejected.push_back({k, bad + " outside [-1, 1]", std::nan("")});
      continue;
    }
    const ComplexMatrix rho = assemble_unchecked(p);
    const double lo = hermitian_eigenvalues(rho)(0);
    if (lo < -tol.psd) {
      out.rejected.push_back({k, "not positive semidefinite", lo});
      continue;
    }
    members.push_back(rho);
    out.accepted.push_back(p);
  }
  if (members.empty())
    throw EmptyFamilyError("all " + std::to_string(samples.size()) +
                           " constrained samples were rejected");
  std::ostringstream label;
  label << "constrained two-qubit family, a11=" << a11 << " a21=" << a21 << " b11=("
        << b11(0) << "," << b11(1) << "," << b11(2) << ") b21=(" << b21(0) << "," << b21(1)
        << "," << b21(2) << ")";
  out.family = make_family(BipartiteDims{2, 2}, std::move(members), label.str(), tol);
  return out;
}

std::vector<TwoQubitParams> uniform_two_qubit_samples(std::size_t count, std::uint64_t seed,
                                                      double scale) {
  Rng rng(seed);
  std::vector<TwoQubitParams> out(count);
  for (auto& p : out) {
    for (int i = 0; i < 3; ++i) p.alpha(i) = uniform(rng, -scale, scale);
    for (int i = 0; i < 3; ++i) p.beta(i) = uniform(rng, -scale, scale);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) p.gamma(i, j) = uniform(rng, -scale, scale);
  }
  return out;
}

std::vector<ComplexMatrix> pauli_eigenstates() {
  std::vector<ComplexMatrix> out;
  const ComplexMatrix id = pauli(0);
  for (int axis : {3, 1, 2}) {
    out.push_back((id + pauli(axis)) / 2.0);
    out.push_back((id - pauli(axis)) / 2.0);
  }
  return out;
}

}  // namespace rdl
