#include "rdl/consistency.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "rdl/errors.hpp"
#include "rdl/operator_core.hpp"
#include "rdl/sampling.hpp"

namespace rdl {

namespace {

void require_joint_unitary(const ComplexMatrix& u, const BipartiteDims& dims, double tol_unitary) {
  if (u.rows() != dims.joint() || u.cols() != dims.joint())
    throw DimensionError("unitary has side " + std::to_string(u.rows()) + ", expected " +
                         std::to_string(dims.joint()));
  require_unitary(u, tol_unitary);
}

ConsistencyReport finish(double worst, double tol, std::optional<ComplexMatrix> witness) {
  ConsistencyReport r;
  r.max_violation = worst;
  r.tolerance = tol;
  r.consistent = worst <= tol;
  if (r.consistent) {
    r.status = ConsistencyStatus::consistent;
  } else {
    r.status = worst <= 10.0 * tol ? ConsistencyStatus::marginal : ConsistencyStatus::inconsistent;
    r.witness = std::move(witness);
  }
  return r;
}

}  // namespace

const char* to_string(ConsistencyStatus s) {
  switch (s) {
    case ConsistencyStatus::consistent: return "consistent";
    case ConsistencyStatus::marginal: return "marginal";
    case ConsistencyStatus::inconsistent: return "inconsistent";
    case ConsistencyStatus::vacuous: return "vacuous";
  }
  return "unknown";
}

double evolution_violation(const ComplexMatrix& u, const ComplexMatrix& y, const BipartiteDims& dims) {
  return max_abs(partial_trace_env(conjugate(u, y), dims));
}

ConsistencyReport check_subspace_consistency(const SubspaceV& v, const ComplexMatrix& u, double tol,
                                             double tol_unitary) {
  require_joint_unitary(u, v.dims, tol_unitary);
  const Index d = v.dims.joint();
  double worst = 0.0;
  Index worst_k = -1;
  for (Index k = 0; k < v.kernel_dim(); ++k) {
    const ComplexMatrix y = from_hermitian_coordinates(v.kernel_coords.col(k), d);
    const double viol = evolution_violation(u, y, v.dims);
    if (viol > worst) {
      worst = viol;
      worst_k = k;
    }
  }
  std::optional<ComplexMatrix> witness;
  if (worst_k >= 0) witness = from_hermitian_coordinates(v.kernel_coords.col(worst_k), d);
  return finish(worst, tol, std::move(witness));
}

ConsistencyReport check_pairwise_consistency(const StateFamily& family, const ComplexMatrix& u,
                                             double tol, double tol_rank, double tol_unitary) {
  require_joint_unitary(u, family.dims, tol_unitary);
  const auto reduced = reduced_states(family);
  const std::size_t n = family.members.size();
  std::vector<ComplexMatrix> evolved;
  evolved.reserve(n);
  for (const auto& m : family.members) evolved.push_back(partial_trace_env(conjugate(u, m), family.dims));

  std::size_t tested = 0;
  double worst = 0.0;
  std::optional<ComplexMatrix> witness;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (max_abs(reduced[i] - reduced[j]) > tol_rank) continue;
      ++tested;
      const double viol = max_abs(evolved[i] - evolved[j]);
      if (viol > worst || !witness) {
        worst = std::max(worst, viol);
        witness = family.members[i] - family.members[j];
      }
    }
  }
  ConsistencyReport r = finish(worst, tol, std::move(witness));
  r.pairs_tested = tested;
  if (tested == 0) r.status = ConsistencyStatus::vacuous;
  return r;
}

ConsistencyReport check_hull_consistency(const StateFamily& family, const ComplexMatrix& u,
                                         double tol, int trials, std::uint64_t seed,
                                         double tol_rank, double tol_unitary) {
  if (trials < 1) throw InputError("hull consistency needs at least one trial");
  require_joint_unitary(u, family.dims, tol_unitary);
  const auto pairs = select_independent(family, tol_rank);
  const std::size_t n = family.members.size();
  const Index d = family.dims.joint();

  // Does any member carry a kernel component at all?
  bool kernel_seen = false;
  for (const auto& member : family.members) {
    const Expansion e = expand_over_pairs(partial_trace_env(member, family.dims), pairs, tol_rank);
    ComplexMatrix y = member;
    for (std::size_t i = 0; i < pairs.size(); ++i) y -= e.coefficients(static_cast<Index>(i)).real() * pairs[i].joint;
    if (max_abs(y) > tol_rank) {
      kernel_seen = true;
      break;
    }
  }

  Rng rng(seed);
  std::exponential_distribution<double> exp1(1.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::size_t tested = 0;
  double worst = 0.0;
  std::optional<ComplexMatrix> witness;
  for (int t = 0; t < trials; ++t) {
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t take = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    std::vector<double> w(take);
    for (auto& x : w) x = exp1(rng);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);

    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    for (std::size_t k = 0; k < take; ++k) rho += (w[k] / total) * family.members[order[k]];

    const Expansion e = expand_over_pairs(partial_trace_env(rho, family.dims), pairs, tol_rank);
    ComplexMatrix hat = rho;
    ComplexMatrix tilde = ComplexMatrix::Zero(d, d);
    double a_plus = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double a = e.coefficients(static_cast<Index>(i)).real();
      if (a > 0) {
        tilde += a * pairs[i].joint;
        a_plus += a;
      } else {
        hat += -a * pairs[i].joint;
      }
    }
    hat /= a_plus;
    tilde /= a_plus;
    const ComplexMatrix diff = hat - tilde;
    if (max_abs(diff) <= tol_rank) continue;
    ++tested;
    const double viol = evolution_violation(u, diff, family.dims);
    if (viol > worst || !witness) {
      worst = std::max(worst, viol);
      witness = diff;
    }
  }
  if (tested == 0 && kernel_seen)
    throw SamplingExhaustedError("no non-trivial equal-marginal hull pair found in " +
                                 std::to_string(trials) + " trials");
  ConsistencyReport r = finish(worst, tol, std::move(witness));
  r.pairs_tested = tested;
  return r;
}

}  // namespace rdl
