#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>

#include "fixtures.hpp"
#include "rdl/errors.hpp"
#include "rdl/map_builder.hpp"
#include "rdl/operator_core.hpp"
#include "test_support.hpp"

using namespace rdl;

namespace {

Superoperator identity_map(Index d) {
  return superoperator_from_map(d, [](const ComplexMatrix& x) { return x; });
}

Superoperator transpose_map(Index d) {
  return superoperator_from_map(d, [](const ComplexMatrix& x) { return ComplexMatrix(x.transpose()); });
}

ComplexMatrix direct(const ComplexMatrix& u, const ComplexMatrix& rho_se, const BipartiteDims& d) {
  return oracle::trace_env(oracle::conjugate(u, rho_se), d.d_s, d.d_e);
}

void check_kraus_round_trip(const Superoperator& s, Rng& rng) {
  const SignedKraus k = decompose_signed_kraus(s);
  CHECK(normalization_error(k) <= 1e-10);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix rho = random_density_matrix(s.d_s, rng);
    CHECK(max_abs(rdl::apply(k, rho) - rdl::apply(s, rho)) <= 1e-10);
  }
}

}  // namespace

TEST_CASE("superoperator and Choi conventions", "[map-builder]") {
  SECTION("Choi entries are images of matrix units") {
    Rng rng(51);
    const ComplexMatrix a = ginibre(3, 3, rng);
    const auto s = superoperator_from_map(3, [&](const ComplexMatrix& x) { return ComplexMatrix(a * x * a.adjoint()); });
    for (Index j = 0; j < 3; ++j)
      for (Index k = 0; k < 3; ++k) {
        const ComplexMatrix img = a * oracle::ket_bra(3, j, k) * a.adjoint();
        for (Index r = 0; r < 3; ++r)
          for (Index c = 0; c < 3; ++c) CHECK(std::abs(s.choi(j * 3 + r, k * 3 + c) - img(r, c)) <= 1e-13);
      }
    const ComplexMatrix x = ginibre(3, 3, rng);
    CHECK(max_abs(rdl::apply(s, x) - a * x * a.adjoint()) <= 1e-12);
  }
  SECTION("identity") {
    const auto s = identity_map(2);
    const auto v = verdicts(s);
    CHECK(v.hermitian_preserving);
    CHECK(v.trace_preserving);
    CHECK(v.completely_positive);
    const auto k = decompose_signed_kraus(s);
    REQUIRE(k.terms.size() == 1);
    CHECK(k.terms[0].e == 1.0);
    CHECK(max_abs(k.terms[0].op - ComplexMatrix::Identity(2, 2)) <= 1e-12);
  }
  SECTION("transpose: Hermitian preserving, not CP, signs (-1, +1, +1, +1)") {
    const auto s = transpose_map(2);
    // Choi of the transpose is the swap matrix.
    CHECK(max_abs(s.choi - swap_unitary(2)) <= 1e-14);
    const auto v = verdicts(s);
    CHECK(v.hermitian_preserving);
    CHECK(v.trace_preserving);
    CHECK_FALSE(v.completely_positive);
    CHECK(v.min_choi_eigenvalue == Catch::Approx(-1.0).margin(1e-12));
    const auto k = decompose_signed_kraus(s);
    REQUIRE(k.terms.size() == 4);
    CHECK(k.terms[0].e == -1.0);
    for (int i = 1; i < 4; ++i) CHECK(k.terms[i].e == 1.0);
    Rng rng(52);
    check_kraus_round_trip(s, rng);
  }
  SECTION("non-Hermitian Choi is rejected") {
    const auto s = superoperator_from_map(2, [](const ComplexMatrix& x) { return ComplexMatrix(Complex(0, 1) * x); });
    CHECK_FALSE(verdicts(s).hermitian_preserving);
    CHECK_THROWS_AS(decompose_signed_kraus(s), HermiticityError);
  }
  SECTION("choi_from_matrix agrees") {
    const auto s = transpose_map(3);
    CHECK(max_abs(choi_from_matrix(s.matrix, 3) - s.choi) <= 1e-14);
  }
}

TEST_CASE("assignment map", "[map-builder]") {
  Rng rng(53);
  const auto f = fixture::unconstrained_family(3, rng);
  const auto v = build_subspace(f);
  const auto lambda = build_assignment(v);
  REQUIRE(v.m() == 3);

  for (const auto& p : lambda.pairs) CHECK(max_abs(apply_assignment(lambda, p.reduced) - p.joint) <= 1e-12);

  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Vector3d a;
    for (int i = 0; i < 3; ++i) a(i) = uniform(rng, -1.0, 1.0);
    ComplexMatrix x = ComplexMatrix::Zero(2, 2), expected = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < 3; ++i) {
      x += a(i) * v.independent_pairs[i].reduced;
      expected += a(i) * v.independent_pairs[i].joint;
    }
    const ComplexMatrix out = apply_assignment(lambda, x);
    CHECK(max_abs(out - expected) <= 1e-10);
    CHECK(max_abs(partial_trace_env(out, f.dims) - x) <= 1e-10);
    CHECK(std::abs(out.trace() - x.trace()) <= 1e-10);
    CHECK(hermiticity_deviation(out) <= 1e-12);
  }

  // Orthogonal complement of a 3-dimensional V_S inside the 4-dimensional operator space.
  RealMatrix coords(4, 3);
  for (Index i = 0; i < 3; ++i) coords.col(i) = hermitian_coordinates(v.independent_pairs[i].reduced).real();
  Eigen::HouseholderQR<RealMatrix> qr(coords);
  const RealMatrix q = qr.householderQ() * RealMatrix::Identity(4, 4);
  const ComplexMatrix outside = from_hermitian_coordinates(RealVector(q.col(3)), 2);
  CHECK_THROWS_AS(apply_assignment(lambda, outside), NotInVSError);
}

TEST_CASE("dynamical map", "[map-builder]") {
  Rng rng(54);
  SECTION("U = I acts as the identity on V_S") {
    const auto f = fixture::unconstrained_family(6, rng);
    const auto v = build_subspace(f);
    const auto s = build_dynamical_map(build_assignment(v), ComplexMatrix::Identity(4, 4));
    for (const auto& p : v.independent_pairs) CHECK(max_abs(rdl::apply(s, p.reduced) - p.reduced) <= 1e-12);
    CHECK_FALSE(s.consistency_certified);
  }
  SECTION("product family under swap is the constant map") {
    const ComplexMatrix omega = random_density_matrix(2, rng);
    const auto f = product_family(pauli_eigenstates(), omega);
    const auto v = build_subspace(f);
    const auto cert = check_subspace_consistency(v, swap_unitary(2));
    const auto s = build_dynamical_map(build_assignment(v), swap_unitary(2), Extension::zero, cert);
    CHECK(s.consistency_certified);
    for (int trial = 0; trial < 10; ++trial)
      CHECK(max_abs(rdl::apply(s, random_density_matrix(2, rng)) - omega) <= 1e-12);
    // Choi of rho -> Tr(rho) omega is I (x) omega.
    CHECK(max_abs(s.choi - tensor(ComplexMatrix::Identity(2, 2), omega)) <= 1e-12);
    CHECK(verdicts(s).completely_positive);
    check_kraus_round_trip(s, rng);
  }
  SECTION("constrained family matches direct evolution and the closed-form Bloch action") {
    const double wt = 0.83;
    const ModelParams p{1.0, wt};
    const ComplexMatrix u = model_unitary(p);
    const auto c = fixture::random_plant(rng);
    const auto f = fixture::constrained_family(c, 40, 17);
    const auto v = build_subspace(f);
    REQUIRE(v.m() == 4);
    const auto cert = check_subspace_consistency(v, u);
    REQUIRE(cert.consistent);
    const auto s = build_dynamical_map(build_assignment(v), u, Extension::zero, cert);
    for (const auto& m : f.members)
      CHECK(max_abs(rdl::apply(s, partial_trace_env(m, f.dims)) - direct(u, m, f.dims)) <= 1e-9);

    const double cs = std::cos(wt), sn = std::sin(wt);
    const auto bloch_of = [&](const Eigen::Vector3d& a) {
      ComplexMatrix rho = oracle::pauli(0);
      for (int i = 0; i < 3; ++i) rho += a(i) * oracle::pauli(i + 1);
      rho /= 2.0;
      const ComplexMatrix out = rdl::apply(s, rho);
      Eigen::Vector3d b;
      for (int i = 0; i < 3; ++i) b(i) = oracle::expectation(oracle::pauli(i + 1), out);
      return b;
    };
    const Eigen::Vector3d offset = bloch_of(Eigen::Vector3d::Zero());
    CHECK(std::abs(offset(0) + c.a21 * sn) <= 1e-10);
    CHECK(std::abs(offset(1) - c.a11 * sn) <= 1e-10);
    CHECK(std::abs(offset(2)) <= 1e-10);
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector3d col = bloch_of(Eigen::Vector3d::Unit(i)) - offset;
      CHECK(std::abs(col(0) - ((i == 0 ? cs : 0.0) - sn * c.b21(i))) <= 1e-10);
      CHECK(std::abs(col(1) - ((i == 1 ? cs : 0.0) + sn * c.b11(i))) <= 1e-10);
      CHECK(std::abs(col(2) - (i == 2 ? 1.0 : 0.0)) <= 1e-10);
    }
    check_kraus_round_trip(s, rng);
  }
  SECTION("another ordering of the family gives the same map on V_S") {
    const ComplexMatrix u = model_unitary({1.0, 1.1});
    const auto f = fixture::constrained_family(fixture::random_plant(rng), 20, 23);
    std::vector<ComplexMatrix> shuffled = f.members;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto g = make_family(f.dims, shuffled, "shuffled");
    const auto s1 = build_dynamical_map(build_assignment(build_subspace(f)), u);
    const auto s2 = build_dynamical_map(build_assignment(build_subspace(g)), u);
    for (const auto& m : f.members) {
      const ComplexMatrix x = partial_trace_env(m, f.dims);
      CHECK(max_abs(rdl::apply(s1, x) - rdl::apply(s2, x)) <= 1e-9);
    }
  }
  SECTION("trace preserved on V_S, CP maps contract") {
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix u = random_unitary(4, rng);
      const auto f = product_family({random_density_matrix(2, rng), random_density_matrix(2, rng),
                                     random_density_matrix(2, rng), random_density_matrix(2, rng)},
                                    random_density_matrix(2, rng));
      const auto s = build_dynamical_map(build_assignment(build_subspace(f)), u);
      const auto vd = verdicts(s);
      CHECK(vd.completely_positive);
      CHECK(vd.trace_preserving);
      for (int k = 0; k < 10; ++k) {
        const ComplexMatrix a = random_density_matrix(2, rng);
        const ComplexMatrix b = random_density_matrix(2, rng);
        CHECK(std::abs(rdl::apply(s, a).trace() - 1.0) <= 1e-10);
        CHECK(trace_distance(rdl::apply(s, a), rdl::apply(s, b)) <= trace_distance(a, b) + 1e-9);
      }
      check_kraus_round_trip(s, rng);
    }
  }
  SECTION("proper V_S: zero extension versus none") {
    const auto f = fixture::unconstrained_family(2, rng);
    const auto v = build_subspace(f);
    REQUIRE(v.m() == 2);
    const ComplexMatrix u = random_unitary(4, rng);
    CHECK_THROWS_AS(build_dynamical_map(build_assignment(v), u, Extension::none), IncompleteDomainError);
    const auto s = build_dynamical_map(build_assignment(v), u, Extension::zero);
    CHECK(s.extension == Extension::zero);
    CHECK(std::lround(s.domain_projector.trace()) == 2);
    for (const auto& m : f.members)
      CHECK(max_abs(rdl::apply(s, partial_trace_env(m, f.dims)) - direct(u, m, f.dims)) <= 1e-10);
    // Something orthogonal to V_S goes to zero.
    const RealMatrix comp = RealMatrix::Identity(4, 4) - s.domain_projector;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(comp);
    const ComplexMatrix outside = from_hermitian_coordinates(RealVector(es.eigenvectors().col(3)), 2);
    CHECK(max_abs(rdl::apply(s, outside)) <= 1e-12);
  }
  SECTION("inconsistent V still yields the map of the chosen pairs") {
    const auto f = fixture::unconstrained_family(10, rng);
    const ComplexMatrix u = model_unitary({1.0, std::numbers::pi / 2});
    const auto v = build_subspace(f);
    const auto cert = check_subspace_consistency(v, u);
    REQUIRE_FALSE(cert.consistent);
    const auto s = build_dynamical_map(build_assignment(v), u, Extension::zero, cert);
    CHECK_FALSE(s.consistency_certified);
    for (const auto& p : v.independent_pairs)
      CHECK(max_abs(rdl::apply(s, p.reduced) - direct(u, p.joint, f.dims)) <= 1e-10);
    double worst = 0.0;
    for (const auto& m : f.members)
      worst = std::max(worst, max_abs(rdl::apply(s, partial_trace_env(m, f.dims)) - direct(u, m, f.dims)));
    CHECK(worst > 1e-3);
  }
}
