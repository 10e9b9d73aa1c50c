#include <doctest.h>

#include <cmath>

#include "openqs/wedge.hpp"
#include "openqs/random.hpp"
#include "test_helpers.hpp"

using namespace openqs;

namespace {

GeneratorCone dephasing_orbit_cone(double gamma, int samples, std::uint64_t seed) {
  const Superoperator diss = dissipator_superop(2, {test::dephasing_op(gamma)});
  return conjugation_orbit_cone(diss, samples, seed);
}

// axis-aligned dephasing restrictions: 2 gamma (1 - e_a e_a^T)
RealMatrix axis_dephasing(double gamma, int axis) {
  RealMatrix g = 2.0 * gamma * RealMatrix::Identity(3, 3);
  g(axis, axis) = 0.0;
  return g;
}

}  // namespace

TEST_CASE("orbit cone of scalar noise is a single ray") {
  const Superoperator diss = dissipator_superop(2, test::depolarizing_ops(0.5));
  const GeneratorCone cone = conjugation_orbit_cone(diss, 16, 7);
  for (const auto& g : cone.generators) {
    CHECK((g - 0.5 * RealMatrix::Identity(3, 3)).norm() < 1e-10);
  }
}

TEST_CASE("orbit cone of dephasing: spectrum is conjugation invariant") {
  const double gamma = 0.45;
  const GeneratorCone cone = dephasing_orbit_cone(gamma, 64, 11);
  CHECK(cone.generators.size() >= 64);
  for (const auto& g : cone.generators) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(g, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(es.eigenvalues()(1) == doctest::Approx(2 * gamma));
    CHECK(es.eigenvalues()(2) == doctest::Approx(2 * gamma));
  }
}

TEST_CASE("orbit cone is reproducible under its seed") {
  const GeneratorCone a = dephasing_orbit_cone(0.3, 24, 99);
  const GeneratorCone b = dephasing_orbit_cone(0.3, 24, 99);
  REQUIRE(a.generators.size() == b.generators.size());
  for (size_t i = 0; i < a.generators.size(); ++i) {
    CHECK((a.generators[i] - b.generators[i]).norm() == 0.0);
  }
}

TEST_CASE("orbit cone accepts damping but rejects invalid restrictions") {
  // amplitude damping restricts to diag(gamma/2, gamma/2, gamma): PSD
  const Superoperator damping =
      dissipator_superop(2, {test::amplitude_damping_op(0.5)});
  CHECK(conjugation_orbit_cone(damping, 4, 1).generators.size() >= 4);

  // a negated dissipator restricts to a negative semidefinite operator
  Superoperator negated;
  negated.dim = 2;
  negated.matrix = -dissipator_superop(2, {test::dephasing_op(0.4)}).matrix;
  CHECK_THROWS_AS((void)conjugation_orbit_cone(negated, 8, 1), InputError);

  // generic non-normal noise makes the restriction non-self-adjoint
  Rng rng(3);
  const Superoperator skew = dissipator_superop(2, {random_complex(2, 2, rng)});
  CHECK_THROWS_AS((void)conjugation_orbit_cone(skew, 8, 1), InputError);
}

TEST_CASE("nnls solves small systems exactly") {
  RealMatrix a(3, 2);
  a << 1, 0, 0, 1, 0, 0;
  RealVector b(3);
  b << 2.0, 3.0, 0.0;
  const NnlsResult r = nnls(a, b);
  CHECK(r.x(0) == doctest::Approx(2.0));
  CHECK(r.x(1) == doctest::Approx(3.0));
  CHECK(r.residual < 1e-12);

  // negative component must clamp to zero
  b << -1.0, 2.0, 0.0;
  const NnlsResult r2 = nnls(a, b);
  CHECK(r2.x(0) == 0.0);
  CHECK(r2.x(1) == doctest::Approx(2.0));
  CHECK(r2.residual == doctest::Approx(1.0));
}

TEST_CASE("cone membership recovers exact coefficients on independent generators") {
  const GeneratorCone cone = GeneratorCone::user_supplied(
      2, {axis_dephasing(0.5, 0), axis_dephasing(0.5, 1), axis_dephasing(0.5, 2)});

  SUBCASE("single generator") {
    const ConeMembershipReport rep =
        cone_membership(cone.generators[0], cone, 1e-8);
    CHECK(rep.member);
    CHECK(rep.coefficients(0) == doctest::Approx(1.0));
    CHECK(std::abs(rep.coefficients(1)) < 1e-10);
    CHECK(std::abs(rep.coefficients(2)) < 1e-10);
  }

  SUBCASE("fixed combination") {
    const RealMatrix x =
        2.5 * cone.generators[0] + 0.3 * cone.generators[1];
    const ConeMembershipReport rep = cone_membership(x, cone, 1e-8);
    CHECK(rep.member);
    CHECK(rep.coefficients(0) == doctest::Approx(2.5).epsilon(1e-8));
    CHECK(rep.coefficients(1) == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(std::abs(rep.coefficients(2)) < 1e-8);
  }
}

TEST_CASE("negated dissipators are far outside the cone") {
  const GeneratorCone cone = dephasing_orbit_cone(0.4, 32, 5);
  const RealMatrix x = -cone.base;
  const ConeMembershipReport rep = cone_membership(x, cone, 1e-8);
  CHECK_FALSE(rep.member);
  // all generators are PSD while -base is NSD, so the fit cannot beat ||x||
  CHECK(rep.residual >= 1.0 - 1e-12);
  CHECK_FALSE(rep.note.empty());
}

TEST_CASE("membership verdict is scale invariant") {
  const GeneratorCone cone = dephasing_orbit_cone(0.4, 32, 5);
  RealMatrix inside = cone.generators[0] + 0.5 * cone.generators[1];
  RealMatrix outside = -cone.base;
  for (double lam : {1e-3, 1.0, 1e3}) {
    CHECK(cone_membership(lam * inside, cone, 1e-8).member);
    CHECK_FALSE(cone_membership(lam * outside, cone, 1e-8).member);
  }
}

TEST_CASE("empty cones are rejected") {
  GeneratorCone cone;
  cone.dim = 2;
  CHECK_THROWS_AS((void)cone_membership(RealMatrix::Zero(3, 3), cone, 1e-8),
                  InputError);
}

TEST_CASE("wedge conditions hold for the scalar ray") {
  const Superoperator diss = dissipator_superop(2, test::depolarizing_ops(0.5));
  const GeneratorCone cone = conjugation_orbit_cone(diss, 8, 3);
  const WedgeConditionsReport rep = check_wedge_conditions(cone, 1e-8, 20, 17);
  CHECK(rep.contains_dissipator);
  CHECK(rep.brackets_compatible);
  CHECK(rep.ad_invariant);
  CHECK(rep.dissipator_residual < 1e-10);
  CHECK(rep.bracket_residual < 1e-10);
  CHECK(rep.invariance_residual < 1e-10);
}

TEST_CASE("wedge conditions hold for a well-sampled dephasing orbit") {
  // conjugates of the rank-deficient base sit on the cone boundary, which a
  // finite sample set only resolves to the squared angular spacing; the
  // invariance residual is therefore sampling-limited, not zero
  const GeneratorCone cone = dephasing_orbit_cone(0.4, 128, 23);
  const WedgeConditionsReport rep = check_wedge_conditions(cone, 0.1, 100, 29);
  CHECK(rep.contains_dissipator);
  CHECK(rep.dissipator_residual < 1e-10);  // base is a generator
  CHECK(rep.brackets_compatible);          // N=2: antisymmetric = ad su(2)
  CHECK(rep.ad_invariant);
  CHECK(rep.invariance_residual < 0.1);

  // denser sampling can only improve the fit: the generator list of a
  // smaller cone with the same seed is a prefix of the bigger one
  const GeneratorCone sparse = dephasing_orbit_cone(0.4, 16, 23);
  const WedgeConditionsReport sparse_rep =
      check_wedge_conditions(sparse, 0.1, 100, 29);
  CHECK(rep.invariance_residual <=
        sparse_rep.invariance_residual + 1e-9);
}

TEST_CASE("two axis-aligned generators are not conjugation invariant") {
  const GeneratorCone cone = GeneratorCone::user_supplied(
      2, {axis_dephasing(0.4, 2), axis_dephasing(0.4, 0)});
  // quarter-ish turn mixing the z and x axes: conjugated generator leaves
  // the span of the two axis generators
  const Matrix u = expm(Complex(0, -M_PI / 8) * pauli_y());
  const RealMatrix theta = adjoint_rep(u);
  const RealMatrix rotated = theta * cone.generators[0] * theta.transpose();
  const ConeMembershipReport rep = cone_membership(rotated, cone, 1e-6);
  CHECK_FALSE(rep.member);

  const WedgeConditionsReport cond = check_wedge_conditions(cone, 1e-6, 40, 31);
  CHECK_FALSE(cond.ad_invariant);
}

TEST_CASE("unitary conjugations are members with a trivial contraction part") {
  Rng rng(151);
  const GeneratorCone cone = dephasing_orbit_cone(0.4, 32, 37);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix u = random_su2(rng);
    QuantumChannel ch = QuantumChannel::from_superop(2, kron(u.conjugate(), u));
    const SemigroupMembershipReport rep = semigroup_membership_n2(ch, cone);
    CHECK(rep.member);
    CHECK(rep.orthogonal_part_rotation);
    CHECK(rep.minus_log_p.norm() < 1e-8);
  }
}

TEST_CASE("dissipative flows from the orbit land inside exp(-cone) Ad") {
  // a product of flows dissipating along several conjugated axes has a
  // contraction part strictly inside the orbit cone, where the sampled
  // generators reproduce it exactly
  const double gamma = 0.4;
  const GeneratorCone cone = dephasing_orbit_cone(gamma, 128, 41);
  Rng rng(163);
  Matrix total = identity_matrix(4);
  for (int k = 0; k < 3; ++k) {
    const Matrix u = random_su2(rng);
    Superoperator l;
    l.dim = 2;
    l.matrix = Complex(0, 1) * hamiltonian_superop(random_hermitian(2, rng)).matrix +
               dissipator_superop(2, {u * test::dephasing_op(gamma) * u.adjoint()}).matrix;
    total = expm(-0.5 * l.matrix) * total;
  }
  QuantumChannel ch = QuantumChannel::from_superop(2, total);
  const SemigroupMembershipReport rep = semigroup_membership_n2(ch, cone, 1e-6);
  CHECK(rep.member);
}

TEST_CASE("membership requires unital trace-preserving single-qubit input") {
  const GeneratorCone cone = dephasing_orbit_cone(0.4, 16, 43);
  const Superoperator damping =
      dissipator_superop(2, {test::amplitude_damping_op(0.5)});
  QuantumChannel ch = QuantumChannel::from_generator(damping, 0.5);
  CHECK_THROWS_AS((void)semigroup_membership_n2(ch, cone), InputError);
}

TEST_CASE("Bloch-multiplier channel (-0.9,-0.8,0.72) sits on the cone boundary") {
  // polar analysis: T0 = diag(-0.9,-0.8,0.72) = P O with P = |T0| and
  // O = diag(-1,-1,1) a rotation; -log P = a*(x-dephasing) + b*(y-dephasing)
  // exactly because 0.9 * 0.8 = 0.72. The axis generators are in the
  // deterministic completion, so the verdict is member.
  const GeneratorCone cone = dephasing_orbit_cone(0.4, 128, 47);
  QuantumChannel ch = QuantumChannel::from_superop(
      2, test::pauli_channel_superop(-0.9, -0.8, 0.72));
  const SemigroupMembershipReport rep = semigroup_membership_n2(ch, cone, 1e-6);
  CHECK(rep.orthogonal_part_rotation);
  CHECK(rep.det_orthogonal == doctest::Approx(1.0));
  CHECK(rep.member);
}

TEST_CASE("conjugating a cone element preserves the membership verdict") {
  Rng rng(157);
  const GeneratorCone cone = dephasing_orbit_cone(0.4, 128, 53);
  // interior element (three distinct dissipation axes) stays interior under
  // conjugation, so the verdict is stable under rotations
  RealMatrix x = 0.7 * cone.generators[2] + 1.1 * cone.generators[5] +
                 0.9 * cone.generators[9];
  const ConeMembershipReport direct = cone_membership(x, cone, 1e-6);
  CHECK(direct.member);
  for (int trial = 0; trial < 3; ++trial) {
    const RealMatrix theta = adjoint_rep(random_su2(rng));
    const RealMatrix conj = theta * x * theta.transpose();
    const ConeMembershipReport rotated = cone_membership(conj, cone, 1e-6);
    CHECK(rotated.member == direct.member);
  }
}

TEST_CASE("products with commuting contraction parts stay members") {
  const double gamma = 0.4;
  const GeneratorCone cone = dephasing_orbit_cone(gamma, 128, 59);
  // both factors dissipate along z, rotations about z commute with that
  Superoperator l;
  l.dim = 2;
  l.matrix = Complex(0, 1) * hamiltonian_superop(0.5 * pauli_z()).matrix +
             dissipator_superop(2, {test::dephasing_op(gamma)}).matrix;
  QuantumChannel t1 = QuantumChannel::from_generator(l, 0.5);
  QuantumChannel t2 = QuantumChannel::from_generator(l, 0.9);
  CHECK(semigroup_membership_n2(t1, cone, 1e-6).member);
  CHECK(semigroup_membership_n2(t2, cone, 1e-6).member);
  QuantumChannel prod = compose(t1, t2);
  CHECK(semigroup_membership_n2(prod, cone, 1e-6).member);
}
