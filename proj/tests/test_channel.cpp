#include <doctest.h>

#include <cmath>

#include "openqs/channel.hpp"
#include "openqs/random.hpp"
#include "test_helpers.hpp"

using namespace openqs;
using test::max_abs_diff;

namespace {

Matrix transpose_map_superop() {
  Matrix s = Matrix::Zero(4, 4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) s(r + 2 * c, c + 2 * r) = 1.0;
  return s;
}

Matrix choi_from_kraus(const std::vector<Matrix>& kraus, int n) {
  // direct construction C = sum_ij T(E_ij) kron E_ij
  Matrix c = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      Matrix te = Matrix::Zero(n, n);
      for (const Matrix& k : kraus) te += k * e * k.adjoint();
      c += kron(te, e);
    }
  }
  return c;
}

}  // namespace

TEST_CASE("Choi of the identity channel is the maximally entangled projector") {
  const Matrix c = choi_from_superop(identity_matrix(4), 2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(2.0));
  // rank one
  CHECK(es.eigenvalues().head(3).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Choi of the transpose map is the swap with eigenvalues +-1") {
  const Matrix c = choi_from_superop(transpose_map_superop(), 2);
  Matrix swap = Matrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = 1.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  CHECK(max_abs_diff(c, swap) < 1e-15);
}

TEST_CASE("Choi of amplitude damping at half-decay matches the Kraus oracle") {
  const double t = std::log(2.0);  // gamma = 1
  const Superoperator gamma = dissipator_superop(2, {test::amplitude_damping_op(1.0)});
  const Matrix channel = expm(-t * gamma.matrix);
  const Matrix c = choi_from_superop(channel, 2);

  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(0.5);
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(0.5);
  const Matrix oracle = choi_from_kraus({k0, k1}, 2);
  CHECK((c - oracle).norm() < 1e-12);

  const PsdReport psd = psd_check(hermitian_part(c), 1e-10);
  CHECK(psd.psd);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(c),
                                           Eigen::EigenvaluesOnly);
  int rank = 0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (es.eigenvalues()(i) > 1e-10) ++rank;
  }
  CHECK(rank == 2);
}

TEST_CASE("superop/Choi transforms invert each other") {
  Rng rng(83);
  for (int n : {2, 3}) {
    const Matrix m = random_complex(n * n, n * n, rng);
    CHECK((superop_from_choi(choi_from_superop(m, n), n) - m).norm() == 0.0);
  }
}

TEST_CASE("flows of generators are completely positive at all times") {
  Rng rng(89);
  const LindbladGenerator g = test::random_generator(2, 0, 2, rng);
  const Superoperator l = full_generator(g, RealVector::Zero(0));
  for (double t : {0.05, 0.4, 2.0}) {
    QuantumChannel ch = QuantumChannel::from_generator(l, t);
    CHECK(is_completely_positive(ch).completely_positive);
  }
}

TEST_CASE("transpose map is not completely positive") {
  QuantumChannel ch = QuantumChannel::from_superop(2, transpose_map_superop());
  const CpReport rep = is_completely_positive(ch);
  CHECK_FALSE(rep.completely_positive);
  CHECK(rep.min_choi_eigenvalue == doctest::Approx(-1.0));
}

TEST_CASE("negating the dissipator breaks complete positivity at small times") {
  const Superoperator gamma = dissipator_superop(2, {test::amplitude_damping_op(1.0)});
  Superoperator negated;
  negated.dim = 2;
  negated.matrix = -gamma.matrix;
  bool violated = false;
  for (double t : {0.01, 0.05, 0.1}) {
    QuantumChannel ch = QuantumChannel::from_generator(negated, t);
    if (!is_completely_positive(ch).completely_positive) violated = true;
  }
  CHECK(violated);
}

TEST_CASE("trace preservation test") {
  QuantumChannel id = QuantumChannel::from_superop(2, identity_matrix(4));
  CHECK(is_trace_preserving(id));

  QuantumChannel half = QuantumChannel::from_superop(2, 0.5 * identity_matrix(4));
  CHECK_FALSE(is_trace_preserving(half));

  Rng rng(97);
  const LindbladGenerator g = test::random_generator(2, 0, 2, rng);
  const Superoperator l = full_generator(g, RealVector::Zero(0));
  for (double t : {0.3, 1.7}) {
    QuantumChannel ch = QuantumChannel::from_generator(l, t);
    CHECK(is_trace_preserving(ch));
  }
}

TEST_CASE("wedge membership of a pure Hamiltonian generator") {
  Superoperator l;
  l.dim = 2;
  l.matrix = Complex(0, 1) * hamiltonian_superop(pauli_z()).matrix;
  const WedgeMembershipReport rep = kl_wedge_membership(l);
  CHECK(rep.member);
  CHECK(rep.residual < 1e-12);
  CHECK(max_abs_diff(rep.hamiltonian, pauli_z()) < 1e-12);
  CHECK(rep.kossakowski.norm() < 1e-12);
}

TEST_CASE("wedge membership of amplitude damping: rank-one coefficient matrix") {
  const double gamma = 0.8;
  const LindbladGenerator g = test::amplitude_damping_generator(gamma);
  const Superoperator l = full_generator(g, RealVector::Zero(0));
  const WedgeMembershipReport rep = kl_wedge_membership(l);
  CHECK(rep.member);
  CHECK(rep.residual < 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rep.kossakowski,
                                           Eigen::EigenvaluesOnly);
  // single noise operator: one positive eigenvalue, the rest zero
  CHECK(es.eigenvalues()(2) == doctest::Approx(gamma));
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-12);
  CHECK(std::abs(es.eigenvalues()(1)) < 1e-12);
  CHECK(rep.min_kossakowski_eigenvalue == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("negated dephasing is outside the wedge") {
  Superoperator l;
  l.dim = 2;
  l.matrix = Complex(0, 1) * hamiltonian_superop(pauli_z()).matrix -
             dissipator_superop(2, {test::dephasing_op(0.5)}).matrix;
  const WedgeMembershipReport rep = kl_wedge_membership(l);
  CHECK_FALSE(rep.member);
  CHECK(rep.min_kossakowski_eigenvalue < -1e-6);
}

TEST_CASE("wedge membership rejects non-generators with a diagnosis") {
  Superoperator bad;
  bad.dim = 2;
  bad.matrix = kron(identity_matrix(2), sigma_minus());
  const WedgeMembershipReport rep = kl_wedge_membership(bad);
  CHECK_FALSE(rep.member);
  CHECK(rep.diagnosis == "not Hermiticity-preserving");

  Superoperator leaky;
  leaky.dim = 2;
  leaky.matrix = identity_matrix(4);  // not trace-annihilating
  const WedgeMembershipReport rep2 = kl_wedge_membership(leaky);
  CHECK_FALSE(rep2.member);
  CHECK(rep2.diagnosis == "not trace-annihilating");
}

TEST_CASE("reconstructed noise operators reproduce the generator") {
  Rng rng(101);
  const LindbladGenerator g = test::random_generator(2, 0, 2, rng);
  const Superoperator l = full_generator(g, RealVector::Zero(0));
  const WedgeMembershipReport rep = kl_wedge_membership(l);
  REQUIRE(rep.member);
  const std::vector<Matrix> vs = rep.lindblad_ops(2);
  const Matrix rebuilt = Complex(0, 1) * hamiltonian_superop(rep.hamiltonian).matrix +
                         dissipator_superop(2, vs).matrix;
  CHECK((rebuilt - l.matrix).norm() <= 1e-9 * std::max(1.0, l.matrix.norm()));
}

TEST_CASE("identity channel is TI-Markovian with zero generator") {
  QuantumChannel id = QuantumChannel::from_superop(2, identity_matrix(4));
  const TiMarkovReport rep = is_ti_markovian(id);
  CHECK(rep.verdict == MarkovVerdict::TiMarkovian);
  REQUIRE(rep.generator.has_value());
  CHECK(rep.generator->matrix.norm() < 1e-12);
}

TEST_CASE("markovianity round trip recovers the generator") {
  Rng rng(103);
  const LindbladGenerator g = test::random_generator(2, 0, 1, rng, 0.4);
  Superoperator l = full_generator(g, RealVector::Zero(0));
  l.matrix *= 0.5;  // keep the flow inside the principal branch
  QuantumChannel ch = QuantumChannel::from_generator(l, 1.0);
  const TiMarkovReport rep = is_ti_markovian(ch);
  REQUIRE(rep.verdict == MarkovVerdict::TiMarkovian);
  CHECK((rep.generator->matrix - l.matrix).norm() <= 1e-8);
}

TEST_CASE("Bloch-multiplier channel (-0.9, -0.8, 0.72): CP but no real log") {
  QuantumChannel ch =
      QuantumChannel::from_superop(2, test::pauli_channel_superop(-0.9, -0.8, 0.72));
  const CpReport cp = is_completely_positive(ch, 1e-10);
  CHECK(cp.completely_positive);
  CHECK(cp.min_choi_eigenvalue >= -1e-10);
  const TiMarkovReport rep = is_ti_markovian(ch);
  CHECK(rep.verdict == MarkovVerdict::NoRealLog);
}

TEST_CASE("non-invertible channels are rejected") {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1.0;  // collapse map, singular
  QuantumChannel ch = QuantumChannel::from_superop(2, m);
  CHECK_THROWS_AS((void)is_ti_markovian(ch), InputError);
}

TEST_CASE("effective generator of a constant flow is the generator itself") {
  Rng rng(107);
  const LindbladGenerator g = test::random_generator(2, 0, 1, rng, 0.4);
  Superoperator l = full_generator(g, RealVector::Zero(0));
  l.matrix *= 0.3;
  const QuantumChannel ch = QuantumChannel::from_generator(l, 1.0);
  const EffectiveLiouvillianReport rep = effective_liouvillian(ch, 1.0);
  REQUIRE(rep.has_log);
  CHECK((rep.l_eff.matrix - l.matrix).norm() <= 1e-10 * std::max(1.0, l.matrix.norm()));
  CHECK(rep.reproduces);
}

TEST_CASE("effective generator of commuting segments is the weighted mean") {
  const double gamma = 0.4;
  Superoperator l1, l2;
  l1.dim = l2.dim = 2;
  l1.matrix = Complex(0, 1) * hamiltonian_superop(pauli_z()).matrix +
              dissipator_superop(2, {test::dephasing_op(gamma)}).matrix;
  l2.matrix = Complex(0, 1) * hamiltonian_superop(2.0 * pauli_z()).matrix +
              dissipator_superop(2, {test::dephasing_op(2 * gamma)}).matrix;
  CHECK((l1.matrix * l2.matrix - l2.matrix * l1.matrix).norm() < 1e-12);

  // durations short enough that the combined phases stay on the principal
  // branch, so the logarithm recovers the duration-weighted average exactly
  const double t1 = 0.2, t2 = 0.3;
  QuantumChannel ch = QuantumChannel::from_superop(
      2, expm(-t2 * l2.matrix) * expm(-t1 * l1.matrix));
  const EffectiveLiouvillianReport rep = effective_liouvillian(ch, t1 + t2);
  REQUIRE(rep.has_log);
  const Matrix expected = (t1 * l1.matrix + t2 * l2.matrix) / (t1 + t2);
  CHECK((rep.l_eff.matrix - expected).norm() <= 1e-10);
}

TEST_CASE("effective generator of non-commuting segments reproduces the flow") {
  const double gamma = 0.3;
  Superoperator l1, l2;
  l1.dim = l2.dim = 2;
  l1.matrix = Complex(0, 1) * hamiltonian_superop(pauli_z()).matrix +
              dissipator_superop(2, {test::dephasing_op(gamma)}).matrix;
  l2.matrix = Complex(0, 1) * hamiltonian_superop(pauli_x()).matrix +
              dissipator_superop(2, {test::dephasing_op(gamma)}).matrix;

  const double t1 = 0.3, t2 = 0.3;
  QuantumChannel ch = QuantumChannel::from_superop(
      2, expm(-t2 * l2.matrix) * expm(-t1 * l1.matrix));
  const EffectiveLiouvillianReport rep = effective_liouvillian(ch, t1 + t2, 1e-9);
  REQUIRE(rep.has_log);
  CHECK(rep.reproduces);
  CHECK(rep.reproduction_error <= 1e-9);
  REQUIRE(rep.wedge.has_value());
  // regression values: mixing dissipation axes pushes the effective
  // coefficient matrix slightly indefinite, so the average flow matches the
  // endpoint but is not itself a valid generator
  CHECK_FALSE(rep.wedge->member);
  CHECK(rep.wedge->min_kossakowski_eigenvalue < -1e-4);
}

TEST_CASE("compose applies left factor first and propagates flags") {
  Rng rng(109);
  const LindbladGenerator g = test::random_generator(2, 0, 1, rng);
  const Superoperator l = full_generator(g, RealVector::Zero(0));
  QuantumChannel a = QuantumChannel::from_generator(l, 0.4);
  QuantumChannel id = QuantumChannel::from_superop(2, identity_matrix(4));
  CHECK(max_abs_diff(compose(a, id).matrix, a.matrix) == 0.0);

  QuantumChannel b = QuantumChannel::from_generator(l, 0.6);
  const QuantumChannel ab = compose(a, b);
  CHECK((ab.matrix - expm(-1.0 * l.matrix)).norm() <= 1e-10 * ab.matrix.norm());

  is_completely_positive(a);
  is_completely_positive(b);
  QuantumChannel ab2 = compose(a, b);
  REQUIRE(ab2.completely_positive.has_value());
  CHECK(ab2.completely_positive->value);
  CHECK(is_completely_positive(ab2).completely_positive);
}

TEST_CASE("random generators land in the wedge and their flows are CP") {
  Rng rng(113);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 3;
    const LindbladGenerator g = test::random_generator(dim, 0, 2, rng);
    const Superoperator l = full_generator(g, RealVector::Zero(0));
    const WedgeMembershipReport rep = kl_wedge_membership(l);
    CHECK(rep.member);
    CHECK(rep.residual <= 1e-9);
    // reconstructed action matches
    const Matrix rho = random_density(dim, rng);
    const std::vector<Matrix> vs = rep.lindblad_ops(dim);
    const Matrix rebuilt =
        Complex(0, 1) * hamiltonian_superop(rep.hamiltonian).matrix +
        dissipator_superop(dim, vs).matrix;
    CHECK((unvec(rebuilt * vec(rho), dim) - l.apply(rho)).norm() <= 1e-9);
  }
}

TEST_CASE("the wedge is convex") {
  Rng rng(127);
  for (int trial = 0; trial < 5; ++trial) {
    const Superoperator l1 =
        full_generator(test::random_generator(2, 0, 2, rng), RealVector::Zero(0));
    const Superoperator l2 =
        full_generator(test::random_generator(2, 0, 2, rng), RealVector::Zero(0));
    const double w = rng.uniform();
    Superoperator mix;
    mix.dim = 2;
    mix.matrix = w * l1.matrix + (1.0 - w) * l2.matrix;
    CHECK(kl_wedge_membership(mix).member);
  }
}

TEST_CASE("the wedge is invariant under unitary conjugation") {
  Rng rng(131);
  for (int trial = 0; trial < 5; ++trial) {
    const Superoperator l =
        full_generator(test::random_generator(2, 0, 2, rng), RealVector::Zero(0));
    const Matrix u = random_su(2, rng);
    const Matrix ad_u = kron(u.conjugate(), u);
    Superoperator conj;
    conj.dim = 2;
    conj.matrix = ad_u * l.matrix * ad_u.adjoint();
    CHECK(kl_wedge_membership(conj).member);
  }
}

TEST_CASE("members exponentiate to CP flows, non-members fail CP quickly") {
  Rng rng(137);
  const LindbladGenerator g = test::random_generator(2, 0, 1, rng);
  const Superoperator l = full_generator(g, RealVector::Zero(0));
  Superoperator neg;
  neg.dim = 2;
  neg.matrix = Complex(0, 1) * hamiltonian_superop(g.drift_hamiltonian).matrix -
               dissipator_superop(2, g.lindblad_ops).matrix;
  bool member_all_cp = true;
  bool negated_violates = false;
  for (double t : {0.001, 0.01, 0.1, 1.0}) {
    QuantumChannel fwd = QuantumChannel::from_generator(l, t);
    member_all_cp &= is_completely_positive(fwd).completely_positive;
    if (t <= 0.1) {
      QuantumChannel bwd = QuantumChannel::from_generator(neg, t);
      negated_violates |= !is_completely_positive(bwd).completely_positive;
    }
  }
  CHECK(member_all_cp);
  CHECK(negated_violates);
}
