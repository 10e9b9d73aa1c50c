#include "openqs/wedge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "openqs/random.hpp"

namespace openqs {

namespace {

void check_cone_generator(const RealMatrix& g, int d, double psd_tol,
                          size_t index) {
  if (g.rows() != d || g.cols() != d) {
    throw InputError("GeneratorCone: generator size must be N^2-1");
  }
  const Matrix gc = g.cast<Complex>();
  const PsdReport psd = psd_check(gc, psd_tol);
  if (!psd.psd) {
    std::ostringstream os;
    os << "GeneratorCone: generator " << index
       << " is not PSD (min eigenvalue " << psd.min_eigenvalue << ")";
    throw InputError(os.str());
  }
  // PSD generators with positive trace certify pointedness: the trace is a
  // strictly positive functional on nonzero PSD elements, so no nonzero g
  // can have both g and -g as nonnegative combinations.
  if (g.trace() < -psd_tol) {
    throw InputError("GeneratorCone: generator with negative trace");
  }
}

}  // namespace

GeneratorCone GeneratorCone::user_supplied(int dim,
                                           std::vector<RealMatrix> generators,
                                           double psd_tol) {
  GeneratorCone cone;
  cone.dim = dim;
  const int d = dim * dim - 1;
  for (size_t i = 0; i < generators.size(); ++i) {
    generators[i] = 0.5 * (generators[i] + generators[i].transpose()).eval();
    check_cone_generator(generators[i], d, psd_tol, i);
  }
  cone.generators = std::move(generators);
  cone.provenance = "user-supplied";
  if (!cone.generators.empty()) cone.base = cone.generators.front();
  return cone;
}

GeneratorCone conjugation_orbit_cone(const Superoperator& dissipator,
                                     int samples, std::uint64_t seed,
                                     double psd_tol) {
  const int n = dissipator.dim;
  const int d = n * n - 1;
  const RealMatrix gamma0raw = restrict_to_traceless(dissipator);
  const double asym = (gamma0raw - gamma0raw.transpose()).norm();
  if (asym > 1e-8 * std::max(1.0, gamma0raw.norm())) {
    std::ostringstream os;
    os << "conjugation_orbit_cone: dissipator restriction is not "
          "self-adjoint (asymmetry "
       << asym << "); the orbit cone construction does not apply";
    throw InputError(os.str());
  }
  const RealMatrix gamma0 = 0.5 * (gamma0raw + gamma0raw.transpose());
  {
    const PsdReport psd = psd_check(gamma0.cast<Complex>(), psd_tol);
    if (!psd.psd) {
      std::ostringstream os;
      os << "conjugation_orbit_cone: dissipator restriction is not PSD "
            "(min eigenvalue "
         << psd.min_eigenvalue << ")";
      throw InputError(os.str());
    }
  }

  GeneratorCone cone;
  cone.dim = n;
  cone.provenance = "conjugation-orbit";
  cone.seed = seed;
  cone.sample_count = samples;
  cone.base = gamma0;

  std::vector<Matrix> unitaries;
  unitaries.push_back(identity_matrix(n));
  if (n == 2) {
    // quarter turns about the coordinate axes
    const Complex i_unit(0, 1);
    for (const Matrix& sigma : {pauli_x(), pauli_y(), pauli_z()}) {
      unitaries.push_back(expm(-i_unit * (M_PI / 4.0) * sigma));
    }
  }
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) unitaries.push_back(random_su(n, rng));

  for (size_t i = 0; i < unitaries.size(); ++i) {
    const RealMatrix theta = adjoint_rep(unitaries[i]);
    RealMatrix g = theta * gamma0 * theta.transpose();
    g = 0.5 * (g + g.transpose()).eval();
    check_cone_generator(g, d, psd_tol, i);
    if (g.norm() > 0) cone.generators.push_back(std::move(g));
  }
  return cone;
}

NnlsResult nnls(const RealMatrix& a, const RealVector& b,
                double stationarity_tol, int max_iterations) {
  const Eigen::Index m = a.cols();
  if (a.rows() != b.size()) throw InputError("nnls: shape mismatch");
  if (max_iterations <= 0) max_iterations = static_cast<int>(10 * m + 100);

  NnlsResult res;
  res.x = RealVector::Zero(m);
  std::vector<bool> passive(static_cast<size_t>(m), false);

  RealVector w = a.transpose() * (b - a * res.x);
  const double w_scale = std::max(1.0, (a.transpose() * b).cwiseAbs().maxCoeff());

  auto solve_passive = [&](const std::vector<bool>& set) -> RealVector {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (set[static_cast<size_t>(j)]) idx.push_back(j);
    }
    RealMatrix sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const RealVector z =
        sub.colPivHouseholderQr().solve(b);
    RealVector full = RealVector::Zero(m);
    for (size_t k = 0; k < idx.size(); ++k) full(idx[k]) = z(static_cast<Eigen::Index>(k));
    return full;
  };

  int iter = 0;
  while (iter < max_iterations) {
    // pick the most violated dual coordinate among the active set
    Eigen::Index best = -1;
    double best_w = stationarity_tol * w_scale;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!passive[static_cast<size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;  // KKT satisfied
    passive[static_cast<size_t>(best)] = true;

    RealVector z = solve_passive(passive);
    // inner loop: walk back until the passive solution is feasible
    while (true) {
      ++iter;
      bool feasible = true;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[static_cast<size_t>(j)] && z(j) <= 0.0) {
          feasible = false;
          const double denom = res.x(j) - z(j);
          if (denom > 0) alpha = std::min(alpha, res.x(j) / denom);
        }
      }
      if (feasible) {
        res.x = z;
        break;
      }
      res.x += alpha * (z - res.x);
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[static_cast<size_t>(j)] && res.x(j) <= 1e-14 * w_scale) {
          res.x(j) = 0.0;
          passive[static_cast<size_t>(j)] = false;
        }
      }
      if (iter >= max_iterations) break;
      z = solve_passive(passive);
    }
    w = a.transpose() * (b - a * res.x);
  }
  res.iterations = iter;
  res.residual = (a * res.x - b).norm();
  return res;
}

ConeMembershipReport cone_membership(const RealMatrix& x,
                                     const GeneratorCone& cone, double tol) {
  if (cone.generators.empty()) {
    throw InputError("cone_membership: cone has no generators");
  }
  const int d = cone.dim * cone.dim - 1;
  if (x.rows() != d || x.cols() != d) {
    throw InputError("cone_membership: element size must be N^2-1");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(cone.generators.size());
  RealMatrix a(static_cast<Eigen::Index>(d) * d, m);
  RealVector scales(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const RealMatrix& g = cone.generators[static_cast<size_t>(k)];
    const double s = std::max(g.norm(), 1e-300);
    scales(k) = s;
    a.col(k) = RealVector(Eigen::Map<const RealVector>(g.data(), g.size())) / s;
  }
  const RealVector b = Eigen::Map<const RealVector>(x.data(), x.size());

  const NnlsResult fit = nnls(a, b);
  ConeMembershipReport rep;
  rep.coefficients = fit.x.cwiseQuotient(scales);
  rep.residual = fit.residual / std::max(1.0, b.norm());
  rep.member = rep.residual <= tol;
  if (!rep.member) {
    rep.note = "non-membership is relative to the sampled generator set";
  }
  return rep;
}

WedgeConditionsReport check_wedge_conditions(const GeneratorCone& cone,
                                             double tol, int sample_unitaries,
                                             std::uint64_t seed) {
  WedgeConditionsReport rep;
  const int n = cone.dim;
  const int d = n * n - 1;

  // condition 1: the base dissipator lies in the cone
  {
    const ConeMembershipReport base = cone_membership(cone.base, cone, tol);
    rep.contains_dissipator = base.member;
    rep.dissipator_residual = base.residual;
  }

  // condition 2: [c, c] inside ad_su(N) and [c, ad_su(N)] inside span(c)
  {
    const auto gm = gell_mann_basis(n);
    std::vector<Matrix> rot;
    for (const auto& f : gm) {
      Superoperator ad;
      ad.dim = n;
      ad.matrix = Complex(0, 1) * hamiltonian_superop(f).matrix;
      rot.push_back(restrict_to_traceless(ad).cast<Complex>());
    }
    const OrthonormalBasis ad_su = orthonormalize(rot, 1e-12);

    std::vector<Matrix> span_gens;
    for (const auto& g : cone.generators) span_gens.push_back(g.cast<Complex>());
    const OrthonormalBasis span_c = orthonormalize(span_gens, 1e-12);

    auto residual_against = [](Matrix v, const OrthonormalBasis& basis) {
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis.elements) v -= hs_inner_re(b, v) * b;
      }
      return hs_norm(v);
    };

    double worst = 0.0;
    for (size_t i = 0; i < cone.generators.size(); ++i) {
      const Matrix gi = cone.generators[i].cast<Complex>();
      for (size_t j = i + 1; j < cone.generators.size(); ++j) {
        const Matrix gj = cone.generators[j].cast<Complex>();
        const Matrix br = gi * gj - gj * gi;
        worst = std::max(worst,
                         residual_against(br, ad_su) / std::max(1.0, hs_norm(br)));
      }
      for (const auto& k : ad_su.elements) {
        const Matrix br = gi * k - k * gi;
        worst = std::max(worst, residual_against(br, span_c) /
                                    std::max(1.0, hs_norm(br)));
      }
    }
    rep.bracket_residual = worst;
    rep.brackets_compatible = worst <= tol;
  }

  // condition 3: conjugation by fresh unitaries keeps elements in the cone
  {
    Rng rng(seed ^ 0x5bd1e995u);
    double worst = 0.0;
    for (int s = 0; s < sample_unitaries; ++s) {
      const RealMatrix theta = adjoint_rep(random_su(n, rng));
      // test the base element plus one random cone combination
      std::vector<RealMatrix> probes;
      probes.push_back(cone.base);
      RealMatrix combo = RealMatrix::Zero(d, d);
      for (const auto& g : cone.generators) {
        combo += rng.uniform() * g;
      }
      probes.push_back(combo);
      for (const auto& p : probes) {
        RealMatrix conj = theta * p * theta.transpose();
        conj = 0.5 * (conj + conj.transpose()).eval();
        const ConeMembershipReport fit = cone_membership(conj, cone, tol);
        worst = std::max(worst, fit.residual);
      }
    }
    rep.invariance_residual = worst;
    rep.ad_invariant = worst <= tol;
  }
  return rep;
}

SemigroupMembershipReport semigroup_membership_n2(QuantumChannel& t,
                                                  const GeneratorCone& cone,
                                                  double tol) {
  if (t.dim != 2) {
    throw InputError("semigroup_membership_n2: only N = 2 is supported");
  }
  if (!is_trace_preserving(t, 1e-8)) {
    throw InputError("semigroup_membership_n2: channel is not trace-preserving");
  }
  // unitality: T(1) = 1
  const Matrix t_of_id = unvec(t.matrix * vec(identity_matrix(2)), 2);
  if ((t_of_id - identity_matrix(2)).norm() > 1e-8 * std::max(1.0, t.matrix.norm())) {
    throw InputError("semigroup_membership_n2: channel is not unital");
  }

  const RealMatrix t0 = real_rep_traceless(t.matrix, 2, 1e-8);
  Eigen::JacobiSVD<RealMatrix> svd(t0, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  if (sv.minCoeff() <= 1e-12 * std::max(1.0, sv.maxCoeff())) {
    throw InputError("semigroup_membership_n2: restriction is singular");
  }

  SemigroupMembershipReport rep;
  const RealMatrix o = svd.matrixU() * svd.matrixV().transpose();
  rep.det_orthogonal = o.determinant();
  rep.orthogonal_part_rotation = rep.det_orthogonal > 0.0;

  // -log P from the polar factor P = U diag(sv) U^T
  RealMatrix minus_log_p =
      -(svd.matrixU() * sv.array().log().matrix().asDiagonal() *
        svd.matrixU().transpose());
  rep.minus_log_p = 0.5 * (minus_log_p + minus_log_p.transpose());

  rep.cone_fit = cone_membership(rep.minus_log_p, cone, tol);
  rep.member = rep.orthogonal_part_rotation && rep.cone_fit.member;
  if (!rep.orthogonal_part_rotation) {
    rep.note = "orthogonal polar factor has negative determinant";
  } else if (!rep.cone_fit.member) {
    rep.note = "-log(P) not expressible in the sampled cone";
  }
  return rep;
}

}  // namespace openqs
