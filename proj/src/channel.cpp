#include "openqs/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace openqs {

QuantumChannel QuantumChannel::from_superop(int dim, Matrix m) {
  if (m.rows() != dim * dim || m.cols() != dim * dim) {
    throw InputError("QuantumChannel: matrix must be dim^2 x dim^2");
  }
  ensure_finite(m, "channel matrix");
  QuantumChannel t;
  t.dim = dim;
  t.matrix = std::move(m);
  return t;
}

QuantumChannel QuantumChannel::from_generator(const Superoperator& l, double t) {
  if (t < 0.0) throw InputError("QuantumChannel::from_generator: negative time");
  return from_superop(l.dim, expm(-t * l.matrix));
}

Matrix choi_from_superop(const Matrix& superop, int dim) {
  const int n = dim;
  if (superop.rows() != n * n || superop.cols() != n * n) {
    throw InputError("choi_from_superop: superoperator must be n^2 x n^2");
  }
  Matrix c(n * n, n * n);
  for (int p1 = 0; p1 < n; ++p1)
    for (int p2 = 0; p2 < n; ++p2)
      for (int q1 = 0; q1 < n; ++q1)
        for (int q2 = 0; q2 < n; ++q2)
          c(p1 * n + p2, q1 * n + q2) = superop(q1 * n + p1, q2 * n + p2);
  return c;
}

Matrix superop_from_choi(const Matrix& choi, int dim) {
  const int n = dim;
  if (choi.rows() != n * n || choi.cols() != n * n) {
    throw InputError("superop_from_choi: Choi matrix must be n^2 x n^2");
  }
  Matrix s(n * n, n * n);
  for (int p1 = 0; p1 < n; ++p1)
    for (int p2 = 0; p2 < n; ++p2)
      for (int q1 = 0; q1 < n; ++q1)
        for (int q2 = 0; q2 < n; ++q2)
          s(q1 * n + p1, q2 * n + p2) = choi(p1 * n + p2, q1 * n + q2);
  return s;
}

bool is_hermiticity_preserving(QuantumChannel& t, double tol) {
  const Matrix c = choi_from_superop(t.matrix, t.dim);
  const bool herm = is_hermitian(c, tol);
  t.hermiticity_preserving = FlagWithTol{herm, tol};
  return herm;
}

CpReport is_completely_positive(QuantumChannel& t, double tol) {
  if (!t.hermiticity_preserving) is_hermiticity_preserving(t, std::max(tol, 1e-8));
  if (!t.hermiticity_preserving->value) {
    throw InputError(
        "is_completely_positive: channel is not Hermiticity-preserving");
  }
  const Matrix c = choi_from_superop(t.matrix, t.dim);
  const PsdReport psd = psd_check(hermitian_part(c), tol);
  t.completely_positive = FlagWithTol{psd.psd, tol};
  CpReport rep;
  rep.completely_positive = psd.psd;
  rep.min_choi_eigenvalue = psd.min_eigenvalue;
  return rep;
}

bool is_trace_preserving(QuantumChannel& t, double tol) {
  const Vector id_vec = vec(identity_matrix(t.dim));
  const Vector row = t.matrix.adjoint() * id_vec;  // (vec(1)^+ T)^+
  const double err = (row - id_vec).norm();
  const bool tp = err <= tol * std::max(1.0, t.matrix.norm());
  t.trace_preserving = FlagWithTol{tp, tol};
  return tp;
}

std::vector<Matrix> WedgeMembershipReport::lindblad_ops(int dim,
                                                        double cutoff) const {
  std::vector<Matrix> ops;
  if (kossakowski.size() == 0) return ops;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(kossakowski));
  const auto gm = gell_mann_basis(dim);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lam = es.eigenvalues()(k);
    if (lam <= cutoff) continue;
    // A = sum_k conj(w_k) w_k^T with V_k = sum_i w_{ki} F_i, so the Kraus
    // vector for eigenpair (lam, u) is w = sqrt(lam) * conj(u).
    Matrix v = Matrix::Zero(dim, dim);
    for (size_t i = 0; i < gm.size(); ++i) {
      v += std::sqrt(lam) *
           std::conj(es.eigenvectors()(static_cast<Eigen::Index>(i), k)) *
           gm[i];
    }
    ops.push_back(v);
  }
  return ops;
}

WedgeMembershipReport kl_wedge_membership(const Superoperator& l,
                                          double eigenvalue_tol,
                                          double residual_tol) {
  const int n = l.dim;
  const int d = n * n - 1;
  WedgeMembershipReport rep;
  rep.hamiltonian = Matrix::Zero(n, n);
  rep.kossakowski = Matrix::Zero(d, d);

  const double scale = std::max(1.0, l.matrix.norm());

  // precondition: the map must preserve Hermitian matrices
  const Matrix choi = choi_from_superop(l.matrix, n);
  if (!is_hermitian(choi, eigenvalue_tol)) {
    rep.diagnosis = "not Hermiticity-preserving";
    return rep;
  }
  // precondition: tr L(rho) = 0, i.e. vec(1)^+ L = 0
  const Vector id_vec = vec(identity_matrix(n));
  if ((l.matrix.adjoint() * id_vec).norm() > eigenvalue_tol * scale) {
    rep.diagnosis = "not trace-annihilating";
    return rep;
  }

  // Expand L(rho) = sum_{ij} c_ij F_i rho F_j over the full Hermitian basis
  // (F_0 = 1/sqrt(n)); the superoperators F_j^T kron F_i are orthonormal.
  const auto basis = hermitian_basis(n);
  Matrix c(d + 1, d + 1);
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      const Matrix e = kron(basis[static_cast<size_t>(j)].transpose(),
                            basis[static_cast<size_t>(i)]);
      c(i, j) = e.conjugate().cwiseProduct(l.matrix).sum();
    }
  }

  // Traceless block carries the dissipative part: c_ij = -A_ji there.
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = -c(j + 1, i + 1);
  a = hermitian_part(a);

  // Hamiltonian from the cross terms: c_i0 - c_0i = 2i sqrt(n) h_i.
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  Matrix h = Matrix::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    const Complex diff = c(i + 1, 0) - c(0, i + 1);
    const double h_i = (diff / Complex(0, 2.0 * sqrt_n)).real();
    h += h_i * basis[static_cast<size_t>(i + 1)];
  }

  // Reconstruct and measure the residual; everything the (H, A) pair cannot
  // express (trace leakage, non-Hermitian parts) lands here.
  Matrix gamma_hat = Matrix::Zero(n * n, n * n);
  const Matrix id = identity_matrix(n);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (a(i, j) == Complex(0, 0)) continue;
      const Matrix fifj = basis[static_cast<size_t>(i + 1)] *
                          basis[static_cast<size_t>(j + 1)];
      gamma_hat += a(i, j) *
                   (0.5 * (kron(id, fifj) + kron(fifj.transpose(), id)) -
                    kron(basis[static_cast<size_t>(i + 1)].transpose(),
                         basis[static_cast<size_t>(j + 1)]));
    }
  }
  const Matrix rec =
      Complex(0, 1) * hamiltonian_superop(h).matrix + gamma_hat;
  rep.residual = (rec - l.matrix).norm() / scale;

  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  rep.min_kossakowski_eigenvalue = es.eigenvalues().minCoeff();
  const double lam_max = std::max(0.0, es.eigenvalues().maxCoeff());

  rep.hamiltonian = h;
  rep.kossakowski = a;
  const bool psd = rep.min_kossakowski_eigenvalue >=
                   -eigenvalue_tol * std::max(1.0, lam_max);
  const bool small_residual = rep.residual <= residual_tol;
  rep.member = psd && small_residual;
  if (!rep.member) {
    std::ostringstream os;
    if (!psd) os << "Kossakowski matrix has negative eigenvalue "
                 << rep.min_kossakowski_eigenvalue;
    if (!small_residual) {
      if (!psd) os << "; ";
      os << "reconstruction residual " << rep.residual;
    }
    rep.diagnosis = os.str();
  }
  return rep;
}

std::string to_string(MarkovVerdict v) {
  switch (v) {
    case MarkovVerdict::TiMarkovian: return "TI-Markovian";
    case MarkovVerdict::NoRealLog: return "not-TI-Markovian(no real log)";
    case MarkovVerdict::WedgeFails:
      return "not-TI-Markovian(log exists, wedge fails)";
    case MarkovVerdict::Inconclusive: return "inconclusive(branch ambiguity)";
  }
  return "unknown";
}

TiMarkovReport is_ti_markovian(QuantumChannel& t, double tol) {
  // preconditions: invertible, CP, TP
  Eigen::JacobiSVD<Matrix> svd(t.matrix);
  const double sv_min = svd.singularValues().minCoeff();
  const double sv_max = svd.singularValues().maxCoeff();
  if (sv_min <= 1e-12 * std::max(1.0, sv_max)) {
    throw InputError("is_ti_markovian: channel is not invertible");
  }
  if (!t.completely_positive) is_completely_positive(t, tol);
  if (!t.trace_preserving) is_trace_preserving(t, std::max(tol, 1e-10));
  if (!t.completely_positive->value || !t.trace_preserving->value) {
    throw InputError("is_ti_markovian: channel must be CP and TP");
  }

  TiMarkovReport rep;
  const LogmResult lr = logm_principal(t.matrix);
  if (lr.status == LogmStatus::NegativeRealEigenvalue) {
    rep.verdict = MarkovVerdict::NoRealLog;
    rep.diagnosis = lr.diagnosis;
    return rep;
  }
  if (lr.status == LogmStatus::BranchAmbiguity) {
    rep.verdict = MarkovVerdict::Inconclusive;
    rep.diagnosis = lr.diagnosis;
    return rep;
  }
  Superoperator gen;
  gen.dim = t.dim;
  gen.matrix = -lr.log;
  WedgeMembershipReport wr = kl_wedge_membership(gen, tol, std::max(tol, 1e-8));
  rep.wedge = wr;
  if (wr.member) {
    rep.verdict = MarkovVerdict::TiMarkovian;
    rep.generator = gen;
  } else {
    rep.verdict = MarkovVerdict::WedgeFails;
    rep.diagnosis = wr.diagnosis;
  }
  return rep;
}

EffectiveLiouvillianReport effective_liouvillian(const QuantumChannel& t,
                                                 double t_eff, double tol) {
  if (t_eff <= 0.0) {
    throw InputError("effective_liouvillian: t_eff must be positive");
  }
  EffectiveLiouvillianReport rep;
  const LogmResult lr = logm_principal(t.matrix);
  if (!lr.ok()) {
    rep.diagnosis = lr.diagnosis;
    return rep;
  }
  rep.has_log = true;
  rep.l_eff.dim = t.dim;
  rep.l_eff.matrix = -lr.log / t_eff;
  const Matrix reproduced = expm(-t_eff * rep.l_eff.matrix);
  rep.reproduction_error =
      (reproduced - t.matrix).norm() / std::max(1.0, t.matrix.norm());
  rep.reproduces = rep.reproduction_error <= tol;
  rep.wedge = kl_wedge_membership(rep.l_eff, 1e-8, 1e-9);
  return rep;
}

QuantumChannel compose(const QuantumChannel& t1, const QuantumChannel& t2) {
  if (t1.dim != t2.dim) throw InputError("compose: dimension mismatch");
  QuantumChannel out = QuantumChannel::from_superop(t1.dim, t2.matrix * t1.matrix);
  auto merge = [](const std::optional<FlagWithTol>& a,
                  const std::optional<FlagWithTol>& b)
      -> std::optional<FlagWithTol> {
    if (a && b && a->value && b->value) {
      return FlagWithTol{true, std::max(a->tol, b->tol)};
    }
    return std::nullopt;
  };
  out.trace_preserving = merge(t1.trace_preserving, t2.trace_preserving);
  out.hermiticity_preserving =
      merge(t1.hermiticity_preserving, t2.hermiticity_preserving);
  out.completely_positive =
      merge(t1.completely_positive, t2.completely_positive);
  return out;
}

}  // namespace openqs
