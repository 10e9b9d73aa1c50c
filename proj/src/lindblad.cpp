#include "openqs/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace openqs {

LindbladGenerator LindbladGenerator::checked(Matrix h_d,
                                             std::vector<Matrix> h_controls,
                                             std::vector<Matrix> vs,
                                             double hermiticity_tol) {
  LindbladGenerator g;
  g.dim = static_cast<int>(h_d.rows());
  if (h_d.rows() != h_d.cols()) {
    throw InputError("LindbladGenerator: drift Hamiltonian must be square");
  }
  ensure_finite(h_d, "drift Hamiltonian");
  if (!is_hermitian(h_d, hermiticity_tol)) {
    throw InputError("LindbladGenerator: drift Hamiltonian is not Hermitian");
  }
  for (size_t j = 0; j < h_controls.size(); ++j) {
    const Matrix& h = h_controls[j];
    if (h.rows() != g.dim || h.cols() != g.dim) {
      throw InputError("LindbladGenerator: control Hamiltonian dimension mismatch");
    }
    ensure_finite(h, "control Hamiltonian");
    if (!is_hermitian(h, hermiticity_tol)) {
      std::ostringstream os;
      os << "LindbladGenerator: control Hamiltonian " << j << " is not Hermitian";
      throw InputError(os.str());
    }
  }
  for (const Matrix& v : vs) {
    if (v.rows() != g.dim || v.cols() != g.dim) {
      throw InputError("LindbladGenerator: Lindblad operator dimension mismatch");
    }
    ensure_finite(v, "Lindblad operator");
  }
  g.drift_hamiltonian = std::move(h_d);
  g.control_hamiltonians = std::move(h_controls);
  g.lindblad_ops = std::move(vs);
  return g;
}

DensityMatrix DensityMatrix::checked(const Matrix& rho, double psd_tol,
                                     double trace_tol) {
  DensityMatrix d;
  d.dim = static_cast<int>(rho.rows());
  if (rho.rows() != rho.cols()) {
    throw ValidationError("DensityMatrix: must be square");
  }
  ensure_finite(rho, "density matrix");
  if (!is_hermitian(rho, 1e-8)) {
    throw ValidationError("DensityMatrix: not Hermitian within tolerance");
  }
  const double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (tr_err > trace_tol) {
    std::ostringstream os;
    os << "DensityMatrix: trace deviates from 1 by " << tr_err;
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rho),
                                           Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues().minCoeff();
  if (lam_min < -psd_tol) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << lam_min;
    throw ValidationError(os.str());
  }
  d.rho = rho;
  return d;
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  DensityMatrix d;
  d.dim = dim;
  d.rho = Matrix::Identity(dim, dim) / static_cast<double>(dim);
  return d;
}

Superoperator hamiltonian_superop(const Matrix& h, double hermiticity_tol) {
  if (h.rows() != h.cols()) {
    throw InputError("hamiltonian_superop: Hamiltonian must be square");
  }
  if (!is_hermitian(h, hermiticity_tol)) {
    throw InputError("hamiltonian_superop: input is not Hermitian");
  }
  const Eigen::Index n = h.rows();
  Superoperator s;
  s.dim = static_cast<int>(n);
  s.matrix = kron(identity_matrix(n), h) - kron(h.transpose(), identity_matrix(n));
  return s;
}

Superoperator dissipator_superop(int dim, const std::vector<Matrix>& vs) {
  Superoperator s;
  s.dim = dim;
  s.matrix = Matrix::Zero(dim * dim, dim * dim);
  const Matrix id = identity_matrix(dim);
  for (const Matrix& v : vs) {
    if (v.rows() != dim || v.cols() != dim) {
      throw InputError("dissipator_superop: operator dimension mismatch");
    }
    const Matrix vdv = v.adjoint() * v;
    s.matrix += 0.5 * (kron(id, vdv) + kron(vdv.transpose(), id)) -
                kron(v.conjugate(), v);
  }
  return s;
}

Superoperator full_generator(const LindbladGenerator& g,
                             const RealVector& controls) {
  if (controls.size() != static_cast<Eigen::Index>(g.control_hamiltonians.size())) {
    throw InputError("full_generator: control amplitude count mismatch");
  }
  Matrix h_u = g.drift_hamiltonian;
  for (Eigen::Index j = 0; j < controls.size(); ++j) {
    h_u += controls(j) * g.control_hamiltonians[static_cast<size_t>(j)];
  }
  Superoperator s;
  s.dim = g.dim;
  s.matrix = Complex(0, 1) * hamiltonian_superop(h_u).matrix +
             dissipator_superop(g.dim, g.lindblad_ops).matrix;
  return s;
}

Schedule Schedule::uniform(double horizon, const Eigen::MatrixXd& amplitudes) {
  if (horizon <= 0.0) throw InputError("Schedule: horizon must be positive");
  Schedule s;
  const Eigen::Index segments = amplitudes.rows();
  if (segments < 1) throw InputError("Schedule: needs at least one segment");
  s.edges.resize(static_cast<size_t>(segments) + 1);
  for (Eigen::Index k = 0; k <= segments; ++k) {
    s.edges[static_cast<size_t>(k)] =
        horizon * static_cast<double>(k) / static_cast<double>(segments);
  }
  s.amplitudes = amplitudes;
  return s;
}

namespace {

RealVector control_at(const Schedule& schedule, double t, Eigen::Index m) {
  if (schedule.empty()) return RealVector::Zero(m);
  // find segment with edges[s] <= t < edges[s+1]; clamp to the last one
  size_t s = 0;
  while (s + 2 < schedule.edges.size() && t >= schedule.edges[s + 1]) ++s;
  return schedule.amplitudes.row(static_cast<Eigen::Index>(s)).transpose();
}

}  // namespace

Trajectory propagate(const LindbladGenerator& g, const Schedule& schedule,
                     const DensityMatrix& rho0, const std::vector<double>& grid,
                     double psd_tol) {
  if (grid.empty() || grid.front() != 0.0) {
    throw InputError("propagate: grid must start at 0");
  }
  for (size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) {
      throw InputError("propagate: grid must be strictly increasing");
    }
  }
  if (rho0.dim != g.dim) throw InputError("propagate: state dimension mismatch");

  // breakpoints = grid points plus schedule edges falling inside the horizon
  std::vector<double> events(grid.begin(), grid.end());
  if (!schedule.empty()) {
    for (double e : schedule.edges) {
      if (e > 0.0 && e < grid.back()) events.push_back(e);
    }
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  const Eigen::Index m = static_cast<Eigen::Index>(g.control_hamiltonians.size());
  Trajectory traj;
  traj.times.reserve(grid.size());
  traj.states.reserve(grid.size());

  Vector v = vec(rho0.rho);
  size_t grid_pos = 0;
  double t_prev = 0.0;
  auto record = [&](double t) {
    Matrix rho = unvec(v, g.dim);
    try {
      traj.states.push_back(DensityMatrix::checked(rho, psd_tol, 1e-9));
    } catch (const ValidationError& err) {
      std::ostringstream os;
      os << "propagate: state validation failed at t = " << t << " (step "
         << traj.times.size() << "): " << err.what();
      throw ValidationError(os.str());
    }
    traj.times.push_back(t);
  };

  if (grid[grid_pos] == 0.0) {
    record(0.0);
    ++grid_pos;
  }
  for (double t : events) {
    if (t == 0.0) continue;
    const double dt = t - t_prev;
    if (dt > 0.0) {
      const Superoperator l = full_generator(g, control_at(schedule, t_prev, m));
      v = expm(-dt * l.matrix) * v;
      t_prev = t;
    }
    if (grid_pos < grid.size() && grid[grid_pos] == t) {
      record(t);
      ++grid_pos;
    }
  }
  return traj;
}

bool is_unital(const LindbladGenerator& g, double tol) {
  Matrix gamma_of_id = Matrix::Zero(g.dim, g.dim);
  double scale = 1.0;
  for (const Matrix& v : g.lindblad_ops) {
    gamma_of_id += v.adjoint() * v - v * v.adjoint();
    scale = std::max(scale, hs_norm(v) * hs_norm(v));
  }
  return hs_norm(gamma_of_id) <= tol * scale;
}

bool is_purity_decreasing(const LindbladGenerator& g,
                          const std::vector<double>& t_grid, double sv_tol) {
  const bool unital = is_unital(g);
  const Superoperator gamma = dissipator_superop(g.dim, g.lindblad_ops);
  double max_sv = 0.0;
  for (double t : t_grid) {
    if (t < 0.0) throw InputError("is_purity_decreasing: negative time");
    const RealMatrix rep = real_rep_full(expm(-t * gamma.matrix), g.dim);
    Eigen::JacobiSVD<RealMatrix> svd(rep);
    max_sv = std::max(max_sv, svd.singularValues().maxCoeff());
  }
  const bool contractive = max_sv <= 1.0 + sv_tol;
  if (contractive != unital) {
    std::ostringstream os;
    os << "is_purity_decreasing: unitality verdict (" << unital
       << ") disagrees with the contraction cross-check (largest singular "
          "value "
       << max_sv << "); numerical failure or pathological time grid";
    throw ValidationError(os.str());
  }
  return unital;
}

RealMatrix restrict_to_traceless(const Superoperator& s, double tol) {
  return real_rep_traceless(s.matrix, s.dim, tol);
}

}  // namespace openqs
