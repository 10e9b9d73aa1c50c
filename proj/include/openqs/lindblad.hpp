#pragma once

#include <optional>
#include <vector>

#include "openqs/basis.hpp"
#include "openqs/linalg.hpp"

namespace openqs {

// Conventions used throughout: the master equation is
//   rho_dot = -i [H_u, rho] - Gamma(rho) = -L_u(rho),
// with H_u = H_d + sum_j u_j H_j and the dissipator
//   Gamma(rho) = 1/2 sum_k (V_k^+ V_k rho + rho V_k^+ V_k - 2 V_k rho V_k^+),
// so L_u = i ad_{H_u} + Gamma and the flow is exp(-t L_u).

struct LindbladGenerator {
  int dim = 0;
  Matrix drift_hamiltonian;                   // H_d
  std::vector<Matrix> control_hamiltonians;   // H_j
  std::vector<Matrix> lindblad_ops;           // V_k (may be empty)

  /// Validates shapes and Hermiticity of the Hamiltonian parts.
  static LindbladGenerator checked(Matrix h_d, std::vector<Matrix> h_controls,
                                   std::vector<Matrix> vs,
                                   double hermiticity_tol = 1e-8);
};

/// An n^2 x n^2 matrix acting on column-stacked vec(rho).
struct Superoperator {
  int dim = 0;
  Matrix matrix;

  Matrix apply(const Matrix& rho) const { return unvec(matrix * vec(rho), dim); }
};

struct DensityMatrix {
  int dim = 0;
  Matrix rho;

  /// Validates Hermiticity, unit trace and positive semidefiniteness.
  /// psd_tol is an absolute bound on the most negative eigenvalue.
  static DensityMatrix checked(const Matrix& rho, double psd_tol = 1e-8,
                               double trace_tol = 1e-9);

  static DensityMatrix maximally_mixed(int dim);

  double purity() const { return hs_inner_re(rho, rho); }
};

/// H_hat = 1 kron H - H^T kron 1, so apply(H_hat, rho) = [H, rho].
Superoperator hamiltonian_superop(const Matrix& h, double hermiticity_tol = 1e-8);

/// Gamma_hat per the dissipator above (zero superoperator for an empty list).
Superoperator dissipator_superop(int dim, const std::vector<Matrix>& vs);

/// L_hat_u = i H_hat(H_d + sum u_j H_j) + Gamma_hat.
Superoperator full_generator(const LindbladGenerator& g,
                             const RealVector& controls);

/// Piecewise-constant control schedule on [0, edges.back()): segment s holds
/// amplitudes.row(s) on [edges[s], edges[s+1]).  An empty schedule means
/// drift only.
struct Schedule {
  std::vector<double> edges;      // size = segments + 1, edges[0] == 0
  Eigen::MatrixXd amplitudes;     // segments x n_controls

  static Schedule drift_only() { return {}; }
  static Schedule uniform(double horizon, const Eigen::MatrixXd& amplitudes);
  bool empty() const { return edges.empty(); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

/// Exact piecewise propagation by per-segment matrix exponentials. The grid
/// must start at 0 and increase strictly. Every output state is re-validated;
/// a failure names the offending time step.
Trajectory propagate(const LindbladGenerator& g, const Schedule& schedule,
                     const DensityMatrix& rho0, const std::vector<double>& grid,
                     double psd_tol = 1e-8);

/// Gamma(1) computed directly from the V_k; true iff it vanishes.
bool is_unital(const LindbladGenerator& g, double tol = 1e-10);

/// Unitality verdict cross-checked against the contraction property of the
/// dissipative flow on her(N): the largest singular value of exp(-t Gamma_hat)
/// must stay <= 1 + tol exactly when the generator is unital. A disagreement
/// between the two checks throws ValidationError.
bool is_purity_decreasing(const LindbladGenerator& g,
                          const std::vector<double>& t_grid,
                          double sv_tol = 1e-9);

/// Real matrix of the superoperator restricted to traceless Hermitian space.
RealMatrix restrict_to_traceless(const Superoperator& s, double tol = 1e-8);

}  // namespace openqs
