#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "openqs/controllability.hpp"
#include "openqs/wedge.hpp"

namespace openqs {

struct StateTransferTarget {
  Matrix rho0;
  Matrix rho_final;
};

struct MapTarget {
  Matrix superop;  // target channel, vec basis n^2 x n^2
};

using ControlTarget = std::variant<StateTransferTarget, MapTarget>;

struct ControlProblem {
  LindbladGenerator generator;
  ControlTarget target;
  double horizon = 1.0;
  int segments = 1;
  std::optional<double> amplitude_bound;
  std::uint64_t seed = 0;

  /// The same problem with the dissipative part removed.
  ControlProblem closed_analogue() const;
};

struct ControlPulse {
  double dt = 0.0;
  Eigen::MatrixXd amplitudes;  // segments x n_controls
};

struct GrapeOptions {
  int max_iterations = 2000;
  int restarts = 8;
  double fd_step = 1e-5;            // relative central-difference step
  double stop_fidelity = 1.0 - 1e-9;
  double init_amplitude = 1.0;      // scale of random initial pulses
};

struct GrapeResult {
  ControlPulse pulse;
  double fidelity = 0.0;
  std::vector<double> fidelity_trace;  // monotone, winning restart
  int iterations = 0;
};

/// Piecewise-constant gradient ascent on the bilinear control system.
/// Fidelities: state transfer <rho_F, X rho_0> normalized by the state
/// norms; maps tr(T0^T X0)/(n^2-1) on the traceless sector. Gradients are
/// central finite differences with segment-propagator caching; line search
/// accepts only improvements, so the fidelity trace is non-decreasing.
/// Deterministic under the problem seed.
GrapeResult grape_optimize(const ControlProblem& p,
                           const GrapeOptions& options = {},
                           const std::optional<ControlPulse>& init = std::nullopt);

/// Fidelity of a fixed pulse (no optimization).
double pulse_fidelity(const ControlProblem& p, const ControlPulse& pulse);

/// One central-difference partial derivative at the given absolute step;
/// exposed for convergence-order checks.
double grape_fd_derivative(const ControlProblem& p, const ControlPulse& pulse,
                           int segment, int control, double step);

struct SweepPoint {
  double horizon = 0.0;
  double fidelity = 0.0;
  double discounted = 0.0;  // fidelity * exp(-gamma * horizon)
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::optional<double> gamma;  // set when the dissipator acts as a scalar
  double best_discounted_horizon = 0.0;  // argmax of the discounted column
};

/// Optimized fidelity against total duration, warm-starting each horizon
/// from the previous one. When the system satisfies the scalar-dissipator
/// condition, the discounted column uses its rate gamma (gamma = 0
/// otherwise, making discounted == fidelity).
SweepResult time_fidelity_sweep(const ControlProblem& p,
                                const std::vector<double>& t_grid,
                                const GrapeOptions& options = {});

struct WedgeProduct {
  Eigen::MatrixXd hamiltonian_coeffs;  // factors x (n^2-1)
  Eigen::MatrixXd cone_coeffs;         // factors x generator count, >= 0
  int factors() const { return static_cast<int>(hamiltonian_coeffs.rows()); }
};

struct WedgeOptimizeOptions {
  int max_iterations = 2000;
  int restarts = 8;
  double tol = 1e-6;
  int max_factors = 6;  // grown one at a time while residual > tol
  std::uint64_t seed = 0;
};

struct WedgeOptimizeResult {
  WedgeProduct product;
  double residual = 0.0;  // ||prod exp(Omega_i) - T0|| / ||T0||
  int factors = 0;
  std::vector<std::pair<int, double>> schedule;  // (factors, best residual)
};

/// Approximates the traceless restriction of a trace-preserving target by a
/// product exp(Omega_n) ... exp(Omega_1) with each factor
/// Omega_i = -(sum_m h_im ad-rotation_m + sum_k lambda_ik G_k), lambda >= 0,
/// by projected gradient descent with seeded multi-starts. If the residual
/// stays above tol the factor count grows (warm-started) up to max_factors.
/// Always returns the best product found.
WedgeOptimizeResult wedge_product_optimize(QuantumChannel& target,
                                           const GeneratorCone& cone,
                                           int factors,
                                           const WedgeOptimizeOptions& options = {});

/// The her_0 matrix of one factor exp(Omega_i).
RealMatrix wedge_factor_matrix(const WedgeProduct& product, int factor,
                               const GeneratorCone& cone);

/// Full product in her_0 coordinates.
RealMatrix wedge_product_matrix(const WedgeProduct& product,
                                const GeneratorCone& cone);

struct MinimalTimeResult {
  bool reached = false;
  double t_upper_bound = 0.0;   // valid when reached
  double best_fidelity = 0.0;
  double best_horizon = 0.0;
};

/// Smallest grid duration whose optimized closed-system fidelity clears the
/// threshold; an upper bound on the true optimal time. The dissipative part
/// of the problem is ignored.
MinimalTimeResult minimal_time_estimate(const ControlProblem& p,
                                        double threshold,
                                        const std::vector<double>& t_grid,
                                        const GrapeOptions& options = {});

}  // namespace openqs
