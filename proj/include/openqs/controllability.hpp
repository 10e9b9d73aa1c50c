#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "openqs/lindblad.hpp"

namespace openqs {

struct LieBasis {
  std::string ambient;           // e.g. "su(N)" or "gl(her0(N))"
  std::vector<Matrix> elements;  // pairwise orthonormal (real HS product)
  int dim = 0;
  int generations = 0;           // closure sweeps performed
  bool truncated = false;        // hit max_dim before closing
  double certificate_residual = 0.0;  // worst bracket projection residual
  bool ill_conditioned = false;  // closed at 1e-7 but not at rank_tol
};

/// Smallest real Lie algebra containing the generators, computed by
/// iterated brackets with orthonormalization. Generators must share one
/// shape. If the basis would exceed max_dim the result is returned partial
/// with truncated = true.
LieBasis lie_closure(const std::vector<Matrix>& generators,
                     double rank_tol = 1e-9, int max_dim = 4096,
                     const std::string& ambient = "custom");

struct AccessibilityReport {
  bool accessible = false;
  int dim = 0;
  int target_dim = 0;  // (N^2-1)^2
  LieBasis basis;
};

/// System algebra <i ad_{H_d} + Gamma, i ad_{H_j}> as real matrices on
/// her_0(N); accessible iff it is all of gl(her_0(N)). Requires a unital
/// generator (the traceless reduction is otherwise invalid).
AccessibilityReport accessibility_test(const LindbladGenerator& g,
                                       double rank_tol = 1e-9);

struct SpinGraph {
  int n = 0;  // qubit count
  std::vector<std::tuple<int, int, double>> couplings;  // (k, l, J), 1-based k < l

  static SpinGraph checked(int n,
                           std::vector<std::tuple<int, int, double>> couplings);
};

struct SpinGraphReport {
  std::vector<int> component_sizes;  // descending
  std::string group;                 // e.g. "SU(4) x SU(2)"
  long long predicted_dim = 0;       // sum_j (4^{n_j} - 1)
  std::optional<int> verified_dim;   // closure check, only for n <= 3
};

/// Connected-component analysis of the coupling graph with the predicted
/// reachable group; for n <= 3 the prediction is certified by an explicit
/// Lie closure of the Ising-plus-local-controls generators.
SpinGraphReport spin_graph_analysis(const SpinGraph& graph,
                                    bool verify_closure = true,
                                    double rank_tol = 1e-9);

struct HControllabilityReport {
  int dim = 0;
  int required = 0;  // N^2 - 1
  bool sufficient_condition_met = false;
};

/// Control algebra k_c = <i H_1, ..., i H_m> inside su(N). The verdict is
/// the sufficient condition k_c = su(N), not a full characterization.
HControllabilityReport h_controllability_test(const LindbladGenerator& g,
                                              double rank_tol = 1e-9);

struct WhControllabilityReport {
  int dim = 0;                 // dim k_d
  int required = 0;
  bool drift_algebra_full = false;  // k_d = su(N)
  bool gamma_scalar = false;        // Gamma|her0 = gamma * 1
  double gamma = 0.0;
  double scalar_deviation = 0.0;
  bool sufficient_condition_met = false;

  /// Smallest lambda with Ad_U in lambda * closure(P): e^{gamma T*} given an
  /// upper bound T* on the optimal closed-system steering time.
  double lambda_bound(double t_star) const;
};

/// Sufficient condition for weak Hamiltonian controllability:
/// k_d = <i H_d, i H_j> = su(N) and the dissipator acting as a scalar on
/// her_0(N). Requires a unital generator.
WhControllabilityReport wh_controllability_test(const LindbladGenerator& g,
                                                double rank_tol = 1e-9,
                                                double scalar_tol = 1e-8);

}  // namespace openqs
