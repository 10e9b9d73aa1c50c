#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "openqs/channel.hpp"
#include "openqs/lindblad.hpp"

namespace openqs {

/// Finitely generated convex cone of PSD operators on her_0(N); an inner
/// approximation of the dissipative directions available to the flow.
struct GeneratorCone {
  int dim = 0;                         // N
  std::vector<RealMatrix> generators;  // PSD symmetric, (N^2-1) square
  std::string provenance;              // "conjugation-orbit" | "user-supplied"
  std::uint64_t seed = 0;
  int sample_count = 0;
  RealMatrix base;  // the dissipator restriction the cone was grown from

  static GeneratorCone user_supplied(int dim,
                                     std::vector<RealMatrix> generators,
                                     double psd_tol = 1e-10);
};

/// Cone generated by the conjugation orbit of a dissipator restriction:
/// generators Theta_i Gamma0 Theta_i^T for `samples` Haar-like random
/// unitaries plus a deterministic set (identity and the quarter-turn
/// rotations about each coordinate axis for N = 2). The restriction must be
/// PSD. Reproducible under seed.
GeneratorCone conjugation_orbit_cone(const Superoperator& dissipator,
                                     int samples, std::uint64_t seed,
                                     double psd_tol = 1e-10);

struct NnlsResult {
  RealVector x;
  double residual = 0.0;  // ||A x - b||_2
  int iterations = 0;
};

/// min ||A x - b|| over x >= 0, by the active-set method. Deterministic.
NnlsResult nnls(const RealMatrix& a, const RealVector& b,
                double stationarity_tol = 1e-10, int max_iterations = 0);

struct ConeMembershipReport {
  bool member = false;
  double residual = 0.0;          // relative to max(1, ||x||)
  RealVector coefficients;        // the nonnegative combination found
  /// Non-membership is relative to the finite generator set: the cone is an
  /// inner approximation of the full conjugation orbit.
  std::string note;
};

/// Nonnegative least-squares fit of x by the cone generators; member iff the
/// residual is <= tol * max(1, ||x||).
ConeMembershipReport cone_membership(const RealMatrix& x,
                                     const GeneratorCone& cone,
                                     double tol = 1e-8);

struct WedgeConditionsReport {
  bool contains_dissipator = false;   // base in cone
  bool brackets_compatible = false;   // [c,c] in ad su(N), [c, ad su] in span c
  bool ad_invariant = false;          // conjugated elements stay members
  double dissipator_residual = 0.0;
  double bracket_residual = 0.0;
  double invariance_residual = 0.0;
};

/// Numerical test of the three structural conditions a dissipative cone must
/// satisfy for exp(-cone) . Ad_SU(N) to close into a semigroup.
WedgeConditionsReport check_wedge_conditions(const GeneratorCone& cone,
                                             double tol, int sample_unitaries,
                                             std::uint64_t seed);

struct SemigroupMembershipReport {
  bool member = false;
  bool orthogonal_part_rotation = false;  // det +1, i.e. lifts to SU(2)
  double det_orthogonal = 0.0;
  ConeMembershipReport cone_fit;          // of -log(P)
  RealMatrix minus_log_p;
  std::string note;
};

/// Membership of a unital single-qubit channel in exp(-cone) . Ad_SU(2):
/// polar-decompose the traceless restriction T0 = P O, require O to be a
/// rotation and -log(P) to lie in the cone.
SemigroupMembershipReport semigroup_membership_n2(QuantumChannel& t,
                                                  const GeneratorCone& cone,
                                                  double tol = 1e-6);

}  // namespace openqs
