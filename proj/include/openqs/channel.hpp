#pragma once

#include <optional>
#include <string>
#include <vector>

#include "openqs/lindblad.hpp"

namespace openqs {

struct FlagWithTol {
  bool value = false;
  double tol = 0.0;
};

/// A linear map on her(N) stored as its n^2 x n^2 vec-basis matrix.
/// Classification flags are cached together with the tolerance at which
/// each test ran; an absent flag means the test has not run.
struct QuantumChannel {
  int dim = 0;
  Matrix matrix;
  std::optional<FlagWithTol> trace_preserving;
  std::optional<FlagWithTol> hermiticity_preserving;
  std::optional<FlagWithTol> completely_positive;

  static QuantumChannel from_superop(int dim, Matrix m);
  /// exp(-t L) for a generator superoperator L.
  static QuantumChannel from_generator(const Superoperator& l, double t);
};

/// Choi matrix C = (T kron id)|Omega><Omega| with |Omega> = sum_i |ii>
/// unnormalized; an entry permutation (reshuffle) of the superoperator.
Matrix choi_from_superop(const Matrix& superop, int dim);

/// Exact inverse of choi_from_superop.
Matrix superop_from_choi(const Matrix& choi, int dim);

struct CpReport {
  bool completely_positive = false;
  double min_choi_eigenvalue = 0.0;
};

bool is_hermiticity_preserving(QuantumChannel& t, double tol = 1e-8);

/// Choi PSD test; requires a Hermiticity-preserving channel.
CpReport is_completely_positive(QuantumChannel& t, double tol = 1e-8);

/// vec(1)^dagger T = vec(1)^dagger within tol.
bool is_trace_preserving(QuantumChannel& t, double tol = 1e-10);

struct WedgeMembershipReport {
  bool member = false;
  Matrix hamiltonian;       // traceless Hermitian H
  Matrix kossakowski;       // (n^2-1) Hermitian coefficient matrix A
  double min_kossakowski_eigenvalue = 0.0;
  double residual = 0.0;    // relative reconstruction residual
  std::string diagnosis;    // reason when not a member

  /// Lindblad operators reconstructed from the positive part of A.
  std::vector<Matrix> lindblad_ops(int dim, double cutoff = 1e-12) const;
};

/// Decomposes a generator superoperator as L(rho) = i[H, rho] + Gamma_A(rho)
/// with Gamma_A(rho) = 1/2 sum_ij A_ij ({F_i F_j, rho} - 2 F_j rho F_i) over
/// the traceless orthonormal basis {F_i}. Member iff A is PSD within
/// eigenvalue_tol and the reconstruction residual is <= residual_tol.
/// Preconditions (Hermiticity preservation, trace annihilation) failing
/// produce an immediate non-member with a diagnosis.
WedgeMembershipReport kl_wedge_membership(const Superoperator& l,
                                          double eigenvalue_tol = 1e-8,
                                          double residual_tol = 1e-9);

enum class MarkovVerdict {
  TiMarkovian,        // generator recovered and inside the wedge
  NoRealLog,          // spectrum blocks any real logarithm
  WedgeFails,         // principal logarithm exists but is no valid generator
  Inconclusive,       // branch ambiguity; only the principal branch is searched
};

std::string to_string(MarkovVerdict v);

struct TiMarkovReport {
  MarkovVerdict verdict = MarkovVerdict::Inconclusive;
  std::optional<Superoperator> generator;  // set for TiMarkovian
  std::optional<WedgeMembershipReport> wedge;
  std::string diagnosis;
};

/// Time-independent Markovianity of an invertible CP TP channel: principal
/// logarithm followed by the wedge membership test.
TiMarkovReport is_ti_markovian(QuantumChannel& t, double tol = 1e-8);

struct EffectiveLiouvillianReport {
  bool has_log = false;
  Superoperator l_eff;
  double reproduction_error = 0.0;  // relative, exp(-t_eff L_eff) vs T
  bool reproduces = false;
  std::optional<WedgeMembershipReport> wedge;
  std::string diagnosis;
};

/// L_eff = -log(T)/t_eff on the principal branch, with the physicality
/// verdict (wedge membership) attached.
EffectiveLiouvillianReport effective_liouvillian(const QuantumChannel& t,
                                                 double t_eff,
                                                 double tol = 1e-9);

/// Matrix product T2 * T1 (apply t1 first); CP/TP flags propagate only when
/// both inputs hold them.
QuantumChannel compose(const QuantumChannel& t1, const QuantumChannel& t2);

}  // namespace openqs
