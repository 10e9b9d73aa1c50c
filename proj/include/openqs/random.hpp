#pragma once

#include <cstdint>
#include <random>

#include "openqs/linalg.hpp"

namespace openqs {

/// Seeded random source. All randomized routines take one of these
/// explicitly so identical seeds reproduce results bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (stdlib-independent sequence).
  double normal();

  Complex complex_normal() { return {normal(), normal()}; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Entries are independent standard complex Gaussians.
Matrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng);

Matrix random_hermitian(Eigen::Index n, Rng& rng);
Matrix random_traceless_hermitian(Eigen::Index n, Rng& rng);

/// Random density matrix G G^dagger / tr(G G^dagger).
Matrix random_density(Eigen::Index n, Rng& rng);

/// Haar-uniform SU(2) via unit quaternions.
Matrix random_su2(Rng& rng);

/// Haar-like special unitary for any n (QR of a Ginibre matrix with the
/// phase convention fixed, determinant normalized to 1).
Matrix random_su(Eigen::Index n, Rng& rng);

}  // namespace openqs
