#pragma once

#include <doctest.h>

#include "openqs/lindblad.hpp"
#include "openqs/random.hpp"

namespace openqs::test {

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline Matrix amplitude_damping_op(double gamma) {
  return std::sqrt(gamma) * sigma_minus();
}

inline Matrix dephasing_op(double gamma) {
  return std::sqrt(gamma) * pauli_z();
}

inline std::vector<Matrix> depolarizing_ops(double gamma) {
  // scalar rate gamma on the traceless sector
  const double c = std::sqrt(gamma / 4.0);
  return {c * pauli_x(), c * pauli_y(), c * pauli_z()};
}

inline LindbladGenerator amplitude_damping_generator(double gamma) {
  return LindbladGenerator::checked(Matrix::Zero(2, 2), {},
                                    {amplitude_damping_op(gamma)});
}

inline LindbladGenerator dephasing_generator(double gamma, Matrix h_d,
                                             std::vector<Matrix> controls) {
  return LindbladGenerator::checked(std::move(h_d), std::move(controls),
                                    {dephasing_op(gamma)});
}

/// Random generator with Hermitian parts O(1) and a couple of bounded
/// Lindblad operators.
inline LindbladGenerator random_generator(int dim, int n_controls, int n_ops,
                                          Rng& rng, double op_scale = 0.6) {
  Matrix h_d = random_hermitian(dim, rng);
  std::vector<Matrix> controls;
  for (int j = 0; j < n_controls; ++j) controls.push_back(random_hermitian(dim, rng));
  std::vector<Matrix> vs;
  for (int k = 0; k < n_ops; ++k) {
    vs.push_back(op_scale * random_complex(dim, dim, rng));
  }
  return LindbladGenerator::checked(std::move(h_d), std::move(controls),
                                    std::move(vs));
}

/// Superoperator of the Bloch-multiplier channel
/// rho -> (tr rho) 1/2 + sum_a t_a tr(sigma_a rho) sigma_a / 2.
inline Matrix pauli_channel_superop(double t1, double t2, double t3) {
  const Matrix id = identity_matrix(2);
  Matrix s = 0.5 * (vec(id) * vec(id).adjoint());
  const double t[3] = {t1, t2, t3};
  const Matrix sig[3] = {pauli_x(), pauli_y(), pauli_z()};
  for (int a = 0; a < 3; ++a) {
    s += 0.5 * t[a] * (vec(sig[a]) * vec(sig[a]).adjoint());
  }
  return s;
}

}  // namespace openqs::test
