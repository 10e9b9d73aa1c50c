#pragma once

#include <vector>

#include "openqs/linalg.hpp"

namespace openqs {

/// Orthonormal traceless Hermitian basis of her_0(n) (generalized Gell-Mann
/// matrices, Hilbert-Schmidt normalized). Ordering: symmetric pairs, then
/// antisymmetric pairs, then diagonal, each block lexicographic.
std::vector<Matrix> gell_mann_basis(int n);

/// Full orthonormal Hermitian basis of her(n): F_0 = 1/sqrt(n) followed by
/// the Gell-Mann elements.
std::vector<Matrix> hermitian_basis(int n);

/// Real coordinates of a Hermitian matrix in hermitian_basis(n).
RealVector hermitian_coords(const Matrix& h);

/// Inverse of hermitian_coords.
Matrix matrix_from_coords(const RealVector& coords, int n);

/// Real matrix of a superoperator S (n^2 x n^2, vec basis) acting on the
/// full Hermitian space her(n), in the hermitian_basis(n) ordering.
/// Entry (i, j) = Re <F_i, S(F_j)>.
RealMatrix real_rep_full(const Matrix& superop, int n);

/// Real matrix of a superoperator restricted to traceless Hermitian space,
/// size (n^2-1) square. Throws ValidationError when S does not map her_0(n)
/// into itself within tol (Hermiticity defect, trace leakage, or residual).
RealMatrix real_rep_traceless(const Matrix& superop, int n,
                              double tol = 1e-8);

/// Lift a traceless-space real matrix back to a vec-basis superoperator,
/// acting as the identity on the trace component (unital, trace-preserving).
Matrix superop_from_traceless_rep(const RealMatrix& r0, int n);

/// Lift a full her(n) real matrix back to a vec-basis superoperator.
Matrix superop_from_full_rep(const RealMatrix& r, int n);

/// Orthogonal matrix of Ad_U: rho -> U rho U^dagger on her_0(n) in the
/// Gell-Mann basis.
RealMatrix adjoint_rep(const Matrix& u);

}  // namespace openqs
