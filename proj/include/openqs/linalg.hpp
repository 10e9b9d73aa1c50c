#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "openqs/errors.hpp"

namespace openqs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Throws InputError if any entry is NaN or Inf.
void ensure_finite(const Matrix& a, const std::string& what);

/// max_ij |A(i,j) - conj(A(j,i))|
double hermiticity_defect(const Matrix& a);

/// Relative Hermiticity test: defect <= tol * max(1, max|entry|).
bool is_hermitian(const Matrix& a, double tol = 1e-10);

Matrix hermitian_part(const Matrix& a);

/// Real part of the Hilbert-Schmidt inner product tr(A^dagger B).
double hs_inner_re(const Matrix& a, const Matrix& b);

/// Frobenius norm (equals the Hilbert-Schmidt norm).
double hs_norm(const Matrix& a);

/// Sum of singular values.
double trace_norm(const Matrix& a);

Matrix identity_matrix(Eigen::Index n);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix sigma_minus();  // |0><1|, lowers the excited state

/// Single-qubit Pauli acting on qubit k (0-based) of an n-qubit register.
/// axis: 0 = x, 1 = y, 2 = z.
Matrix pauli_at(int k, int n, int axis);

/// Standard Kronecker product; dimensions multiply.
Matrix kron(const Matrix& a, const Matrix& b);

/// Column-stacking vectorization: vec(M)[r + rows*c] = M(r, c), so that
/// vec(A X B) = (B^T kron A) vec(X) holds exactly.
Vector vec(const Matrix& m);

/// Inverse of vec for square matrices; requires v.size() == dim*dim.
Matrix unvec(const Vector& v, Eigen::Index dim);

/// Matrix exponential (scaling-and-squaring with a Pade core).
/// Throws Error when the result overflows instead of returning Inf.
Matrix expm(const Matrix& a);

enum class LogmStatus {
  Ok,                       // principal logarithm computed
  NegativeRealEigenvalue,   // odd-multiplicity eigenvalue on the negative
                            // real axis: no real logarithm exists at all
  BranchAmbiguity,          // negative real eigenvalues of even multiplicity:
                            // a real logarithm may exist on another branch
};

struct LogmResult {
  LogmStatus status = LogmStatus::Ok;
  Matrix log;  // valid only when status == Ok
  std::vector<Complex> blocking_eigenvalues;
  std::string diagnosis;
  bool ok() const { return status == LogmStatus::Ok; }
};

/// Principal matrix logarithm. Eigenvalues within `exclusion_band` of the
/// closed negative real half-line are treated as lying on it; the result
/// then reports which obstruction applies instead of returning an unstable
/// answer. Throws on singular input.
LogmResult logm_principal(const Matrix& a, double exclusion_band = 1e-8);

struct OrthonormalBasis {
  std::vector<Matrix> elements;
  int rank = 0;
};

/// Gram-Schmidt with re-orthogonalization over the reals, using the
/// Hilbert-Schmidt inner product Re tr(A^dagger B). Elements whose residual
/// after projection is <= rank_tol * (largest input norm) are discarded.
OrthonormalBasis orthonormalize(const std::vector<Matrix>& mats,
                                double rank_tol = 1e-9);

struct PsdReport {
  bool psd = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// PSD test for a Hermitian matrix: true iff
/// lambda_min >= -tol * max(1, lambda_max). Throws on non-Hermitian input.
PsdReport psd_check(const Matrix& a, double tol = 1e-10);

}  // namespace openqs
