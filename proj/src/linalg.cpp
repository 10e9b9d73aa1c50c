#include "openqs/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace openqs {

void ensure_finite(const Matrix& a, const std::string& what) {
  if (!a.allFinite()) {
    throw InputError(what + ": matrix contains non-finite entries");
  }
}

double hermiticity_defect(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return hermiticity_defect(a) <= tol * scale;
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double hs_inner_re(const Matrix& a, const Matrix& b) {
  return a.conjugate().cwiseProduct(b).sum().real();
}

double hs_norm(const Matrix& a) { return a.norm(); }

double trace_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

Matrix identity_matrix(Eigen::Index n) { return Matrix::Identity(n, n); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix sigma_minus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Matrix pauli_at(int k, int n, int axis) {
  if (k < 0 || k >= n) throw InputError("pauli_at: qubit index out of range");
  Matrix sigma;
  switch (axis) {
    case 0: sigma = pauli_x(); break;
    case 1: sigma = pauli_y(); break;
    case 2: sigma = pauli_z(); break;
    default: throw InputError("pauli_at: axis must be 0, 1 or 2");
  }
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    out = kron(out, q == k ? sigma : identity_matrix(2));
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector vec(const Matrix& m) {
  Vector v(m.size());
  Eigen::Index idx = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      v(idx++) = m(r, c);
    }
  }
  return v;
}

Matrix unvec(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) {
    throw InputError("unvec: vector length does not match dim*dim");
  }
  Matrix m(dim, dim);
  Eigen::Index idx = 0;
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      m(r, c) = v(idx++);
    }
  }
  return m;
}

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("expm: matrix must be square");
  ensure_finite(a, "expm");
  // e^{||A||} past the double range cannot round-trip; fail loudly.
  if (a.cwiseAbs().maxCoeff() * static_cast<double>(a.rows()) > 700.0) {
    Eigen::VectorXcd evals = Eigen::ComplexEigenSolver<Matrix>(a, false).eigenvalues();
    if (evals.real().maxCoeff() > 700.0) {
      throw Error("expm: matrix norm too large, result would overflow");
    }
  }
  Matrix e = a.exp();
  if (!e.allFinite()) {
    throw Error("expm: result overflowed to non-finite values");
  }
  return e;
}

namespace {

std::string format_eigenvalues(const std::vector<Complex>& vals) {
  std::ostringstream os;
  for (size_t i = 0; i < vals.size(); ++i) {
    if (i) os << ", ";
    os << vals[i].real();
    if (std::abs(vals[i].imag()) > 0) os << (vals[i].imag() < 0 ? "-" : "+")
                                         << std::abs(vals[i].imag()) << "i";
  }
  return os.str();
}

}  // namespace

LogmResult logm_principal(const Matrix& a, double exclusion_band) {
  if (a.rows() != a.cols()) throw InputError("logm: matrix must be square");
  ensure_finite(a, "logm");
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  Eigen::VectorXcd evals = es.eigenvalues();
  const double radius = evals.cwiseAbs().maxCoeff();
  if (radius <= 0.0) throw Error("logm: singular input (zero matrix)");
  const double sing_tol = 1e-13 * std::max(1.0, radius);

  std::vector<double> on_axis;  // Re(lambda) for eigenvalues on the cut
  const double band = exclusion_band * std::max(1.0, radius);
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    const Complex lam = evals(i);
    if (std::abs(lam) <= sing_tol) {
      throw Error("logm: singular input (eigenvalue at the origin)");
    }
    if (lam.real() < 0.0 && std::abs(lam.imag()) <= band) {
      on_axis.push_back(lam.real());
    }
  }

  LogmResult result;
  if (!on_axis.empty()) {
    std::sort(on_axis.begin(), on_axis.end());
    // Cluster nearby values so a numerically split pair counts as one
    // eigenvalue of multiplicity two.
    const double cluster_tol = std::max(band, 1e-12 * radius);
    std::vector<std::pair<double, int>> clusters;
    for (double v : on_axis) {
      if (!clusters.empty() && v - clusters.back().first <= cluster_tol) {
        clusters.back().second += 1;
      } else {
        clusters.emplace_back(v, 1);
      }
    }
    bool any_odd = false;
    for (const auto& [value, count] : clusters) {
      if (count % 2 == 1) any_odd = true;
      result.blocking_eigenvalues.emplace_back(value, 0.0);
    }
    if (any_odd) {
      result.status = LogmStatus::NegativeRealEigenvalue;
      result.diagnosis =
          "negative real eigenvalue(s) of odd multiplicity {" +
          format_eigenvalues(result.blocking_eigenvalues) +
          "} block any real logarithm";
    } else {
      result.status = LogmStatus::BranchAmbiguity;
      result.diagnosis =
          "negative real eigenvalue(s) of even multiplicity {" +
          format_eigenvalues(result.blocking_eigenvalues) +
          "}: principal branch undefined, a real logarithm may exist on "
          "another branch";
    }
    return result;
  }

  result.log = a.log();
  if (!result.log.allFinite()) {
    throw Error("logm: computation produced non-finite values");
  }
  return result;
}

OrthonormalBasis orthonormalize(const std::vector<Matrix>& mats,
                                double rank_tol) {
  OrthonormalBasis basis;
  if (mats.empty()) return basis;
  double max_norm = 0.0;
  for (const auto& m : mats) max_norm = std::max(max_norm, hs_norm(m));
  if (max_norm == 0.0) return basis;
  const double threshold = rank_tol * max_norm;

  for (const auto& m : mats) {
    if (m.rows() != mats.front().rows() || m.cols() != mats.front().cols()) {
      throw InputError("orthonormalize: elements must share one shape");
    }
    Matrix r = m;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis.elements) {
        r -= hs_inner_re(b, r) * b;
      }
    }
    const double n = hs_norm(r);
    if (n > threshold) {
      basis.elements.push_back(r / n);
    }
  }
  basis.rank = static_cast<int>(basis.elements.size());
  return basis;
}

PsdReport psd_check(const Matrix& a, double tol) {
  if (!is_hermitian(a, std::max(tol, 1e-10))) {
    throw InputError("psd_check: input is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a),
                                           Eigen::EigenvaluesOnly);
  PsdReport rep;
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.max_eigenvalue = es.eigenvalues().maxCoeff();
  rep.psd = rep.min_eigenvalue >= -tol * std::max(1.0, rep.max_eigenvalue);
  return rep;
}

}  // namespace openqs
