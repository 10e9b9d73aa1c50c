#include "openqs/basis.hpp"

#include <cmath>
#include <sstream>

namespace openqs {

std::vector<Matrix> gell_mann_basis(int n) {
  if (n < 1) throw InputError("gell_mann_basis: dimension must be positive");
  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(n) * n - 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Matrix m = Matrix::Zero(n, n);
      m(j, k) = inv_sqrt2;
      m(k, j) = inv_sqrt2;
      basis.push_back(m);
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Matrix m = Matrix::Zero(n, n);
      m(j, k) = Complex(0, -inv_sqrt2);
      m(k, j) = Complex(0, inv_sqrt2);
      basis.push_back(m);
    }
  }
  for (int l = 1; l < n; ++l) {
    Matrix m = Matrix::Zero(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) m(j, j) = scale;
    m(l, l) = -static_cast<double>(l) * scale;
    basis.push_back(m);
  }
  return basis;
}

std::vector<Matrix> hermitian_basis(int n) {
  std::vector<Matrix> basis;
  basis.push_back(Matrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));
  auto gm = gell_mann_basis(n);
  basis.insert(basis.end(), gm.begin(), gm.end());
  return basis;
}

RealVector hermitian_coords(const Matrix& h) {
  const int n = static_cast<int>(h.rows());
  auto basis = hermitian_basis(n);
  RealVector coords(basis.size());
  for (size_t i = 0; i < basis.size(); ++i) {
    coords(static_cast<Eigen::Index>(i)) = hs_inner_re(basis[i], h);
  }
  return coords;
}

Matrix matrix_from_coords(const RealVector& coords, int n) {
  auto basis = hermitian_basis(n);
  if (coords.size() != static_cast<Eigen::Index>(basis.size())) {
    throw InputError("matrix_from_coords: coordinate length mismatch");
  }
  Matrix m = Matrix::Zero(n, n);
  for (size_t i = 0; i < basis.size(); ++i) {
    m += coords(static_cast<Eigen::Index>(i)) * basis[i];
  }
  return m;
}

namespace {

Matrix apply_superop(const Matrix& superop, const Matrix& x, int n) {
  return unvec(superop * vec(x), n);
}

}  // namespace

RealMatrix real_rep_full(const Matrix& superop, int n) {
  if (superop.rows() != n * n || superop.cols() != n * n) {
    throw InputError("real_rep_full: superoperator must be n^2 x n^2");
  }
  auto basis = hermitian_basis(n);
  const int d = n * n;
  RealMatrix rep(d, d);
  for (int j = 0; j < d; ++j) {
    Matrix img = apply_superop(superop, basis[static_cast<size_t>(j)], n);
    for (int i = 0; i < d; ++i) {
      rep(i, j) = hs_inner_re(basis[static_cast<size_t>(i)], img);
    }
  }
  return rep;
}

RealMatrix real_rep_traceless(const Matrix& superop, int n, double tol) {
  if (superop.rows() != n * n || superop.cols() != n * n) {
    throw InputError("real_rep_traceless: superoperator must be n^2 x n^2");
  }
  auto gm = gell_mann_basis(n);
  const int d = n * n - 1;
  const double scale = std::max(1.0, superop.cwiseAbs().maxCoeff());
  RealMatrix rep(d, d);
  for (int j = 0; j < d; ++j) {
    Matrix img = apply_superop(superop, gm[static_cast<size_t>(j)], n);
    if (hermiticity_defect(img) > tol * scale) {
      std::ostringstream os;
      os << "real_rep_traceless: superoperator does not preserve Hermitian "
            "matrices (defect "
         << hermiticity_defect(img) << " on basis element " << j << ")";
      throw ValidationError(os.str());
    }
    if (std::abs(img.trace()) > tol * scale * std::sqrt(double(n))) {
      std::ostringstream os;
      os << "real_rep_traceless: image of traceless element " << j
         << " has trace " << img.trace() << "; her_0 is not preserved";
      throw ValidationError(os.str());
    }
    Matrix residual = img;
    for (int i = 0; i < d; ++i) {
      const double c = hs_inner_re(gm[static_cast<size_t>(i)], img);
      rep(i, j) = c;
      residual -= c * gm[static_cast<size_t>(i)];
    }
    // whatever is left is either trace leakage or a non-real component
    if (hs_norm(residual) > 10 * tol * scale * std::sqrt(double(n))) {
      throw ValidationError(
          "real_rep_traceless: expansion residual too large; superoperator "
          "is not a real operator on her_0");
    }
  }
  return rep;
}

Matrix superop_from_traceless_rep(const RealMatrix& r0, int n) {
  const int d = n * n - 1;
  if (r0.rows() != d || r0.cols() != d) {
    throw InputError("superop_from_traceless_rep: size must be n^2-1");
  }
  auto basis = hermitian_basis(n);
  Matrix s = vec(basis[0]) * vec(basis[0]).adjoint();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (r0(i, j) == 0.0) continue;
      s += r0(i, j) * (vec(basis[static_cast<size_t>(i + 1)]) *
                       vec(basis[static_cast<size_t>(j + 1)]).adjoint());
    }
  }
  return s;
}

Matrix superop_from_full_rep(const RealMatrix& r, int n) {
  const int d = n * n;
  if (r.rows() != d || r.cols() != d) {
    throw InputError("superop_from_full_rep: size must be n^2");
  }
  auto basis = hermitian_basis(n);
  Matrix s = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (r(i, j) == 0.0) continue;
      s += r(i, j) * (vec(basis[static_cast<size_t>(i)]) *
                      vec(basis[static_cast<size_t>(j)]).adjoint());
    }
  }
  return s;
}

RealMatrix adjoint_rep(const Matrix& u) {
  const int n = static_cast<int>(u.rows());
  if (u.cols() != n) throw InputError("adjoint_rep: unitary must be square");
  auto gm = gell_mann_basis(n);
  const int d = n * n - 1;
  RealMatrix theta(d, d);
  for (int j = 0; j < d; ++j) {
    Matrix img = u * gm[static_cast<size_t>(j)] * u.adjoint();
    for (int i = 0; i < d; ++i) {
      theta(i, j) = hs_inner_re(gm[static_cast<size_t>(i)], img);
    }
  }
  return theta;
}

}  // namespace openqs
