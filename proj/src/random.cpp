#include "openqs/random.hpp"

#include <cmath>

namespace openqs {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 strictly positive so the log is finite
  const double u1 =
      (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Matrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = rng.complex_normal();
    }
  }
  return m;
}

Matrix random_hermitian(Eigen::Index n, Rng& rng) {
  Matrix a = random_complex(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

Matrix random_traceless_hermitian(Eigen::Index n, Rng& rng) {
  Matrix h = random_hermitian(n, rng);
  h -= (h.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
  return h;
}

Matrix random_density(Eigen::Index n, Rng& rng) {
  Matrix g = random_complex(n, n, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Matrix random_su2(Rng& rng) {
  double q[4];
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& v : q) {
      v = rng.normal();
      norm2 += v * v;
    }
  } while (norm2 <= 1e-30);
  const double inv = 1.0 / std::sqrt(norm2);
  const double a = q[0] * inv, b = q[1] * inv, c = q[2] * inv, d = q[3] * inv;
  Matrix u(2, 2);
  u << Complex(a, b), Complex(c, d), Complex(-c, d), Complex(a, -b);
  return u;
}

Matrix random_su(Eigen::Index n, Rng& rng) {
  if (n == 2) return random_su2(rng);
  Matrix g = random_complex(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex d = r(i, i);
    const double ad = std::abs(d);
    q.col(i) *= (ad > 0 ? d / ad : Complex(1, 0));
  }
  // det-normalize U(n) -> SU(n)
  Complex det = q.determinant();
  q *= std::pow(det, Complex(-1.0 / static_cast<double>(n), 0.0));
  return q;
}

}  // namespace openqs
