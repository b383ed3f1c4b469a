#pragma once

// Oracles shared by the unit tests. Nothing here calls into the library's
// matrix construction, so the tests can compare against it.

#include <complex>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using C = std::complex<double>;

inline Mat letter(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad letter");
  }
  return m;
}

/// Kronecker product of the letters, leftmost letter = qubit 1.
inline Mat pauli(const std::string& letters) {
  Mat m = letter(letters.at(0));
  for (std::size_t k = 1; k < letters.size(); ++k) {
    Mat next = Eigen::kroneckerProduct(m, letter(letters[k])).eval();
    m = next;
  }
  return m;
}

/// Matrix exponential exp(-i H t) through Eigen's Pade-based MatrixFunctions.
inline Mat expm_minus_i(const Mat& h, double t) {
  Mat a = C(0, -t) * h;
  return a.exp();
}

inline Mat random_hermitian(std::mt19937_64& rng, int dim, double scale) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = C(n(rng), n(rng));
  return scale * (a + a.adjoint()) / 2.0;
}

/// Classic RK4 on the state vector psi' = -i H psi with `steps` substeps.
inline Eigen::VectorXcd rk4_state(const Mat& h, Eigen::VectorXcd psi, double t, int steps) {
  const double dt = t / steps;
  auto f = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return C(0, -1) * (h * v); };
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd k1 = f(psi);
    Eigen::VectorXcd k2 = f(psi + 0.5 * dt * k1);
    Eigen::VectorXcd k3 = f(psi + 0.5 * dt * k2);
    Eigen::VectorXcd k4 = f(psi + dt * k3);
    psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
