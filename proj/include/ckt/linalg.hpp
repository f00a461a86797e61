#pragma once

// Dense complex linear-algebra vocabulary shared by every module.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ckt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an iteration produces NaN/Inf or a solver cannot meet its contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kronecker product a (x) b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    }
  }
  return out;
}

inline double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// max |A - A^dagger| entry.
inline double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  return max_abs(a - a.adjoint());
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = 1e-10) {
  return hermiticity_defect(a) <= tol * std::max(1.0, max_abs(a));
}

/// Largest singular value, from the largest eigenvalue of A^dagger A.
inline double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  const ComplexMatrix gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

/// True when every imaginary part is exactly zero.
inline bool is_real(const ComplexMatrix& a) {
  return a.size() == 0 || a.imag().cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace ckt
