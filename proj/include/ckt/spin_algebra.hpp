#pragma once

// Angular-momentum matrices, two-top embeddings, exact operator exponentials
// and partial traces.
//
// Basis convention: |j,m1> (x) |j,m2> with m running from +j down to -j, joint
// index (j - m1) * d + (j - m2), d = 2j + 1. Condon-Shortley phases, so jx and
// jz are real and jy is purely imaginary.

#include "ckt/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ckt {

/// Spin size j stored as the integer 2j.
class SpinMagnitude {
 public:
  static SpinMagnitude from_twice(int twice_j) {
    if (twice_j < 1) {
      throw std::invalid_argument("spin magnitude needs 2j >= 1, got 2j = " +
                                  std::to_string(twice_j));
    }
    return SpinMagnitude(twice_j);
  }

  /// Rejects anything that is not a positive half-integer.
  static SpinMagnitude from_value(double j) {
    const double twice = 2.0 * j;
    const double rounded = std::round(twice);
    if (!std::isfinite(j) || std::abs(twice - rounded) > 1e-12 || rounded < 1.0) {
      throw std::invalid_argument("spin magnitude must be a positive half-integer, got " +
                                  std::to_string(j));
    }
    return SpinMagnitude(static_cast<int>(rounded));
  }

  /// Recovers j from a joint (2j+1)^2 dimension.
  static SpinMagnitude from_joint_dim(Index dim) {
    const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(dim))));
    if (d < 2 || d * d != dim) {
      throw std::invalid_argument("dimension " + std::to_string(dim) +
                                  " is not (2j+1)^2 for any spin j");
    }
    return SpinMagnitude(static_cast<int>(d - 1));
  }

  double value() const { return 0.5 * twice_; }
  int twice() const { return twice_; }
  bool is_integer() const { return twice_ % 2 == 0; }
  Index local_dim() const { return twice_ + 1; }
  Index joint_dim() const { return local_dim() * local_dim(); }

  /// Magnetic quantum number of local basis index k.
  double m_of(Index k) const { return value() - static_cast<double>(k); }

  /// Local basis index of magnetic quantum number m.
  Index index_of(double m) const {
    const double k = value() - m;
    const double rounded = std::round(k);
    if (std::abs(k - rounded) > 1e-12 || rounded < 0 || rounded > twice_) {
      throw std::invalid_argument("m = " + std::to_string(m) + " is not a level of spin " +
                                  std::to_string(value()));
    }
    return static_cast<Index>(rounded);
  }

  friend bool operator==(SpinMagnitude, SpinMagnitude) = default;

 private:
  explicit SpinMagnitude(int twice_j) : twice_(twice_j) {}
  int twice_;
};

struct AngularMomentum {
  ComplexMatrix jx;
  ComplexMatrix jy;
  ComplexMatrix jz;
};

/// Spin matrices from <m+1|J+|m> = sqrt(j(j+1) - m(m+1)).
inline AngularMomentum spin_operators(SpinMagnitude j) {
  const Index d = j.local_dim();
  const double jj = j.value() * (j.value() + 1.0);
  ComplexMatrix raise = ComplexMatrix::Zero(d, d);
  ComplexMatrix jz = ComplexMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) {
    const double m = j.m_of(k);
    jz(k, k) = m;
    if (k > 0) raise(k - 1, k) = std::sqrt(jj - m * (m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  AngularMomentum out;
  out.jx = 0.5 * (raise + lower);
  out.jy = Complex(0.0, -0.5) * (raise - lower);
  out.jz = std::move(jz);
  return out;
}

enum class Slot { first = 1, second = 2 };

/// op (x) 1 for the first top, 1 (x) op for the second.
inline ComplexMatrix embed(const ComplexMatrix& op, Slot slot) {
  if (op.rows() != op.cols()) {
    throw std::invalid_argument("embed: operator must be square");
  }
  const ComplexMatrix id = ComplexMatrix::Identity(op.rows(), op.cols());
  return slot == Slot::first ? kron(op, id) : kron(id, op);
}

/// exp(-i * angle * generator) for a Hermitian generator, via its eigendecomposition.
inline ComplexMatrix unitary_exp(const ComplexMatrix& generator, double angle) {
  if (!is_hermitian(generator)) {
    throw std::invalid_argument("unitary_exp: generator is not Hermitian (defect " +
                                std::to_string(hermiticity_defect(generator)) + ")");
  }
  const Index n = generator.rows();
  const bool diagonal =
      n == 0 || (generator - ComplexMatrix(generator.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (diagonal) {
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) out(k, k) = std::exp(-kI * angle * generator(k, k).real());
    return out;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(generator);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("unitary_exp: eigendecomposition failed");
  }
  ComplexVector phases(n);
  for (Index k = 0; k < n; ++k) phases(k) = std::exp(-kI * angle * solver.eigenvalues()(k));
  const ComplexMatrix& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

/// Amplitudes psi as the d x d matrix M(i1, i2).
inline ComplexMatrix as_amplitude_matrix(const ComplexVector& state) {
  const SpinMagnitude j = SpinMagnitude::from_joint_dim(state.size());
  const Index d = j.local_dim();
  ComplexMatrix m(d, d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) m(a, b) = state(a * d + b);
  }
  return m;
}

/// Reduced density matrix of the kept top.
inline ComplexMatrix partial_trace(const ComplexVector& state, Slot keep) {
  const double norm = state.norm();
  if (!(std::abs(norm - 1.0) <= 1e-10)) {
    throw std::invalid_argument("partial_trace: state is not normalized (norm " +
                                std::to_string(norm) + ")");
  }
  const ComplexMatrix m = as_amplitude_matrix(state);
  ComplexMatrix rho = keep == Slot::first ? ComplexMatrix(m * m.adjoint())
                                          : ComplexMatrix(m.transpose() * m.conjugate());
  // Hermitian up to rounding; symmetrize so downstream solvers see exact symmetry.
  return 0.5 * (rho + rho.adjoint());
}

inline Index basis_index(SpinMagnitude j, double m1, double m2) {
  return j.index_of(m1) * j.local_dim() + j.index_of(m2);
}

/// |m1> (x) |m2>.
inline ComplexVector product_state(SpinMagnitude j, double m1, double m2) {
  ComplexVector v = ComplexVector::Zero(j.joint_dim());
  v(basis_index(j, m1, m2)) = 1.0;
  return v;
}

/// Joint-index permutation exchanging the two tops: (a, b) -> (b, a).
inline Index swapped_index(Index idx, Index d) { return (idx % d) * d + idx / d; }

/// P * a, with P the top-exchange permutation (rows permuted).
inline ComplexMatrix swap_tops_left(const ComplexMatrix& a) {
  const SpinMagnitude j = SpinMagnitude::from_joint_dim(a.rows());
  const Index d = j.local_dim();
  ComplexMatrix out(a.rows(), a.cols());
  for (Index r = 0; r < a.rows(); ++r) out.row(r) = a.row(swapped_index(r, d));
  return out;
}

/// P * a * P without forming P.
inline ComplexMatrix swap_tops(const ComplexMatrix& a) {
  const SpinMagnitude j = SpinMagnitude::from_joint_dim(a.rows());
  const Index d = j.local_dim();
  ComplexMatrix out(a.rows(), a.cols());
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) out(r, c) = a(swapped_index(r, d), swapped_index(c, d));
  }
  return out;
}

}  // namespace ckt
