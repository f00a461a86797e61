#pragma once

// Dense eigendecomposition, Floquet eigenphases, edge (ground / most excited)
// states and von Neumann entanglement entropy.

#include "ckt/spin_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckt {

/// Eigenvalues ascending; column i of eigenvectors pairs with eigenvalue i.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

namespace detail {

inline void require_hermitian(const ComplexMatrix& h, const char* who) {
  if (h.rows() != h.cols() || !is_hermitian(h)) {
    throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
  }
}

}  // namespace detail

/// Full Hermitian eigendecomposition. Real symmetric input takes the real solver.
inline SpectralDecomposition eigh(const ComplexMatrix& h) {
  detail::require_hermitian(h, "eigh");
  SpectralDecomposition out;
  if (is_real(h)) {
    const RealMatrix hr = 0.5 * (h.real() + h.real().transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(hr);
    if (solver.info() != Eigen::Success) throw NumericalError("eigh: solver did not converge");
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors().cast<Complex>();
  } else {
    const ComplexMatrix hs = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hs);
    if (solver.info() != Eigen::Success) throw NumericalError("eigh: solver did not converge");
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
  }
  return out;
}

/// Eigenvalues only, ascending.
inline RealVector eigvalsh(const ComplexMatrix& h) {
  detail::require_hermitian(h, "eigvalsh");
  if (is_real(h)) {
    const RealMatrix hr = 0.5 * (h.real() + h.real().transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(hr, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigvalsh: solver did not converge");
    return solver.eigenvalues();
  }
  const ComplexMatrix hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hs, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigvalsh: solver did not converge");
  return solver.eigenvalues();
}

/// Phases theta in (-pi, pi], ascending, with U v = exp(-i theta) v.
inline RealVector eigenphases(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("eigenphases: matrix is not square");
  const double defect = max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
  if (!(defect <= 1e-8)) {
    throw std::invalid_argument("eigenphases: matrix is not unitary (defect " +
                                std::to_string(defect) + ")");
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(u, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenphases: solver did not converge");
  std::vector<double> theta(static_cast<std::size_t>(u.rows()));
  for (Index k = 0; k < u.rows(); ++k) {
    double t = -std::arg(solver.eigenvalues()(k));
    if (t <= -kPi) t += 2.0 * kPi;
    theta[static_cast<std::size_t>(k)] = t;
  }
  std::sort(theta.begin(), theta.end());
  return Eigen::Map<RealVector>(theta.data(), static_cast<Index>(theta.size()));
}

/// How a degenerate edge level (gap < 1e-10) picks its representative vector.
///  - solver: whatever the eigensolver returned.
///  - permutation: split by the top exchange P when [H, P] = 0 and keep P = +1,
///    then localize any leftover degeneracy on the largest J_z1.
///  - u0: as permutation but splitting by U0 = exp(-i pi Jx1) (x) exp(-i pi Jx2).
enum class DegeneracyRule { solver, permutation, u0 };

inline const char* to_string(DegeneracyRule r) {
  switch (r) {
    case DegeneracyRule::solver: return "solver";
    case DegeneracyRule::permutation: return "permutation";
    case DegeneracyRule::u0: return "u0";
  }
  return "?";
}

inline DegeneracyRule parse_degeneracy_rule(const std::string& s) {
  if (s == "solver") return DegeneracyRule::solver;
  if (s == "permutation") return DegeneracyRule::permutation;
  if (s == "u0") return DegeneracyRule::u0;
  throw std::invalid_argument("unknown degeneracy rule '" + s + "' (solver|permutation|u0)");
}

inline constexpr double kDegeneracyGap = 1e-10;

struct EdgeStates {
  ComplexVector ground;
  ComplexVector excited;
  double e_ground = 0.0;
  double e_excited = 0.0;
  int ground_multiplicity = 1;
  int excited_multiplicity = 1;
};

namespace detail {

/// Normalized eigenvector of w^dagger a w (Hermitian k x k) with the largest
/// eigenvalue, lifted back to the full space.
inline ComplexVector top_vector_in(const ComplexMatrix& w, const ComplexMatrix& aw) {
  const ComplexMatrix small = w.adjoint() * aw;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (small + small.adjoint()));
  const Index k = small.rows();
  ComplexVector v = w * solver.eigenvectors().col(k - 1);
  return v / v.norm();
}

/// Columns of w spanning the eigenspace of w^dagger a w with eigenvalues > 0
/// (a is an involution on the span, eigenvalues +-1). Falls back to the whole
/// span when a acts as -1 throughout.
inline ComplexMatrix positive_sector(const ComplexMatrix& w, const ComplexMatrix& aw) {
  const ComplexMatrix small = w.adjoint() * aw;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (small + small.adjoint()));
  std::vector<Index> keep;
  for (Index i = 0; i < small.rows(); ++i) {
    if (solver.eigenvalues()(i) > 0.0) keep.push_back(i);
  }
  if (keep.empty()) return w;
  ComplexMatrix out(w.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.col(static_cast<Index>(c)) = w * solver.eigenvectors().col(keep[c]);
  }
  return out;
}

/// U0 applied to every column of w, using its (R (x) R) structure.
inline ComplexMatrix apply_u0(const ComplexMatrix& w, SpinMagnitude j) {
  const AngularMomentum s = spin_operators(j);
  const ComplexMatrix r = unitary_exp(s.jx, kPi);
  const Index d = j.local_dim();
  ComplexMatrix out(w.rows(), w.cols());
  for (Index c = 0; c < w.cols(); ++c) {
    ComplexMatrix m(d, d);
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < d; ++b) m(a, b) = w(a * d + b, c);
    const ComplexMatrix rm = r * m * r.transpose();
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < d; ++b) out(a * d + b, c) = rm(a, b);
  }
  return out;
}

/// J_z1 applied to every column (diagonal in the product basis).
inline ComplexMatrix apply_jz1(const ComplexMatrix& w, SpinMagnitude j) {
  const Index d = j.local_dim();
  ComplexMatrix out = w;
  for (Index r = 0; r < w.rows(); ++r) out.row(r) *= j.m_of(r / d);
  return out;
}

inline ComplexVector resolve_degenerate(const ComplexMatrix& h, const ComplexMatrix& w,
                                        DegeneracyRule rule) {
  const SpinMagnitude j = SpinMagnitude::from_joint_dim(h.rows());
  ComplexMatrix sub = w;
  if (rule == DegeneracyRule::permutation) {
    if (max_abs(swap_tops(h) - h) <= 1e-8 * std::max(1.0, max_abs(h))) {
      sub = positive_sector(w, swap_tops_left(w));
    }
  } else if (rule == DegeneracyRule::u0) {
    sub = positive_sector(w, apply_u0(w, j));
  }
  if (sub.cols() == 1) return sub.col(0) / sub.col(0).norm();
  return top_vector_in(sub, apply_jz1(sub, j));
}

}  // namespace detail

/// Eigenvectors of the lowest and highest eigenvalue.
inline EdgeStates edge_states(const ComplexMatrix& h,
                              DegeneracyRule rule = DegeneracyRule::solver) {
  const SpectralDecomposition dec = eigh(h);
  const Index n = dec.eigenvalues.size();
  EdgeStates out;
  out.e_ground = dec.eigenvalues(0);
  out.e_excited = dec.eigenvalues(n - 1);

  Index lo = 1;
  while (lo < n && dec.eigenvalues(lo) - out.e_ground < kDegeneracyGap) ++lo;
  Index hi = n - 2;
  while (hi >= 0 && out.e_excited - dec.eigenvalues(hi) < kDegeneracyGap) --hi;
  out.ground_multiplicity = static_cast<int>(lo);
  out.excited_multiplicity = static_cast<int>(n - 1 - hi);

  if (rule == DegeneracyRule::solver || lo == 1) {
    out.ground = dec.eigenvectors.col(0);
  } else {
    out.ground = detail::resolve_degenerate(h, dec.eigenvectors.leftCols(lo), rule);
  }
  if (rule == DegeneracyRule::solver || out.excited_multiplicity == 1) {
    out.excited = dec.eigenvectors.col(n - 1);
  } else {
    out.excited = detail::resolve_degenerate(
        h, dec.eigenvectors.rightCols(out.excited_multiplicity), rule);
  }
  return out;
}

inline constexpr double kEntropyFloor = 1e-14;

/// S = -sum lambda ln lambda over the reduced density matrix spectrum (nats).
inline double entanglement_entropy(const ComplexVector& state, Slot slot = Slot::first) {
  const ComplexMatrix rho = partial_trace(state, slot);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda > kEntropyFloor) s -= lambda * std::log(lambda);
  }
  return std::max(0.0, s);
}

}  // namespace ckt
