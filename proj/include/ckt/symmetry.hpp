#pragma once

// Unitary symmetry U0, chirality operators C and C' = P C, the top-exchange
// permutation P, time reversal (complex conjugation in the standard basis) and
// the BDI / CI / standard classification built on them.

#include "ckt/spin_algebra.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <string>

namespace ckt {

/// exp(-i pi Jx1) (x) exp(-i pi Jx2).
inline ComplexMatrix build_u0(SpinMagnitude j) {
  const AngularMomentum s = spin_operators(j);
  const ComplexMatrix r = unitary_exp(s.jx, kPi);
  return kron(r, r);
}

/// exp(i alpha) exp(-i pi Jz1) (x) exp(-i pi Jy2).
inline ComplexMatrix build_chirality(SpinMagnitude j, double alpha) {
  const AngularMomentum s = spin_operators(j);
  return std::exp(kI * alpha) * kron(unitary_exp(s.jz, kPi), unitary_exp(s.jy, kPi));
}

/// Chirality with the time-reversal-compatible phase alpha = pi j.
inline ComplexMatrix build_chirality(SpinMagnitude j) {
  return build_chirality(j, kPi * j.value());
}

/// P |m1> (x) |m2> = |m2> (x) |m1>.
inline ComplexMatrix build_permutation(SpinMagnitude j) {
  const Index d = j.local_dim();
  ComplexMatrix p = ComplexMatrix::Zero(j.joint_dim(), j.joint_dim());
  for (Index idx = 0; idx < j.joint_dim(); ++idx) p(swapped_index(idx, d), idx) = 1.0;
  return p;
}

/// ||A H - H A||.
inline double commutator_residual(const ComplexMatrix& a, const ComplexMatrix& h) {
  return spectral_norm(a * h - h * a);
}

/// ||A H + H A||.
inline double anticommutator_residual(const ComplexMatrix& a, const ComplexMatrix& h) {
  return spectral_norm(a * h + h * a);
}

/// ||conj(H) - H||: zero iff H is invariant under time reversal.
inline double time_reversal_defect(const ComplexMatrix& h) {
  return spectral_norm(h.conjugate() - h);
}

/// ||conj(C) - C|| for C = build_chirality(j, alpha).
inline double t_chirality_compatibility(SpinMagnitude j, double alpha) {
  const ComplexMatrix c = build_chirality(j, alpha);
  return spectral_norm(c.conjugate() - c);
}

enum class ChiralityKind { none, c, c_prime };
enum class ChiralitySquare { plus, minus, mixed };
enum class SymmetryClass { bdi, ci, chiral_mixed, standard_trs, none_detected };

inline const char* to_string(ChiralityKind k) {
  switch (k) {
    case ChiralityKind::none: return "none";
    case ChiralityKind::c: return "C";
    case ChiralityKind::c_prime: return "C'";
  }
  return "?";
}

inline const char* to_string(ChiralitySquare s) {
  switch (s) {
    case ChiralitySquare::plus: return "+1";
    case ChiralitySquare::minus: return "-1";
    case ChiralitySquare::mixed: return "mixed";
  }
  return "?";
}

inline const char* to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::bdi: return "BDI";
    case SymmetryClass::ci: return "CI";
    case SymmetryClass::chiral_mixed: return "chiral-mixed";
    case SymmetryClass::standard_trs: return "standard-TRS";
    case SymmetryClass::none_detected: return "none-detected";
  }
  return "?";
}

inline constexpr double kSymmetryTolerance = 1e-8;

/// Residuals are spectral norms of the defect operators.
struct SymmetryReport {
  bool u0_commutes = false;
  double u0_residual = 0.0;
  ChiralityKind chirality_found = ChiralityKind::none;
  double c_residual = 0.0;
  double c_prime_residual = NAN;  // only evaluated when the tops are identical
  double anticommutation_residual = 0.0;
  ChiralitySquare chirality_square = ChiralitySquare::mixed;
  double square_residual = NAN;  // min(||X^2 - 1||, ||X^2 + 1||)
  bool time_reversal_symmetric = false;
  double time_reversal_residual = 0.0;
  bool t_chirality_compatible = false;
  double t_chirality_residual = NAN;
  SymmetryClass class_label = SymmetryClass::none_detected;

  std::string to_key_value() const {
    std::ostringstream os;
    os.precision(6);
    os << std::scientific;
    os << "class_label = " << to_string(class_label) << '\n'
       << "u0_commutes = " << (u0_commutes ? "true" : "false") << '\n'
       << "u0_residual = " << u0_residual << '\n'
       << "chirality_found = " << to_string(chirality_found) << '\n'
       << "c_residual = " << c_residual << '\n'
       << "c_prime_residual = " << c_prime_residual << '\n'
       << "anticommutation_residual = " << anticommutation_residual << '\n'
       << "chirality_square = " << to_string(chirality_square) << '\n'
       << "square_residual = " << square_residual << '\n'
       << "time_reversal_symmetric = " << (time_reversal_symmetric ? "true" : "false") << '\n'
       << "time_reversal_residual = " << time_reversal_residual << '\n'
       << "t_chirality_compatible = " << (t_chirality_compatible ? "true" : "false") << '\n'
       << "t_chirality_residual = " << t_chirality_residual << '\n';
    return os.str();
  }

  nlohmann::json to_json() const {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    return {{"class_label", to_string(class_label)},
            {"u0_commutes", u0_commutes},
            {"u0_residual", num(u0_residual)},
            {"chirality_found", to_string(chirality_found)},
            {"c_residual", num(c_residual)},
            {"c_prime_residual", num(c_prime_residual)},
            {"anticommutation_residual", num(anticommutation_residual)},
            {"chirality_square", to_string(chirality_square)},
            {"square_residual", num(square_residual)},
            {"time_reversal_symmetric", time_reversal_symmetric},
            {"time_reversal_residual", num(time_reversal_residual)},
            {"t_chirality_compatible", t_chirality_compatible},
            {"t_chirality_residual", num(t_chirality_residual)}};
  }
};

/// Tries C, then (for identical tops) C' = P C, and combines the result with time
/// reversal and the sign of the chirality square.
inline SymmetryReport classify(const ComplexMatrix& h, SpinMagnitude j, bool omega_equal) {
  if (h.rows() != j.joint_dim() || h.cols() != j.joint_dim()) {
    throw std::invalid_argument("classify: Hamiltonian dimension does not match spin j");
  }
  if (!is_hermitian(h)) throw std::invalid_argument("classify: Hamiltonian is not Hermitian");

  SymmetryReport r;
  r.u0_residual = commutator_residual(build_u0(j), h);
  r.u0_commutes = r.u0_residual < kSymmetryTolerance;

  const ComplexMatrix c = build_chirality(j);
  r.c_residual = anticommutator_residual(c, h);
  ComplexMatrix chiral;
  if (r.c_residual < kSymmetryTolerance) {
    r.chirality_found = ChiralityKind::c;
    r.anticommutation_residual = r.c_residual;
    chiral = c;
  } else if (omega_equal) {
    const ComplexMatrix cp = swap_tops_left(c);
    r.c_prime_residual = anticommutator_residual(cp, h);
    if (r.c_prime_residual < kSymmetryTolerance) {
      r.chirality_found = ChiralityKind::c_prime;
      r.anticommutation_residual = r.c_prime_residual;
      chiral = cp;
    }
  }
  if (r.chirality_found == ChiralityKind::none) {
    r.anticommutation_residual = std::isfinite(r.c_prime_residual)
                                     ? std::min(r.c_residual, r.c_prime_residual)
                                     : r.c_residual;
  }

  r.time_reversal_residual = time_reversal_defect(h);
  r.time_reversal_symmetric = r.time_reversal_residual < kSymmetryTolerance;

  if (r.chirality_found != ChiralityKind::none) {
    const ComplexMatrix sq = chiral * chiral;
    const ComplexMatrix id = ComplexMatrix::Identity(sq.rows(), sq.cols());
    const double plus = spectral_norm(sq - id);
    const double minus = spectral_norm(sq + id);
    r.square_residual = std::min(plus, minus);
    if (plus < kSymmetryTolerance) {
      r.chirality_square = ChiralitySquare::plus;
    } else if (minus < kSymmetryTolerance) {
      r.chirality_square = ChiralitySquare::minus;
    } else {
      r.chirality_square = ChiralitySquare::mixed;
    }
    r.t_chirality_residual = spectral_norm(chiral.conjugate() - chiral);
    r.t_chirality_compatible = r.t_chirality_residual < kSymmetryTolerance;
  }

  if (r.chirality_found != ChiralityKind::none && r.time_reversal_symmetric &&
      r.t_chirality_compatible) {
    switch (r.chirality_square) {
      case ChiralitySquare::plus: r.class_label = SymmetryClass::bdi; break;
      case ChiralitySquare::minus: r.class_label = SymmetryClass::ci; break;
      case ChiralitySquare::mixed: r.class_label = SymmetryClass::chiral_mixed; break;
    }
  } else if (r.chirality_found == ChiralityKind::none && r.time_reversal_symmetric) {
    r.class_label = SymmetryClass::standard_trs;
  } else {
    r.class_label = SymmetryClass::none_detected;
  }
  return r;
}

}  // namespace ckt
