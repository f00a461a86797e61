#pragma once

// Effective (high-frequency) Hamiltonians of the coupled kicked top, the
// exact one-period Floquet operator, and the torsion trace.

#include "ckt/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ckt {

/// Rescaled rates: precession Omega_i = p_i/T, torsion kappa_i = k_i/T,
/// coupling epsilon = eps0/T.
struct ModelParams {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double epsilon = 0.0;
  SpinMagnitude j = SpinMagnitude::from_twice(2);

  void validate() const {
    for (double v : {omega1, omega2, kappa1, kappa2, epsilon}) {
      if (!std::isfinite(v)) throw std::invalid_argument("model parameters must be finite");
    }
  }

  ModelParams with_epsilon(double eps) const {
    ModelParams p = *this;
    p.epsilon = eps;
    return p;
  }

  bool omegas_equal() const { return std::abs(omega1 - omega2) <= 1e-12; }
};

/// The kicked model: rescaled rates plus the driving period T.
struct KickedParams {
  ModelParams params;
  double period = 0.1;

  void validate() const {
    params.validate();
    if (!(period > 0.0) || !std::isfinite(period)) {
      throw std::invalid_argument("kick period must be positive, got " + std::to_string(period));
    }
  }

  double rotation1() const { return params.omega1 * period; }
  double rotation2() const { return params.omega2 * period; }
  double torsion1() const { return params.kappa1 * period; }
  double torsion2() const { return params.kappa2 * period; }
  double coupling() const { return params.epsilon * period; }
};

/// Omega1 Jx1 + Omega2 Jx2.
inline ComplexMatrix precession_term(const ModelParams& p) {
  const AngularMomentum s = spin_operators(p.j);
  return p.omega1 * embed(s.jx, Slot::first) + p.omega2 * embed(s.jx, Slot::second);
}

/// (1/2j)(kappa1 Jz1^2 + kappa2 Jz2^2 + 2 eps Jz1 Jz2): the kick generator per unit time.
/// Diagonal in the product basis, so it is filled entry by entry.
inline ComplexMatrix kick_rate_term(const ModelParams& p) {
  const SpinMagnitude j = p.j;
  const Index d = j.local_dim();
  const double inv2j = 1.0 / (2.0 * j.value());
  ComplexMatrix out = ComplexMatrix::Zero(j.joint_dim(), j.joint_dim());
  for (Index a = 0; a < d; ++a) {
    const double m1 = j.m_of(a);
    for (Index b = 0; b < d; ++b) {
      const double m2 = j.m_of(b);
      out(a * d + b, a * d + b) =
          inv2j * (p.kappa1 * m1 * m1 + p.kappa2 * m2 * m2 + 2.0 * p.epsilon * m1 * m2);
    }
  }
  return out;
}

/// First-order effective Hamiltonian
/// H = Omega1 Jx1 + Omega2 Jx2 + (1/2j)(kappa1 Jz1^2 + kappa2 Jz2^2 + 2 eps Jz1 Jz2).
inline ComplexMatrix effective_hamiltonian(const ModelParams& p, int order = 1) {
  p.validate();
  if (order == 2) {
    throw std::invalid_argument(
        "effective_hamiltonian: order 2 depends on the driving period; pass KickedParams");
  }
  if (order != 1) {
    throw std::invalid_argument("effective_hamiltonian: order must be 1 or 2, got " +
                                std::to_string(order));
  }
  return precession_term(p) + kick_rate_term(p);
}

/// (1/24)[[V, H0], V] with H0 the static precession and V = T * kick_rate_term the
/// dimensionless kick. Scales as T^2 at fixed rescaled rates.
inline ComplexMatrix second_order_correction(const KickedParams& kp) {
  kp.validate();
  const ComplexMatrix h0 = precession_term(kp.params);
  const ComplexMatrix v = kp.period * kick_rate_term(kp.params);
  const ComplexMatrix inner = v * h0 - h0 * v;
  return (inner * v - v * inner) / 24.0;
}

inline ComplexMatrix effective_hamiltonian(const KickedParams& kp, int order) {
  kp.validate();
  if (order != 1 && order != 2) {
    throw std::invalid_argument("effective_hamiltonian: order must be 1 or 2, got " +
                                std::to_string(order));
  }
  ComplexMatrix h = effective_hamiltonian(kp.params, 1);
  if (order == 2) h += second_order_correction(kp);
  return h;
}

/// U(T) = exp(-i (eps0/j) Jz1 Jz2) [exp(-i (k1/2j) Jz1^2) exp(-i p1 Jx1) (x)
///                                  exp(-i (k2/2j) Jz2^2) exp(-i p2 Jx2)].
inline ComplexMatrix floquet_operator(const KickedParams& kp) {
  kp.validate();
  const SpinMagnitude j = kp.params.j;
  const AngularMomentum s = spin_operators(j);
  const double jv = j.value();
  const ComplexMatrix jz2 = s.jz * s.jz;
  const ComplexMatrix top1 =
      unitary_exp(jz2, kp.torsion1() / (2.0 * jv)) * unitary_exp(s.jx, kp.rotation1());
  const ComplexMatrix top2 =
      unitary_exp(jz2, kp.torsion2() / (2.0 * jv)) * unitary_exp(s.jx, kp.rotation2());
  const ComplexMatrix zz = kron(s.jz, s.jz);
  return unitary_exp(zz, kp.coupling() / jv) * kron(top1, top2);
}

/// The torsion part (1/2j)(kappa1 Jz1^2 + kappa2 Jz2^2) on the joint space.
inline ComplexMatrix nonlinear_term(SpinMagnitude j, double kappa1, double kappa2) {
  ModelParams p;
  p.j = j;
  p.omega1 = p.omega2 = 0.0;
  p.kappa1 = kappa1;
  p.kappa2 = kappa2;
  p.epsilon = 0.0;
  return kick_rate_term(p);
}

/// Trace of the torsion term restricted to one top's space (each Jz_i^2 traced over
/// its own 2j+1 levels): (1/6)(j+1)(2j+1)(kappa1 + kappa2).
inline double nl_trace_single_top(SpinMagnitude j, double kappa1, double kappa2) {
  const double jv = j.value();
  return (jv + 1.0) * (2.0 * jv + 1.0) * (kappa1 + kappa2) / 6.0;
}

/// Trace of the torsion term on the joint (2j+1)^2 space. Each Jz_i^2 picks up a
/// factor 2j+1 from the identity on the other top.
inline double nl_trace(SpinMagnitude j, double kappa1, double kappa2) {
  return static_cast<double>(j.local_dim()) * nl_trace_single_top(j, kappa1, kappa2);
}

struct TraceCheck {
  double matrix_trace = 0.0;
  double closed_form = 0.0;         // joint space
  double closed_form_single = 0.0;  // one top's space
  bool closed_form_matches = false;
  bool single_top_matches = false;
};

/// Compares both closed forms with the explicit matrix trace.
inline TraceCheck check_nl_trace(SpinMagnitude j, double kappa1, double kappa2,
                                 double tol = 1e-10) {
  TraceCheck out;
  out.matrix_trace = nonlinear_term(j, kappa1, kappa2).trace().real();
  out.closed_form = nl_trace(j, kappa1, kappa2);
  out.closed_form_single = nl_trace_single_top(j, kappa1, kappa2);
  const double scale = std::max(1.0, std::abs(out.matrix_trace));
  out.closed_form_matches = std::abs(out.closed_form - out.matrix_trace) <= tol * scale;
  out.single_top_matches = std::abs(out.closed_form_single - out.matrix_trace) <= tol * scale;
  return out;
}

}  // namespace ckt
