#pragma once

// Classical limit of the coupled top: Cartesian and canonical (Z, phi)
// equations of motion, RK4 integration, phase-portrait ensembles, fixed points
// with Jacobian stability, bifurcation scans and the closed-form branch
// energies.

#include "ckt/hamiltonian.hpp"
#include "ckt/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckt {

/// Rescaled spin components (X_i, Y_i, Z_i) = J_i / j on two unit spheres.
struct CartesianState {
  double x1 = 0, y1 = 0, z1 = 0, x2 = 0, y2 = 0, z2 = 0;

  friend CartesianState operator+(const CartesianState& a, const CartesianState& b) {
    return {a.x1 + b.x1, a.y1 + b.y1, a.z1 + b.z1, a.x2 + b.x2, a.y2 + b.y2, a.z2 + b.z2};
  }
  friend CartesianState operator*(double s, const CartesianState& a) {
    return {s * a.x1, s * a.y1, s * a.z1, s * a.x2, s * a.y2, s * a.z2};
  }
  bool finite() const {
    return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(z1) && std::isfinite(x2) &&
           std::isfinite(y2) && std::isfinite(z2);
  }
};

/// Canonical pairs (Z_i, phi_i), Z = cos(theta), X = sin(theta) cos(phi).
struct CanonicalState {
  double z1 = 0, phi1 = 0, z2 = 0, phi2 = 0;

  friend CanonicalState operator+(const CanonicalState& a, const CanonicalState& b) {
    return {a.z1 + b.z1, a.phi1 + b.phi1, a.z2 + b.z2, a.phi2 + b.phi2};
  }
  friend CanonicalState operator*(double s, const CanonicalState& a) {
    return {s * a.z1, s * a.phi1, s * a.z2, s * a.phi2};
  }
  bool finite() const {
    return std::isfinite(z1) && std::isfinite(phi1) && std::isfinite(z2) && std::isfinite(phi2);
  }
};

/// Canonical equations are singular at the poles; |Z| must stay below 1 - kPoleGuard.
inline constexpr double kPoleGuard = 1e-9;

class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double phi) {
  double w = std::remainder(phi, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

inline CanonicalState to_canonical(const CartesianState& s) {
  return {s.z1, std::atan2(s.y1, s.x1), s.z2, std::atan2(s.y2, s.x2)};
}

inline CartesianState to_cartesian(const CanonicalState& s) {
  const double r1 = std::sqrt(std::max(0.0, 1.0 - s.z1 * s.z1));
  const double r2 = std::sqrt(std::max(0.0, 1.0 - s.z2 * s.z2));
  return {r1 * std::cos(s.phi1), r1 * std::sin(s.phi1), s.z1,
          r2 * std::cos(s.phi2), r2 * std::sin(s.phi2), s.z2};
}

/// Time derivatives of (X1, Y1, Z1, X2, Y2, Z2).
inline CartesianState eom_cartesian(const CartesianState& s, const ModelParams& p) {
  const double a1 = p.kappa1 * s.z1 + p.epsilon * s.z2;
  const double a2 = p.kappa2 * s.z2 + p.epsilon * s.z1;
  return {-s.y1 * a1, -p.omega1 * s.z1 + s.x1 * a1, p.omega1 * s.y1,
          -s.y2 * a2, -p.omega2 * s.z2 + s.x2 * a2, p.omega2 * s.y2};
}

inline void require_off_pole(const CanonicalState& s) {
  if (!(std::abs(s.z1) < 1.0 - kPoleGuard) || !(std::abs(s.z2) < 1.0 - kPoleGuard)) {
    throw PoleError("canonical coordinates are singular at |Z| = 1 (z1 = " +
                    std::to_string(s.z1) + ", z2 = " + std::to_string(s.z2) + ")");
  }
}

/// Hamilton's equations: Zdot_i = -dH/dphi_i, phidot_i = dH/dZ_i.
inline CanonicalState eom_canonical(const CanonicalState& s, const ModelParams& p) {
  require_off_pole(s);
  const double r1 = std::sqrt(1.0 - s.z1 * s.z1);
  const double r2 = std::sqrt(1.0 - s.z2 * s.z2);
  return {p.omega1 * r1 * std::sin(s.phi1),
          p.kappa1 * s.z1 - p.omega1 * s.z1 * std::cos(s.phi1) / r1 + p.epsilon * s.z2,
          p.omega2 * r2 * std::sin(s.phi2),
          p.kappa2 * s.z2 - p.omega2 * s.z2 * std::cos(s.phi2) / r2 + p.epsilon * s.z1};
}

/// H_cl = Omega1 X1 + Omega2 X2 + (kappa1 Z1^2 + kappa2 Z2^2)/2 + eps Z1 Z2.
inline double classical_energy(const CartesianState& s, const ModelParams& p) {
  return p.omega1 * s.x1 + p.omega2 * s.x2 +
         0.5 * (p.kappa1 * s.z1 * s.z1 + p.kappa2 * s.z2 * s.z2) + p.epsilon * s.z1 * s.z2;
}

inline double classical_energy(const CanonicalState& s, const ModelParams& p) {
  const double r1 = std::sqrt(std::max(0.0, 1.0 - s.z1 * s.z1));
  const double r2 = std::sqrt(std::max(0.0, 1.0 - s.z2 * s.z2));
  return p.omega1 * r1 * std::cos(s.phi1) + p.omega2 * r2 * std::cos(s.phi2) +
         0.5 * (p.kappa1 * s.z1 * s.z1 + p.kappa2 * s.z2 * s.z2) + p.epsilon * s.z1 * s.z2;
}

inline double sphere_norm_defect(const CartesianState& s) {
  const double n1 = std::sqrt(s.x1 * s.x1 + s.y1 * s.y1 + s.z1 * s.z1);
  const double n2 = std::sqrt(s.x2 * s.x2 + s.y2 * s.y2 + s.z2 * s.z2);
  return std::max(std::abs(n1 - 1.0), std::abs(n2 - 1.0));
}

/// One classical fourth-order Runge-Kutta step.
template <class State, class Rhs>
State rk4_step(const State& s, double dt, Rhs&& rhs) {
  const State k1 = rhs(s);
  const State k2 = rhs(s + (0.5 * dt) * k1);
  const State k3 = rhs(s + (0.5 * dt) * k2);
  const State k4 = rhs(s + dt * k3);
  return s + (dt / 6.0) * (k1 + (2.0 * k2) + (2.0 * k3) + k4);
}

enum class Representation { cartesian, canonical };

/// Samples every `stride` steps (always including t = 0 and the final step).
/// Drifts are maxima over every step, not just the stored samples.
struct Trajectory {
  Representation representation = Representation::cartesian;
  std::vector<double> times;
  std::vector<CartesianState> cartesian;
  std::vector<CanonicalState> canonical;
  double max_energy_drift = 0.0;
  double max_norm_drift = 0.0;
};

inline Trajectory integrate_rk4(const CartesianState& s0, const ModelParams& p, double dt,
                                long steps, long stride = 1) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_rk4: dt must be positive");
  if (steps < 0 || stride < 1) throw std::invalid_argument("integrate_rk4: bad steps/stride");
  Trajectory out;
  out.representation = Representation::cartesian;
  const double e0 = classical_energy(s0, p);
  const double n0 = sphere_norm_defect(s0);
  auto store = [&](double t, const CartesianState& s) {
    out.times.push_back(t);
    out.cartesian.push_back(s);
    out.canonical.push_back(to_canonical(s));
  };
  store(0.0, s0);
  CartesianState s = s0;
  auto rhs = [&p](const CartesianState& x) { return eom_cartesian(x, p); };
  for (long n = 1; n <= steps; ++n) {
    s = rk4_step(s, dt, rhs);
    if (!s.finite()) {
      throw NumericalError("integrate_rk4: non-finite state at step " + std::to_string(n) +
                           " (t = " + std::to_string(n * dt) + ")");
    }
    out.max_energy_drift = std::max(out.max_energy_drift, std::abs(classical_energy(s, p) - e0));
    out.max_norm_drift = std::max(out.max_norm_drift, std::abs(sphere_norm_defect(s) - n0));
    if (n % stride == 0 || n == steps) store(static_cast<double>(n) * dt, s);
  }
  return out;
}

inline Trajectory integrate_rk4(const CanonicalState& s0, const ModelParams& p, double dt,
                                long steps, long stride = 1) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_rk4: dt must be positive");
  if (steps < 0 || stride < 1) throw std::invalid_argument("integrate_rk4: bad steps/stride");
  require_off_pole(s0);
  Trajectory out;
  out.representation = Representation::canonical;
  const double e0 = classical_energy(s0, p);
  auto store = [&](double t, const CanonicalState& s) {
    out.times.push_back(t);
    out.canonical.push_back({s.z1, wrap_angle(s.phi1), s.z2, wrap_angle(s.phi2)});
    out.cartesian.push_back(to_cartesian(s));
  };
  store(0.0, s0);
  CanonicalState s = s0;
  auto rhs = [&p](const CanonicalState& x) { return eom_canonical(x, p); };
  for (long n = 1; n <= steps; ++n) {
    s = rk4_step(s, dt, rhs);
    if (!s.finite()) {
      throw NumericalError("integrate_rk4: non-finite state at step " + std::to_string(n) +
                           " (t = " + std::to_string(n * dt) + ")");
    }
    require_off_pole(s);
    out.max_energy_drift = std::max(out.max_energy_drift, std::abs(classical_energy(s, p) - e0));
    if (n % stride == 0 || n == steps) store(static_cast<double>(n) * dt, s);
  }
  return out;
}

/// Knuth's MMIX 64-bit linear congruential generator.
using PortraitEngine =
    std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                    1442695040888963407ULL, 0ULL>;

/// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
inline double unit_uniform(PortraitEngine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform point on the product of spheres: Z uniform in [-1, 1], phi in (-pi, pi].
inline CanonicalState sample_uniform(PortraitEngine& rng) {
  CanonicalState s;
  s.z1 = -1.0 + 2.0 * unit_uniform(rng);
  s.phi1 = kPi - 2.0 * kPi * unit_uniform(rng);
  s.z2 = -1.0 + 2.0 * unit_uniform(rng);
  s.phi2 = kPi - 2.0 * kPi * unit_uniform(rng);
  return s;
}

struct PortraitPoint {
  int trajectory = 0;
  double t = 0.0;
  double phi1 = 0.0;
  double z1 = 0.0;
};

struct PortraitOptions {
  int n_traj = 20;
  double t_max = 200.0;
  double dt = 1e-3;
  long stride = 100;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Projection of an ensemble of trajectories onto the first top's (phi1, Z1)
/// plane. Initial conditions are drawn sequentially from the seed, so the output
/// does not depend on how trajectories are scheduled.
inline std::vector<PortraitPoint> phase_portrait(const ModelParams& p, const PortraitOptions& o) {
  if (o.n_traj < 1) throw std::invalid_argument("phase_portrait: n_traj must be >= 1");
  if (!(o.t_max >= 0.0)) throw std::invalid_argument("phase_portrait: t_max must be >= 0");
  PortraitEngine rng(o.seed);
  std::vector<CartesianState> starts;
  for (int k = 0; k < o.n_traj; ++k) starts.push_back(to_cartesian(sample_uniform(rng)));
  const long steps = std::lround(o.t_max / o.dt);

  std::vector<std::vector<PortraitPoint>> per(static_cast<std::size_t>(o.n_traj));
  parallel_for(static_cast<std::size_t>(o.n_traj), o.threads, [&](std::size_t k) {
    const Trajectory tr = integrate_rk4(starts[k], p, o.dt, steps, o.stride);
    auto& pts = per[k];
    pts.reserve(tr.times.size());
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      pts.push_back({static_cast<int>(k), tr.times[i], tr.canonical[i].phi1, tr.canonical[i].z1});
    }
  });
  std::vector<PortraitPoint> out;
  for (auto& pts : per) out.insert(out.end(), pts.begin(), pts.end());
  return out;
}

// ---------------------------------------------------------------------------
// Fixed points
// ---------------------------------------------------------------------------

enum class Family { cfp1, cfp2, cfp3, cfp4 };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::cfp1: return "CFP-I";
    case Family::cfp2: return "CFP-II";
    case Family::cfp3: return "CFP-III";
    case Family::cfp4: return "CFP-IV";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  std::string t;
  for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "cfp-i" || t == "cfp1" || t == "i") return Family::cfp1;
  if (t == "cfp-ii" || t == "cfp2" || t == "ii") return Family::cfp2;
  if (t == "cfp-iii" || t == "cfp3" || t == "iii") return Family::cfp3;
  if (t == "cfp-iv" || t == "cfp4" || t == "iv") return Family::cfp4;
  throw std::invalid_argument("unknown fixed-point family '" + s + "'");
}

/// Jacobian of the canonical flow, variables ordered (Z1, phi1, Z2, phi2).
inline Eigen::Matrix4d canonical_jacobian(const CanonicalState& s, const ModelParams& p) {
  require_off_pole(s);
  const double r1 = std::sqrt(1.0 - s.z1 * s.z1);
  const double r2 = std::sqrt(1.0 - s.z2 * s.z2);
  const double c1 = std::cos(s.phi1), sn1 = std::sin(s.phi1);
  const double c2 = std::cos(s.phi2), sn2 = std::sin(s.phi2);
  Eigen::Matrix4d jac = Eigen::Matrix4d::Zero();
  jac(0, 0) = -p.omega1 * s.z1 * sn1 / r1;
  jac(0, 1) = p.omega1 * r1 * c1;
  jac(1, 0) = p.kappa1 - p.omega1 * c1 / (r1 * r1 * r1);
  jac(1, 1) = p.omega1 * s.z1 * sn1 / r1;
  jac(1, 2) = p.epsilon;
  jac(2, 2) = -p.omega2 * s.z2 * sn2 / r2;
  jac(2, 3) = p.omega2 * r2 * c2;
  jac(3, 2) = p.kappa2 - p.omega2 * c2 / (r2 * r2 * r2);
  jac(3, 3) = p.omega2 * s.z2 * sn2 / r2;
  jac(3, 0) = p.epsilon;
  return jac;
}

inline constexpr double kStabilityThreshold = 1e-8;

struct FixedPointRecord {
  Family family = Family::cfp1;
  CanonicalState state;
  Eigen::Matrix4d jacobian = Eigen::Matrix4d::Zero();
  std::array<Complex, 4> jacobian_eigenvalues{};
  double max_real_part = 0.0;
  bool stable = false;
  double energy = 0.0;
  double residual = 0.0;  // max |rhs| of the canonical equations at `state`
};

struct FixedPointFailure {
  Family family;
  std::string reason;
};

struct FixedPointSet {
  std::vector<FixedPointRecord> records;
  std::vector<FixedPointFailure> missing;

  const FixedPointRecord* find(Family f) const {
    for (const auto& r : records)
      if (r.family == f) return &r;
    return nullptr;
  }
};

inline double eom_residual(const CanonicalState& s, const ModelParams& p) {
  const CanonicalState d = eom_canonical(s, p);
  return std::max({std::abs(d.z1), std::abs(d.phi1), std::abs(d.z2), std::abs(d.phi2)});
}

inline FixedPointRecord make_record(Family f, const CanonicalState& s, const ModelParams& p) {
  FixedPointRecord r;
  r.family = f;
  r.state = s;
  r.jacobian = canonical_jacobian(s, p);
  Eigen::EigenSolver<Eigen::Matrix4d> solver(r.jacobian, false);
  r.max_real_part = -INFINITY;
  for (int k = 0; k < 4; ++k) {
    r.jacobian_eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    r.max_real_part = std::max(r.max_real_part, solver.eigenvalues()(k).real());
  }
  r.stable = r.max_real_part < kStabilityThreshold;
  r.energy = classical_energy(s, p);
  r.residual = eom_residual(s, p);
  return r;
}

inline CanonicalState family_anchor(Family f) {
  switch (f) {
    case Family::cfp1: return {0.0, kPi, 0.0, kPi};
    case Family::cfp2: return {0.0, 0.0, 0.0, 0.0};
    default: break;
  }
  throw std::invalid_argument("family_anchor: only CFP-I and CFP-II have a fixed location");
}

namespace detail {

/// Z2 forced by phidot_1 = 0 at (Z1, phi) with cos(phi) = c.
inline double partner_z(double z1, double c, const ModelParams& p) {
  const double r1 = std::sqrt(1.0 - z1 * z1);
  return -z1 * (p.kappa1 - p.omega1 * c / r1) / p.epsilon;
}

/// phidot_2 evaluated on the phidot_1 = 0 curve.
inline double reduced_residual(double z1, double c, const ModelParams& p) {
  const double z2 = partner_z(z1, c, p);
  const double r2 = std::sqrt(1.0 - z2 * z2);
  return p.kappa2 * z2 - p.omega2 * z2 * c / r2 + p.epsilon * z1;
}

}  // namespace detail

inline constexpr int kBracketPoints = 2000;
inline constexpr double kBracketEdge = 1e-6;

/// Locates CFP-III (phi = pi, Z1 Z2 < 0) or CFP-IV (phi = 0, Z1 Z2 > 0) with Z1 > 0.
/// phidot_1 = 0 fixes Z2 as a function of Z1; the remaining equation phidot_2 = 0 is
/// bracketed on a grid over (0, 1 - 1e-6) and bisected to machine precision. For
/// identical torsions this reproduces Z1 = -Z2 (CFP-III) and Z1 = Z2 (CFP-IV).
inline std::optional<CanonicalState> locate_branch(Family f, const ModelParams& p,
                                                   std::string* why = nullptr) {
  if (f != Family::cfp3 && f != Family::cfp4) {
    throw std::invalid_argument("locate_branch: only CFP-III and CFP-IV are searched");
  }
  auto fail = [&](const std::string& msg) -> std::optional<CanonicalState> {
    if (why) *why = msg;
    return std::nullopt;
  };
  if (p.epsilon == 0.0) return fail("uncoupled tops (epsilon = 0) have no symmetry-broken branch");
  const double c = f == Family::cfp3 ? -1.0 : 1.0;
  const double want_sign = f == Family::cfp3 ? -1.0 : 1.0;
  auto admissible = [&](double z1) {
    const double z2 = detail::partner_z(z1, c, p);
    return std::isfinite(z2) && std::abs(z2) < 1.0 - kBracketEdge && z2 * want_sign > 0.0;
  };
  const double lo = kBracketEdge, hi = 1.0 - kBracketEdge;
  const double step = (hi - lo) / (kBracketPoints - 1);
  double prev_z = NAN, prev_g = NAN;
  for (int k = 0; k < kBracketPoints; ++k) {
    const double z = lo + step * k;
    if (!admissible(z)) {
      prev_z = NAN;
      continue;
    }
    const double g = detail::reduced_residual(z, c, p);
    if (std::isfinite(prev_z) && (g == 0.0 || (prev_g < 0.0) != (g < 0.0))) {
      double a = prev_z, b = z, ga = prev_g;
      if (g == 0.0) a = b = z;
      for (int it = 0; it < 200 && b - a > 0.0; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double gm = detail::reduced_residual(m, c, p);
        if (gm == 0.0) {
          a = b = m;
          break;
        }
        if ((gm < 0.0) == (ga < 0.0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      const double z1 = std::abs(detail::reduced_residual(a, c, p)) <=
                                std::abs(detail::reduced_residual(b, c, p))
                            ? a
                            : b;
      const double phi = f == Family::cfp3 ? kPi : 0.0;
      return CanonicalState{z1, phi, detail::partner_z(z1, c, p), phi};
    }
    prev_z = z;
    prev_g = g;
  }
  return fail("no root of the reduced steady-state equation in (0, 1)");
}

/// CFP-I and CFP-II always; CFP-III and CFP-IV when a nontrivial root exists.
inline FixedPointSet fixed_points(const ModelParams& p) {
  p.validate();
  if (!p.omegas_equal()) {
    throw std::invalid_argument("fixed_points: the CFP families assume Omega1 == Omega2");
  }
  FixedPointSet out;
  out.records.push_back(make_record(Family::cfp1, family_anchor(Family::cfp1), p));
  out.records.push_back(make_record(Family::cfp2, family_anchor(Family::cfp2), p));
  for (Family f : {Family::cfp3, Family::cfp4}) {
    std::string why;
    if (auto s = locate_branch(f, p, &why)) {
      out.records.push_back(make_record(f, *s, p));
    } else {
      out.missing.push_back({f, why});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bifurcations and closed-form branches
// ---------------------------------------------------------------------------

/// Largest real part of the Jacobian spectrum at CFP-I or CFP-II.
inline double anchor_growth_rate(Family f, const ModelParams& p) {
  return make_record(f, family_anchor(f), p).max_real_part;
}

struct BifurcationResult {
  bool found = false;
  double eps_c = NAN;
  double bracket_lo = NAN;  // last stable coupling
  double bracket_hi = NAN;  // first unstable coupling
};

inline constexpr double kBifurcationTolerance = 1e-6;

/// Smallest epsilon on [eps_lo, eps_hi] (grid `eps_step`) where the family's
/// Jacobian gains an eigenvalue with real part > 1e-8, refined by bisection.
inline BifurcationResult bifurcation_scan(const ModelParams& p0, Family family, double eps_lo,
                                          double eps_hi, double eps_step) {
  if (family != Family::cfp1 && family != Family::cfp2) {
    throw std::invalid_argument("bifurcation_scan: only CFP-I and CFP-II are scanned");
  }
  if (!(eps_step > 0.0) || !(eps_hi >= eps_lo)) {
    throw std::invalid_argument("bifurcation_scan: invalid coupling range");
  }
  auto unstable = [&](double eps) {
    return anchor_growth_rate(family, p0.with_epsilon(eps)) >= kStabilityThreshold;
  };
  BifurcationResult out;
  const long n = static_cast<long>(std::floor((eps_hi - eps_lo) / eps_step + 1e-9));
  double prev = NAN;
  for (long k = 0; k <= n; ++k) {
    const double eps = eps_lo + static_cast<double>(k) * eps_step;
    if (unstable(eps)) {
      out.found = true;
      if (!std::isfinite(prev)) {
        out.eps_c = out.bracket_lo = out.bracket_hi = eps;
        return out;
      }
      double a = prev, b = eps;
      while (b - a > kBifurcationTolerance) {
        const double m = 0.5 * (a + b);
        (unstable(m) ? b : a) = m;
      }
      out.bracket_lo = a;
      out.bracket_hi = b;
      out.eps_c = 0.5 * (a + b);
      return out;
    }
    prev = eps;
  }
  return out;
}

/// Parameter presets with a closed-form branch energy.
enum class BranchModel { fp, nzt_equal, nzt_opposite };

inline const char* to_string(BranchModel m) {
  switch (m) {
    case BranchModel::fp: return "FP";
    case BranchModel::nzt_equal: return "NZT-I";
    case BranchModel::nzt_opposite: return "NZT-II";
  }
  return "?";
}

/// Omega1 = Omega2 = 1; torsions 0 / (1, 1) / (1, -1).
inline ModelParams preset_params(BranchModel m, SpinMagnitude j, double eps) {
  ModelParams p;
  p.j = j;
  p.omega1 = p.omega2 = 1.0;
  p.epsilon = eps;
  switch (m) {
    case BranchModel::fp: p.kappa1 = p.kappa2 = 0.0; break;
    case BranchModel::nzt_equal: p.kappa1 = p.kappa2 = 1.0; break;
    case BranchModel::nzt_opposite: p.kappa1 = 1.0; p.kappa2 = -1.0; break;
  }
  return p;
}

/// Coupling at which the closed-form branch starts.
inline double branch_onset(BranchModel m, Family branch) {
  switch (m) {
    case BranchModel::fp: return 1.0;
    case BranchModel::nzt_equal: return branch == Family::cfp3 ? 2.0 : 0.0;
    case BranchModel::nzt_opposite: return 1.0;
  }
  return NAN;
}

/// Closed-form energies of the symmetry-broken branches:
///   FP      CFP-III  -(eps + 1/eps)               CFP-IV  eps + 1/eps
///   NZT-I   CFP-III  (1 - eps) + 1/(1 - eps)      CFP-IV  (1 + eps) + 1/(1 + eps)
///   NZT-II  CFP-III  -2/(1 - eps) - eps[1 - 1/(1 - eps)^2]
///           CFP-IV    2/(1 + eps) - eps[1 - 1/(1 + eps)^2]
inline double branch_energy(BranchModel m, Family branch, double eps) {
  if (branch != Family::cfp3 && branch != Family::cfp4) {
    throw std::invalid_argument("branch_energy: only CFP-III and CFP-IV have branches");
  }
  const double onset = branch_onset(m, branch);
  const bool strict = m == BranchModel::nzt_opposite;
  if (strict ? !(eps > onset) : !(eps >= onset)) {
    throw std::domain_error(std::string("branch_energy: ") + to_string(m) + " " +
                            to_string(branch) + " needs epsilon " + (strict ? "> " : ">= ") +
                            std::to_string(onset) + ", got " + std::to_string(eps));
  }
  const bool iii = branch == Family::cfp3;
  switch (m) {
    case BranchModel::fp: return iii ? -(eps + 1.0 / eps) : eps + 1.0 / eps;
    case BranchModel::nzt_equal:
      return iii ? (1.0 - eps) + 1.0 / (1.0 - eps) : (1.0 + eps) + 1.0 / (1.0 + eps);
    case BranchModel::nzt_opposite: {
      if (iii) {
        const double a = 1.0 - eps;
        return -2.0 / a - eps * (1.0 - 1.0 / (a * a));
      }
      const double b = 1.0 + eps;
      return 2.0 / b - eps * (1.0 - 1.0 / (b * b));
    }
  }
  return NAN;
}

}  // namespace ckt
