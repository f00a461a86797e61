#pragma once

// Coupling sweeps (entanglement and edge energies), the Floquet convergence
// study and the combined transition report, plus the CSV / manifest writers
// shared by the command-line tool.

#include "ckt/classical.hpp"
#include "ckt/hamiltonian.hpp"
#include "ckt/parallel.hpp"
#include "ckt/spectral.hpp"
#include "ckt/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ckt {

/// One coupling value of a sweep. Energies are per spin (E / j); entropies in nats.
/// Cells that do not apply hold NaN.
struct SweepRecord {
  double epsilon = 0.0;
  double e_ground_per_j = NAN;
  double e_excited_per_j = NAN;
  double sv_ground = NAN;
  double sv_excited = NAN;
  int ground_multiplicity = 1;
  int excited_multiplicity = 1;
  double branch_cfp3 = NAN;       // closed form, where the branch exists
  double branch_cfp4 = NAN;
  double classical_ground = NAN;  // lowest energy over the located fixed points
  double classical_excited = NAN; // highest energy over the located fixed points
};

struct SweepOptions {
  DegeneracyRule rule = DegeneracyRule::permutation;
  unsigned threads = 0;
  std::optional<BranchModel> branch_model;  // adds closed-form branch columns
};

/// Recognizes the three presets from the torsions (Omega1 = Omega2 = 1 assumed).
inline std::optional<BranchModel> detect_branch_model(const ModelParams& p) {
  if (std::abs(p.omega1 - 1.0) > 1e-12 || std::abs(p.omega2 - 1.0) > 1e-12) return std::nullopt;
  if (p.kappa1 == 0.0 && p.kappa2 == 0.0) return BranchModel::fp;
  if (p.kappa1 == 1.0 && p.kappa2 == 1.0) return BranchModel::nzt_equal;
  if (p.kappa1 == 1.0 && p.kappa2 == -1.0) return BranchModel::nzt_opposite;
  return std::nullopt;
}

namespace detail {

inline void require_ascending(const std::vector<double>& grid, const char* who) {
  if (grid.empty()) throw std::invalid_argument(std::string(who) + ": empty coupling grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(who) + ": coupling grid must be strictly ascending");
    }
  }
}

inline double branch_or_nan(BranchModel m, Family f, double eps) {
  try {
    return branch_energy(m, f, eps);
  } catch (const std::domain_error&) {
    return NAN;
  }
}

inline SweepRecord sweep_point(const ModelParams& p0, double eps, const SweepOptions& o,
                               bool energies) {
  const ModelParams p = p0.with_epsilon(eps);
  const double jv = p.j.value();
  const EdgeStates edges = edge_states(effective_hamiltonian(p), o.rule);
  SweepRecord r;
  r.epsilon = eps;
  r.e_ground_per_j = edges.e_ground / jv;
  r.e_excited_per_j = edges.e_excited / jv;
  r.sv_ground = entanglement_entropy(edges.ground);
  r.sv_excited = entanglement_entropy(edges.excited);
  r.ground_multiplicity = edges.ground_multiplicity;
  r.excited_multiplicity = edges.excited_multiplicity;
  if (energies) {
    if (o.branch_model) {
      r.branch_cfp3 = branch_or_nan(*o.branch_model, Family::cfp3, eps);
      r.branch_cfp4 = branch_or_nan(*o.branch_model, Family::cfp4, eps);
    }
    if (p.omegas_equal()) {
      const FixedPointSet fps = fixed_points(p);
      for (const auto& rec : fps.records) {
        if (!(rec.energy >= r.classical_ground)) r.classical_ground = rec.energy;
        if (!(rec.energy <= r.classical_excited)) r.classical_excited = rec.energy;
      }
    }
  }
  return r;
}

inline std::vector<SweepRecord> run_sweep(const ModelParams& p0, const std::vector<double>& grid,
                                          const SweepOptions& o, bool energies, const char* who) {
  p0.validate();
  require_ascending(grid, who);
  std::vector<SweepRecord> out(grid.size());
  parallel_for(grid.size(), o.threads,
               [&](std::size_t i) { out[i] = sweep_point(p0, grid[i], o, energies); });
  return out;
}

}  // namespace detail

/// Ground and most-excited entanglement across the coupling grid (order-1 H).
inline std::vector<SweepRecord> sweep_entanglement(const ModelParams& p0,
                                                   const std::vector<double>& grid,
                                                   const SweepOptions& o = {}) {
  return detail::run_sweep(p0, grid, o, false, "sweep_entanglement");
}

/// As sweep_entanglement, plus closed-form branch energies and the extreme
/// classical fixed-point energies for overlay.
inline std::vector<SweepRecord> sweep_edge_energies(const ModelParams& p0,
                                                    const std::vector<double>& grid,
                                                    SweepOptions o = {}) {
  if (!o.branch_model) o.branch_model = detect_branch_model(p0);
  return detail::run_sweep(p0, grid, o, true, "sweep_edge_energies");
}

struct Peak {
  double epsilon = NAN;
  double value = NAN;
};

/// Argmax over the grid; the first maximum wins on ties.
template <class Get>
Peak find_peak(const std::vector<SweepRecord>& rows, Get&& get) {
  Peak best;
  for (const auto& r : rows) {
    const double v = get(r);
    if (std::isfinite(v) && !(v <= best.value)) best = {r.epsilon, v};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Floquet convergence
// ---------------------------------------------------------------------------

struct FloquetRow {
  double period = 0.0;
  double delta_order1 = NAN;  // max |sorted phase difference| against U(T)
  double delta_order2 = NAN;
  double correction_norm = NAN;  // spectral norm of the order-2 term
};

/// Max |theta_k - theta'_k| over ascending eigenphases of two unitaries.
inline double phase_mismatch(const ComplexMatrix& u, const ComplexMatrix& v) {
  const RealVector a = eigenphases(u);
  const RealVector b = eigenphases(v);
  return (a - b).cwiseAbs().maxCoeff();
}

/// Compares U(T) with exp(-i H_eff T) at orders 1 and 2 for each period. Periods
/// must be positive and strictly descending, and small enough that no eigenphase
/// wraps (||H_eff|| T < pi).
inline std::vector<FloquetRow> floquet_convergence(const ModelParams& p0,
                                                   const std::vector<double>& periods) {
  p0.validate();
  if (periods.empty()) throw std::invalid_argument("floquet_convergence: no periods given");
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (!(periods[i] > 0.0)) throw std::invalid_argument("floquet_convergence: periods must be > 0");
    if (i > 0 && !(periods[i] < periods[i - 1])) {
      throw std::invalid_argument("floquet_convergence: periods must be strictly descending");
    }
  }
  std::vector<FloquetRow> out;
  for (double t : periods) {
    const KickedParams kp{p0, t};
    const ComplexMatrix h1 = effective_hamiltonian(kp, 1);
    const ComplexMatrix corr = second_order_correction(kp);
    const ComplexMatrix h2 = h1 + corr;
    const double reach = std::max(spectral_norm(h1), spectral_norm(h2)) * t;
    if (!(reach < kPi)) {
      throw std::invalid_argument(
          "floquet_convergence: ||H_eff|| T = " + std::to_string(reach) +
          " >= pi makes eigenphases ambiguous; use a smaller period");
    }
    const ComplexMatrix u = floquet_operator(kp);
    FloquetRow row;
    row.period = t;
    row.delta_order1 = phase_mismatch(u, unitary_exp(h1, t));
    row.delta_order2 = phase_mismatch(u, unitary_exp(0.5 * (h2 + h2.adjoint()), t));
    row.correction_norm = spectral_norm(corr);
    out.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transition report
// ---------------------------------------------------------------------------

struct QptReport {
  BifurcationResult cfp1;
  BifurcationResult cfp2;
  double cfp4_onset = NAN;  // first grid coupling where CFP-IV is located
  Peak ground_peak;
  Peak excited_peak;
  double grid_step = NAN;
  bool coincident = false;
  SymmetryReport symmetry;  // at epsilon = 1
};

/// Classical critical couplings, quantum entanglement peaks and the symmetry
/// class at epsilon = 1, for the grid [lo, lo + step, ..., hi].
inline QptReport qpt_report(const ModelParams& p0, const std::vector<double>& grid,
                            const SweepOptions& o = {}) {
  detail::require_ascending(grid, "qpt_report");
  QptReport r;
  r.grid_step = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
  const double step = r.grid_step > 0.0 ? r.grid_step : 0.05;
  r.cfp1 = bifurcation_scan(p0, Family::cfp1, grid.front(), grid.back(), step);
  r.cfp2 = bifurcation_scan(p0, Family::cfp2, grid.front(), grid.back(), step);
  for (double eps : grid) {
    if (locate_branch(Family::cfp4, p0.with_epsilon(eps))) {
      r.cfp4_onset = eps;
      break;
    }
  }
  const auto rows = sweep_entanglement(p0, grid, o);
  r.ground_peak = find_peak(rows, [](const SweepRecord& s) { return s.sv_ground; });
  r.excited_peak = find_peak(rows, [](const SweepRecord& s) { return s.sv_excited; });
  r.coincident = r.cfp1.found && r.cfp2.found && std::abs(r.cfp1.eps_c - r.cfp2.eps_c) < step;
  const ModelParams p1 = p0.with_epsilon(1.0);
  r.symmetry = classify(effective_hamiltonian(p1), p1.j, p1.omegas_equal());
  return r;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// Shortest round-trip form is not required; 17 significant digits always are.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& names) { row_strings(names); }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    row_strings(cells);
  }

  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << cells[i];
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& rows) {
  CsvWriter w(os);
  w.header({"epsilon", "e_ground_per_j", "e_excited_per_j", "sv_ground", "sv_excited",
            "ground_multiplicity", "excited_multiplicity", "branch_cfp3", "branch_cfp4",
            "classical_ground", "classical_excited"});
  for (const auto& r : rows) {
    w.row({r.epsilon, r.e_ground_per_j, r.e_excited_per_j, r.sv_ground, r.sv_excited,
           static_cast<double>(r.ground_multiplicity), static_cast<double>(r.excited_multiplicity),
           r.branch_cfp3, r.branch_cfp4, r.classical_ground, r.classical_excited});
  }
}

inline void write_floquet_csv(std::ostream& os, const std::vector<FloquetRow>& rows) {
  CsvWriter w(os);
  w.header({"T", "delta_order1", "delta_order2", "correction_norm"});
  for (const auto& r : rows) w.row({r.period, r.delta_order1, r.delta_order2, r.correction_norm});
}

/// Ordered `key = value` provenance file.
using Manifest = std::vector<std::pair<std::string, std::string>>;

inline void write_manifest(std::ostream& os, const Manifest& m) {
  for (const auto& [k, v] : m) os << k << " = " << v << '\n';
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace ckt
