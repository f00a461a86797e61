// ckt: command-line front end for the coupled-top lab.
//
// Every setting has a config-file key (INI `section.key`) and a flag; flags win.
// Outputs go to $CKT_OUTPUT_DIR (default ./out) as <command>.csv / .txt plus a
// <command>.manifest provenance file.

#include "ckt/classical.hpp"
#include "ckt/config.hpp"
#include "ckt/experiments.hpp"
#include "ckt/spectral.hpp"
#include "ckt/symmetry.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#ifndef CKT_VERSION_STRING
#define CKT_VERSION_STRING "unknown"
#endif

namespace {

using namespace ckt;

struct Setting {
  const char* key;
  const char* flag;
  const char* help;
};

// Config-file key, flag, help. Order here is the order in --help and manifests.
const std::vector<Setting> kSettings = {
    {"model.preset", "--model", "fp | nzt-equal | nzt-opposite | custom (default fp)"},
    {"model.j", "--j", "spin magnitude, positive half-integer (default 10)"},
    {"model.omega1", "--omega1", "precession rate of top 1 (default 1)"},
    {"model.omega2", "--omega2", "precession rate of top 2 (default 1)"},
    {"model.kappa1", "--kappa1", "torsion of top 1 (default from preset)"},
    {"model.kappa2", "--kappa2", "torsion of top 2 (default from preset)"},
    {"grid.eps", "--eps", "coupling value or start:stop:step range"},
    {"spectrum.order", "--order", "effective Hamiltonian order 1 or 2 (default 1)"},
    {"spectrum.period", "--period", "kick period T, needed for order 2"},
    {"spectral.rule", "--rule", "degenerate edge states: solver | permutation | u0 (default permutation)"},
    {"classical.family", "--family", "fixed-point family for bifurcation: cfp-i | cfp-ii"},
    {"integration.dt", "--dt", "RK4 step (default 1e-3)"},
    {"integration.t_max", "--t-max", "integration horizon (default 200)"},
    {"integration.stride", "--stride", "store every n-th step (default 100)"},
    {"integration.repr", "--repr", "trajectory output: cartesian | canonical (default canonical)"},
    {"integration.s0", "--s0", "initial state Z1,phi1,Z2,phi2 (default 0.5,0.3,-0.2,2.0)"},
    {"portrait.n_traj", "--n-traj", "portrait ensemble size (default 20)"},
    {"portrait.seed", "--seed", "portrait seed (default 1)"},
    {"floquet.periods", "--periods", "descending periods (default 0.2,0.1,0.05,0.025)"},
    {"run.threads", "--threads", "worker threads, 0 = auto (default 0)"},
};

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"spectrum", "eigenvalues of the effective Hamiltonian at one coupling"},
    {"entangle-sweep", "edge-state entanglement over a coupling grid"},
    {"energy-sweep", "edge energies per spin with classical overlays over a coupling grid"},
    {"classify", "symmetry report (U0, chirality, time reversal, class)"},
    {"fixed-points", "classical fixed points with Jacobian stability"},
    {"bifurcation", "critical coupling of CFP-I or CFP-II"},
    {"trajectory", "one RK4 trajectory"},
    {"portrait", "seeded ensemble projected on (phi1, Z1)"},
    {"floquet-check", "effective Hamiltonian against the exact Floquet operator"},
    {"qpt-report", "critical couplings, entanglement peaks and class in one summary"},
};

/// Merged settings: config file first, then flags.
class Settings {
 public:
  explicit Settings(std::map<std::string, std::string> v) : v_(std::move(v)) {}

  bool has(const std::string& k) const { return v_.count(k) > 0; }
  std::string str(const std::string& k, const std::string& def) const {
    auto it = v_.find(k);
    return it == v_.end() ? def : it->second;
  }
  double num(const std::string& k, double def) const {
    return has(k) ? parse_double(v_.at(k), k) : def;
  }
  long integer(const std::string& k, long def) const {
    if (!has(k)) return def;
    const double d = num(k, 0.0);
    if (d != std::floor(d) || std::abs(d) > 1e15) throw ConfigError(k + ": expected an integer");
    return static_cast<long>(d);
  }
  const std::map<std::string, std::string>& all() const { return v_; }

 private:
  std::map<std::string, std::string> v_;
};

struct Context {
  std::string command;
  Settings settings;
  std::filesystem::path out_dir;
  ModelParams model;
  Preset preset = Preset::fp;
  unsigned threads = 0;
  Manifest manifest;
};

ModelParams build_model(const Settings& s, Preset& preset) {
  preset = parse_preset(s.str("model.preset", "fp"));
  ModelParams p = preset_model(preset);
  try {
    p.j = SpinMagnitude::from_value(s.num("model.j", 10.0));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  p.omega1 = s.num("model.omega1", p.omega1);
  p.omega2 = s.num("model.omega2", p.omega2);
  p.kappa1 = s.num("model.kappa1", p.kappa1);
  p.kappa2 = s.num("model.kappa2", p.kappa2);
  return p;
}

std::string describe_grid(const std::vector<double>& g) {
  if (g.size() == 1) return format_double(g[0]);
  return format_double(g.front()) + ":" + format_double(g.back()) + " (" +
         std::to_string(g.size()) + " points)";
}

std::vector<double> grid(Context& c, const std::string& def) {
  const std::string text = c.settings.str("grid.eps", def);
  auto g = parse_range(text, "eps");
  c.manifest.emplace_back("grid.eps", text);
  c.manifest.emplace_back("grid.points", std::to_string(g.size()));
  return g;
}

double single_eps(Context& c, double def) {
  const auto g = parse_range(c.settings.str("grid.eps", format_double(def)), "eps");
  if (g.size() != 1) throw ConfigError(c.command + " takes a single --eps value, not a range");
  c.manifest.emplace_back("epsilon", format_double(g[0]));
  return g[0];
}

std::filesystem::path out_file(const Context& c, const std::string& ext) {
  return c.out_dir / (c.command + ext);
}

void save(const Context& c, const std::string& ext, const std::string& text) {
  write_text_file(out_file(c, ext).string(), text);
}

void finish(Context& c) {
  std::ostringstream os;
  write_manifest(os, c.manifest);
  save(c, ".manifest", os.str());
}

DegeneracyRule rule(Context& c) {
  const std::string r = c.settings.str("spectral.rule", "permutation");
  c.manifest.emplace_back("spectral.rule", r);
  try {
    return parse_degeneracy_rule(r);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// --- commands ---------------------------------------------------------------

int cmd_spectrum(Context& c) {
  const double eps = single_eps(c, 1.0);
  const long order = c.settings.integer("spectrum.order", 1);
  const ModelParams p = c.model.with_epsilon(eps);
  ComplexMatrix h;
  if (order == 2) {
    if (!c.settings.has("spectrum.period")) throw ConfigError("order 2 needs --period");
    const double t = c.settings.num("spectrum.period", 0.0);
    c.manifest.emplace_back("spectrum.period", format_double(t));
    h = effective_hamiltonian(KickedParams{p, t}, 2);
  } else if (order == 1) {
    h = effective_hamiltonian(p);
  } else {
    throw ConfigError("--order must be 1 or 2");
  }
  c.manifest.emplace_back("spectrum.order", std::to_string(order));
  const RealVector e = eigvalsh(h);
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"index", "energy", "energy_per_j"});
  for (Index i = 0; i < e.size(); ++i) {
    w.row({static_cast<double>(i), e(i), e(i) / p.j.value()});
  }
  save(c, ".csv", os.str());
  std::cout << "dimension = " << e.size() << "\n"
            << "e_ground = " << format_double(e(0)) << "\n"
            << "e_excited = " << format_double(e(e.size() - 1)) << "\n";
  return 0;
}

int cmd_sweep(Context& c, bool energies) {
  const auto g = grid(c, "0:3:0.05");
  SweepOptions o;
  o.rule = rule(c);
  o.threads = c.threads;
  const auto rows = energies ? sweep_edge_energies(c.model, g, o) : sweep_entanglement(c.model, g, o);
  std::ostringstream os;
  write_sweep_csv(os, rows);
  save(c, ".csv", os.str());
  const Peak pg = find_peak(rows, [](const SweepRecord& r) { return r.sv_ground; });
  const Peak pe = find_peak(rows, [](const SweepRecord& r) { return r.sv_excited; });
  std::cout << "rows = " << rows.size() << "\n"
            << "sv_ground_peak = " << format_double(pg.value) << " at eps = "
            << format_double(pg.epsilon) << "\n"
            << "sv_excited_peak = " << format_double(pe.value) << " at eps = "
            << format_double(pe.epsilon) << "\n"
            << "csv = " << out_file(c, ".csv").string() << "\n";
  return 0;
}

int cmd_classify(Context& c, bool json) {
  const double eps = single_eps(c, 1.0);
  const ModelParams p = c.model.with_epsilon(eps);
  const SymmetryReport r = classify(effective_hamiltonian(p), p.j, p.omegas_equal());
  const std::string text = std::string("class: ") + to_string(r.class_label) + "\n" + r.to_key_value();
  std::cout << text;
  save(c, ".txt", text);
  if (json) save(c, ".json", r.to_json().dump(2) + "\n");
  return 0;
}

int cmd_fixed_points(Context& c) {
  const double eps = single_eps(c, 2.0);
  const FixedPointSet fps = fixed_points(c.model.with_epsilon(eps));
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"family", "z1", "phi1", "z2", "phi2", "energy", "max_real_part", "stable", "residual",
            "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im", "lambda3_re", "lambda3_im",
            "lambda4_re", "lambda4_im"});
  for (const auto& r : fps.records) {
    std::vector<std::string> cells = {to_string(r.family),     format_double(r.state.z1),
                                      format_double(r.state.phi1), format_double(r.state.z2),
                                      format_double(r.state.phi2), format_double(r.energy),
                                      format_double(r.max_real_part), r.stable ? "1" : "0",
                                      format_double(r.residual)};
    for (const auto& l : r.jacobian_eigenvalues) {
      cells.push_back(format_double(l.real()));
      cells.push_back(format_double(l.imag()));
    }
    w.row_strings(cells);
    std::cout << to_string(r.family) << ": z1 = " << format_double(r.state.z1)
              << ", z2 = " << format_double(r.state.z2) << ", energy = " << format_double(r.energy)
              << ", " << (r.stable ? "stable" : "unstable") << "\n";
  }
  for (const auto& m : fps.missing) std::cout << to_string(m.family) << ": not found (" << m.reason << ")\n";
  save(c, ".csv", os.str());
  return 0;
}

int cmd_bifurcation(Context& c) {
  const std::string fam = c.settings.str("classical.family", "cfp-i");
  Family f;
  try {
    f = parse_family(fam);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (f != Family::cfp1 && f != Family::cfp2) throw ConfigError("--family must be cfp-i or cfp-ii");
  c.manifest.emplace_back("classical.family", to_string(f));
  const auto g = grid(c, "0:5:0.01");
  const double step = g.size() > 1 ? g[1] - g[0] : 1.0;
  const BifurcationResult r = bifurcation_scan(c.model, f, g.front(), g.back(), step);
  std::ostringstream os;
  os << "family = " << to_string(f) << "\n" << "found = " << (r.found ? "true" : "false") << "\n";
  if (r.found) {
    char line[96];
    std::snprintf(line, sizeof line, "eps_c = %.6f \xC2\xB1 %.6f\n", r.eps_c,
                  std::max(kBifurcationTolerance, 0.5 * (r.bracket_hi - r.bracket_lo)));
    os << line << "bracket_lo = " << format_double(r.bracket_lo) << "\n"
       << "bracket_hi = " << format_double(r.bracket_hi) << "\n";
  } else {
    os << "eps_c = not found in " << describe_grid(g) << "\n";
  }
  std::cout << os.str();
  save(c, ".txt", os.str());
  return 0;
}

CanonicalState initial_state(Context& c) {
  const std::string text = c.settings.str("integration.s0", "0.5,0.3,-0.2,2.0");
  const auto v = parse_list(text, "s0");
  if (v.size() != 4) throw ConfigError("s0: expected Z1,phi1,Z2,phi2");
  if (std::abs(v[0]) > 1.0 || std::abs(v[2]) > 1.0) throw ConfigError("s0: |Z| must be <= 1");
  c.manifest.emplace_back("integration.s0", text);
  return {v[0], v[1], v[2], v[3]};
}

struct Integration {
  double dt;
  double t_max;
  long steps;
  long stride;
};

Integration integration(Context& c) {
  Integration in;
  in.dt = c.settings.num("integration.dt", 1e-3);
  in.t_max = c.settings.num("integration.t_max", 200.0);
  in.stride = c.settings.integer("integration.stride", 100);
  if (!(in.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(in.t_max >= 0.0)) throw ConfigError("t-max must be >= 0");
  if (in.stride < 1) throw ConfigError("stride must be >= 1");
  in.steps = std::lround(in.t_max / in.dt);
  c.manifest.emplace_back("integration.dt", format_double(in.dt));
  c.manifest.emplace_back("integration.t_max", format_double(in.t_max));
  c.manifest.emplace_back("integration.stride", std::to_string(in.stride));
  return in;
}

int cmd_trajectory(Context& c) {
  const double eps = single_eps(c, 1.3);
  const CanonicalState s0 = initial_state(c);
  const Integration in = integration(c);
  const std::string repr = c.settings.str("integration.repr", "canonical");
  if (repr != "canonical" && repr != "cartesian") throw ConfigError("--repr must be cartesian or canonical");
  c.manifest.emplace_back("integration.repr", repr);
  const Trajectory tr =
      integrate_rk4(to_cartesian(s0), c.model.with_epsilon(eps), in.dt, in.steps, in.stride);
  std::ostringstream os;
  CsvWriter w(os);
  if (repr == "cartesian") {
    w.header({"t", "top", "X", "Y", "Z", "phi"});
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const auto& s = tr.cartesian[i];
      const auto& q = tr.canonical[i];
      w.row({tr.times[i], 1.0, s.x1, s.y1, s.z1, q.phi1});
      w.row({tr.times[i], 2.0, s.x2, s.y2, s.z2, q.phi2});
    }
  } else {
    w.header({"t", "Z1", "phi1", "Z2", "phi2"});
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const auto& q = tr.canonical[i];
      w.row({tr.times[i], q.z1, q.phi1, q.z2, q.phi2});
    }
  }
  save(c, ".csv", os.str());
  std::cout << "samples = " << tr.times.size() << "\n"
            << "max_energy_drift = " << format_double(tr.max_energy_drift) << "\n"
            << "max_norm_drift = " << format_double(tr.max_norm_drift) << "\n";
  return 0;
}

int cmd_portrait(Context& c) {
  const double eps = single_eps(c, 1.3);
  const Integration in = integration(c);
  PortraitOptions o;
  o.dt = in.dt;
  o.t_max = in.t_max;
  o.stride = in.stride;
  o.threads = c.threads;
  o.n_traj = static_cast<int>(c.settings.integer("portrait.n_traj", 20));
  const long seed = c.settings.integer("portrait.seed", 1);
  if (seed < 0) throw ConfigError("seed must be >= 0");
  if (o.n_traj < 1) throw ConfigError("n-traj must be >= 1");
  o.seed = static_cast<std::uint64_t>(seed);
  c.manifest.emplace_back("portrait.n_traj", std::to_string(o.n_traj));
  c.manifest.emplace_back("portrait.seed", std::to_string(o.seed));
  c.manifest.emplace_back("portrait.rng", "mmix-lcg64");
  const auto pts = phase_portrait(c.model.with_epsilon(eps), o);
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"trajectory", "t", "phi1", "Z1"});
  for (const auto& p : pts) w.row({static_cast<double>(p.trajectory), p.t, p.phi1, p.z1});
  save(c, ".csv", os.str());
  std::cout << "points = " << pts.size() << "\n";
  return 0;
}

int cmd_floquet(Context& c) {
  const double eps = single_eps(c, 1.0);
  const std::string text = c.settings.str("floquet.periods", "0.2,0.1,0.05,0.025");
  const auto periods = parse_list(text, "periods");
  c.manifest.emplace_back("floquet.periods", text);
  const auto rows = floquet_convergence(c.model.with_epsilon(eps), periods);
  std::ostringstream os;
  write_floquet_csv(os, rows);
  save(c, ".csv", os.str());
  std::cout << os.str();
  return 0;
}

int cmd_qpt(Context& c) {
  const auto g = grid(c, "0:3:0.05");
  SweepOptions o;
  o.rule = rule(c);
  o.threads = c.threads;
  const QptReport r = qpt_report(c.model, g, o);
  auto eps_c = [](const BifurcationResult& b) {
    return b.found ? format_double(b.eps_c) : std::string("not-found");
  };
  std::ostringstream os;
  os << "model = " << to_string(c.preset) << "\n"
     << "eps_c_cfp1 = " << eps_c(r.cfp1) << "\n"
     << "eps_c_cfp2 = " << eps_c(r.cfp2) << "\n"
     << "cfp4_onset = " << format_double(r.cfp4_onset) << "\n"
     << "ground_peak_eps = " << format_double(r.ground_peak.epsilon) << "\n"
     << "ground_peak_sv = " << format_double(r.ground_peak.value) << "\n"
     << "excited_peak_eps = " << format_double(r.excited_peak.epsilon) << "\n"
     << "excited_peak_sv = " << format_double(r.excited_peak.value) << "\n"
     << "grid_step = " << format_double(r.grid_step) << "\n"
     << "coincident = " << (r.coincident ? "true" : "false") << "\n"
     << "class_at_eps_1 = " << to_string(r.symmetry.class_label) << "\n";
  std::cout << os.str();
  save(c, ".txt", os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled kicked-top effective-Hamiltonian lab"};
  app.set_version_flag("--version", CKT_VERSION_STRING);
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.footer("Settings can also come from an INI file (--config); flags take precedence.\n"
             "Outputs go to $CKT_OUTPUT_DIR (default ./out).");

  std::string config_path;
  bool json = false;
  app.add_option("--config", config_path, "INI file with [section] key = value settings");
  app.add_flag("--json", json, "classify: also write a JSON report");
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  for (const auto& s : kSettings) {
    flag_options[s.key] = app.add_option(s.flag, flag_values[s.key], std::string(s.help) + " [" + s.key + "]");
  }
  for (const auto& [name, help] : kCommands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    std::map<std::string, std::string> merged;
    if (!config_path.empty()) {
      for (auto& [k, v] : load_ini(config_path)) {
        if (!flag_options.count(k)) throw ConfigError(config_path + ": unknown key '" + k + "'");
        merged[k] = v;
      }
    }
    for (const auto& [k, opt] : flag_options) {
      if (opt->count() > 0) merged[k] = flag_values[k];
    }

    const char* env = std::getenv("CKT_OUTPUT_DIR");
    Context c{command, Settings(merged), env && *env ? env : "out", {}, Preset::fp, 0, {}};
    c.model = build_model(c.settings, c.preset);
    const long threads = c.settings.integer("run.threads", 0);
    if (threads < 0) throw ConfigError("threads must be >= 0");
    c.threads = static_cast<unsigned>(threads);
    std::filesystem::create_directories(c.out_dir);

    c.manifest = {{"command", command},
                  {"version", CKT_VERSION_STRING},
                  {"config", config_path.empty() ? "none" : config_path},
                  {"model.preset", to_string(c.preset)},
                  {"model.j", format_double(c.model.j.value())},
                  {"model.omega1", format_double(c.model.omega1)},
                  {"model.omega2", format_double(c.model.omega2)},
                  {"model.kappa1", format_double(c.model.kappa1)},
                  {"model.kappa2", format_double(c.model.kappa2)},
                  {"run.threads", std::to_string(c.threads)}};

    int rc = 0;
    if (command == "spectrum") rc = cmd_spectrum(c);
    else if (command == "entangle-sweep") rc = cmd_sweep(c, false);
    else if (command == "energy-sweep") rc = cmd_sweep(c, true);
    else if (command == "classify") rc = cmd_classify(c, json);
    else if (command == "fixed-points") rc = cmd_fixed_points(c);
    else if (command == "bifurcation") rc = cmd_bifurcation(c);
    else if (command == "trajectory") rc = cmd_trajectory(c);
    else if (command == "portrait") rc = cmd_portrait(c);
    else if (command == "floquet-check") rc = cmd_floquet(c);
    else if (command == "qpt-report") rc = cmd_qpt(c);
    if (rc == 0) finish(c);
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "ckt " << command << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ckt " << command << ": " << e.what() << "\n";
    return 1;
  }
}
