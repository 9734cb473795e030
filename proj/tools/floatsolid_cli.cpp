// Batch entry point: spectrum, resolvent-check, simulate, lqr and verify.
//
// Exit codes: 0 success, 1 verification failure, 2 numerical or configuration
// failure, 3 incompatible initial data.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "floatsolid/config.hpp"
#include "floatsolid/discretization.hpp"
#include "floatsolid/dynamics.hpp"
#include "floatsolid/io.hpp"
#include "floatsolid/lqr.hpp"
#include "floatsolid/spectral.hpp"
#include "floatsolid/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace floatsolid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCompatibility = 3;

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
};

Config load(const GlobalOptions& g) {
  Config c = g.config_path.empty() ? Config{} : load_config(g.config_path);
  if (g.seed) c.seed = *g.seed;
  validate(c);
  return c;
}

void add_spectrum_rows(io::CsvTable& t, const VectorXcd& eig, const PhysicalParams& p,
                       const spectral::SingularSet& s, const std::string& source) {
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    t.add_row({io::format_double(eig(i).real()), io::format_double(eig(i).imag()),
               io::format_double(spectral::spectrum_distance(eig(i), p, s)), source});
  }
}

int cmd_spectrum(const GlobalOptions& g) {
  const Config c = load(g);
  const Grid grid = c.make_grid();
  const PhysicalParams p = c.physical();
  const spectral::SingularSet s = spectral::singular_set(p);
  const VectorXcd eig_off = linalg::eigenvalues(assemble(grid.without_sponge()).A);
  const VectorXcd eig_on = linalg::eigenvalues(assemble(grid).A);

  io::CsvTable t{{"re", "im", "dist_to_E", "source"}, {}};
  for (std::size_t i = 0; i < s.roots.size(); ++i) {
    t.add_row({io::format_double(s.roots[i].real()), io::format_double(s.roots[i].imag()), "0",
               "singular_set"});
  }
  add_spectrum_rows(t, eig_off, p, s, "A_h_sponge_off");
  add_spectrum_rows(t, eig_on, p, s, "A_h_sponge_on");
  io::write_text(fs::path(g.out_dir) / "spectrum.csv", t.str());

  ordered_json j;
  j["config"] = to_json(c);
  j["dimension"] = eig_off.size();
  j["singular_set_size"] = s.roots.size();
  j["spurious_quartic_roots"] = s.spurious.size();
  j["max_real_part_sponge_off"] = eig_off.real().maxCoeff();
  j["max_real_part_sponge_on"] = eig_on.real().maxCoeff();
  io::write_text(fs::path(g.out_dir) / "spectrum.json", j.dump(2) + "\n");
  std::cout << "spectrum: " << eig_off.size() << " eigenvalues per operator, max Re (sponge off) "
            << eig_off.real().maxCoeff() << "\n";
  return kExitOk;
}

int run_suites(const GlobalOptions& g, const std::vector<std::string>& suites,
               bool inject_fault, const std::string& label) {
  const Config c = load(g);
  VerifyOptions options;
  options.only = suites;
  options.inject_fault = inject_fault;
  const VerifyReport report = run_verify(c, options);
  write_reports(report, g.out_dir);
  for (const auto& s : report.suites) {
    std::cout << (s.pass ? "PASS " : "FAIL ") << s.name << ": " << s.summary << "\n";
  }
  if (const SuiteResult* failed = report.first_failure()) {
    std::cerr << label << " failed: first failing suite is '" << failed->name << "'\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

struct ScenarioOptions {
  std::string preset;
  std::string controller;
  std::optional<double> alpha;
  std::optional<double> T;
};

Config apply_scenario(Config c, const ScenarioOptions& s) {
  if (!s.preset.empty()) c.initial.name = s.preset;
  if (!s.controller.empty()) c.controller.type = s.controller;
  if (s.alpha) c.controller.alpha = *s.alpha;
  validate(c);
  return c;
}

CareOptions care_options(const Config& c) {
  CareOptions o;
  o.method = c.lqr.method;
  o.tol = c.lqr.tol;
  o.alpha0 = c.lqr.alpha0;
  return o;
}

int cmd_simulate(const GlobalOptions& g, const ScenarioOptions& s) {
  const Config c = apply_scenario(load(g), s);
  const Grid grid = c.make_grid();
  const SemiDiscreteSystem sys = assemble(grid);
  const VectorXd z0 = flatten(make_initial_state(grid, c.initial));

  Control control = OpenLoop{};
  if (c.controller.type == "alpha") {
    control = Feedback{c.controller.alpha * sys.C};
  } else if (c.controller.type == "optimal") {
    control = Feedback{Eigen::RowVectorXd(care_solve(sys, care_options(c)).gain.row(0))};
  }
  SimulationOptions sim;
  sim.T = s.T.value_or(c.time.T_max);
  sim.dt = c.time.dt;
  sim.scheme = c.time.scheme;
  sim.store_states = false;
  sim.record_rates = true;
  const Trajectory tr = simulate(sys, z0, control, sim);
  io::write_text(fs::path(g.out_dir) / "trajectory.csv", io::trajectory_csv(tr).str());

  const EnergyBalanceReport e = energy_balance_report(tr, sys);
  ordered_json j;
  j["config"] = to_json(c);
  j["horizon"] = tr.times.back();
  j["steps"] = tr.size() - 1;
  j["E0"] = tr.energies.front();
  j["E_end"] = tr.energies.back();
  j["max_defect"] = e.max_defect;
  j["max_midpoint_defect"] = e.max_midpoint_defect;
  j["max_relative_increase"] = e.max_relative_increase;
  j["max_sponge_sink"] = e.max_sponge_sink;
  j["energy_nonincreasing"] = e.monotone;
  try {
    const CostReport cr = cost(tr);
    j["cost"] = {{"J", cr.J}, {"u_part", cr.u_part}, {"y_part", cr.y_part},
                 {"horizon", cr.horizon}, {"tail_estimate", cr.tail_estimate},
                 {"decay_rate", cr.decay_rate}};
  } catch (const NonDecayingTail& ex) {
    j["cost"] = {{"error", ex.what()}};
  }
  io::write_text(fs::path(g.out_dir) / "energy_balance.json", j.dump(2) + "\n");
  std::cout << "simulate: " << tr.size() - 1 << " steps, E " << tr.energies.front() << " -> "
            << tr.energies.back() << "\n";
  return kExitOk;
}

int cmd_lqr(const GlobalOptions& g, const ScenarioOptions& s) {
  const Config c = apply_scenario(load(g), s);
  const Grid grid = c.make_grid();
  const SemiDiscreteSystem sys = assemble(grid);
  const VectorXd z0 = flatten(make_initial_state(grid, c.initial));
  const RiccatiSolution sol = care_solve(sys, care_options(c));
  const fs::path out(g.out_dir);
  io::write_matrix(out / "riccati.bin", sol.P);

  io::CsvTable gains{{"index", "gain"}, {}};
  for (Eigen::Index i = 0; i < sol.gain.cols(); ++i) {
    gains.add_row({std::to_string(i), io::format_double(sol.gain(0, i))});
  }
  io::write_text(out / "gains.csv", gains.str());

  SimulationOptions sim;
  sim.T = s.T.value_or(c.time.T_max);
  sim.dt = c.time.dt;
  sim.scheme = c.time.scheme;
  sim.decay_tol = 1e-12;
  const ComparisonTable table =
      compare_feedbacks(sys, z0, {0.25, 0.5, 1.0, 2.0, 4.0}, sol, sim);
  io::CsvTable compare{{"controller", "alpha", "J", "predicted", "relative_gap", "horizon"}, {}};
  for (const ComparisonRow& row : table.rows) {
    compare.add_row({row.controller, io::format_double(row.alpha), io::format_double(row.J),
                     io::format_double(row.predicted), io::format_double(row.relative_gap),
                     io::format_double(row.horizon)});
  }
  io::write_text(out / "compare.csv", compare.str());

  ordered_json j;
  j["config"] = to_json(c);
  j["method"] = to_string(sol.method);
  j["dimension"] = sys.dimension();
  j["residual"] = sol.residual;
  j["iterations"] = sol.iterations;
  j["min_eigenvalue"] = sol.min_eigenvalue;
  j["loewner_monotone"] = sol.loewner_monotone;
  j["closed_loop_abscissa_controllable_part"] = sol.closed_loop_abscissa;
  j["optimal_is_min"] = table.optimal_is_min;
  io::write_text(out / "riccati.json", j.dump(2) + "\n");
  std::cout << "lqr: residual " << sol.residual << ", J(optimal) " << table.rows.front().J
            << ", predicted " << table.rows.front().predicted << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floating solid in viscous shallow water: spectra, resolvent, LQR"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for randomized checks (overrides the config)");

  auto* spectrum = app.add_subcommand("spectrum", "Singular set and spectra of A_h");
  auto* resolvent = app.add_subcommand("resolvent-check", "Half-line and resolvent checks");

  ScenarioOptions scenario;
  auto add_scenario = [&scenario](CLI::App* sub) {
    sub->add_option("--preset", scenario.preset, "Initial data: rest, heave, bump or flow");
    sub->add_option("--controller", scenario.controller, "none, alpha or optimal");
    sub->add_option("--alpha", scenario.alpha, "Gain of the feedback u = -alpha Hdot");
    sub->add_option("--T", scenario.T, "Horizon (defaults to time.T_max)");
  };
  auto* simulate_cmd = app.add_subcommand("simulate", "Time integration with energy balance");
  add_scenario(simulate_cmd);
  auto* lqr = app.add_subcommand("lqr", "Riccati solution and feedback comparison");
  add_scenario(lqr);

  auto* verify = app.add_subcommand("verify", "Run the property suites");
  bool inject_fault = false;
  std::vector<std::string> suites;
  verify->add_flag("--inject-fault", inject_fault, "Corrupt M^{-1} to exercise the failure path");
  verify->add_option("--suite", suites, "Run only the named suite (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) return cmd_spectrum(g);
    if (resolvent->parsed()) {
      return run_suites(g, {"halfline_bounds", "halfline_oracle", "resolvent_consistency"}, false,
                        "resolvent-check");
    }
    if (simulate_cmd->parsed()) return cmd_simulate(g, scenario);
    if (lqr->parsed()) return cmd_lqr(g, scenario);
    if (verify->parsed()) return run_suites(g, suites, inject_fault, "verify");
  } catch (const CompatibilityViolation& e) {
    std::cerr << "incompatible initial data: " << e.what() << "\n";
    return kExitCompatibility;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
