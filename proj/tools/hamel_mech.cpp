// Batch front-end: load a model config, run a simulation / phase
// analysis / coefficient scan, and emit machine-readable results.
//
// Exit status: 0 success, 2 config error, 3 numerical failure.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "hamel/config.hpp"
#include "hamel/quasi_velocity.hpp"

namespace fs = std::filesystem;
using namespace hamel;

namespace {

bool log_enabled() {
  const char* v = std::getenv("HAMEL_MECH_LOG");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

void log_line(const std::string& msg) {
  if (log_enabled()) std::cerr << "# " << msg << "\n";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  log_line("wrote " + path.string());
}

double constraint_residual(const RunConfig& rc, const BundleState& s) {
  const MechanicalSystem& sys = rc.model.system;
  switch (rc.formulation) {
    case Formulation::Constrained: {
      const VecX u = s.xi.coords + rc.model.connection->eval(s.r) * s.rdot;
      return u.cwiseAbs().maxCoeff();
    }
    case Formulation::MomentumConserved:
      return fiber_momentum(sys, s.r, s.xi, s.rdot).norm();
    default:
      return 0.0;
  }
}

std::string trajectory_csv(const RunConfig& rc, const Trajectory& traj) {
  const MechanicalSystem& sys = rc.model.system;
  const int m = sys.m_bar();
  const int d = sys.delta_bar;

  std::string csv = "t";
  for (int i = 0; i < 12; ++i) csv += ",g" + std::to_string(i);
  for (int i = 0; i < m; ++i) csv += ",xi" + std::to_string(i);
  for (int i = 0; i < d; ++i) csv += ",r" + std::to_string(i);
  for (int i = 0; i < d; ++i) csv += ",rdot" + std::to_string(i);
  csv += ",energy,momentum_norm,constraint_residual\n";

  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const BundleState& s = traj.states[k];
    csv += fmt(traj.times[k]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) csv += "," + fmt(s.g.rotation(i, j));
    for (int i = 0; i < 3; ++i) csv += "," + fmt(s.g.translation[i]);
    for (int i = 0; i < m; ++i) csv += "," + fmt(s.xi.coords[i]);
    for (int i = 0; i < d; ++i) csv += "," + fmt(s.r[i]);
    for (int i = 0; i < d; ++i) csv += "," + fmt(s.rdot[i]);
    csv += "," + fmt(total_energy(sys, s));
    csv += "," + fmt(spatial_momentum(sys, s).norm());
    csv += "," + fmt(constraint_residual(rc, s));
    csv += "\n";
  }
  return csv;
}

Json diagnostics_json(const RunConfig& rc, const Trajectory& traj) {
  const MechanicalSystem& sys = rc.model.system;
  const double e0 = total_energy(sys, traj.states.front());
  const VecX p0 = spatial_momentum(sys, traj.states.front());
  double e_drift = 0.0, p_drift = 0.0, c_max = 0.0;
  for (const auto& s : traj.states) {
    e_drift = std::max(e_drift, std::abs(total_energy(sys, s) - e0));
    p_drift = std::max(p_drift, (spatial_momentum(sys, s) - p0).norm());
    c_max = std::max(c_max, constraint_residual(rc, s));
  }
  Json d;
  d["model"] = rc.model.name;
  d["formulation"] = to_string(rc.formulation);
  d["samples"] = traj.states.size();
  d["rebase_events"] = traj.rebase_events.size();
  d["energy_initial"] = e0;
  d["energy_drift_rel_max"] = e_drift / std::max(std::abs(e0), 1e-300);
  d["momentum_drift_max"] = p_drift;
  d["constraint_residual_max"] = c_max;
  return d;
}

int run_simulate_one(const std::string& config_path, const fs::path& out_dir,
                     double dt_override, double t_end_override) {
  RunConfig rc = parse_run_config(load_json_file(config_path));
  if (!std::isnan(dt_override)) {
    if (!(dt_override > 0.0)) throw ConfigError("--dt", "dt must be positive");
    rc.dt = dt_override;
  }
  if (!std::isnan(t_end_override)) {
    if (t_end_override < 0.0)
      throw ConfigError("--t-end", "t_end must be non-negative");
    rc.t_end = t_end_override;
  }
  log_line("model " + rc.model.name + ", formulation " +
           to_string(rc.formulation));

  const LocalConnection* kin =
      rc.model.connection ? &*rc.model.connection : nullptr;
  if (rc.formulation == Formulation::Constrained && !kin)
    throw ConfigError("run.formulation",
                      "constrained run needs a model with a connection");

  const Trajectory traj = integrate(rc.model.system, rc.formulation,
                                    rc.initial, rc.t_end, rc.dt, kin);
  fs::create_directories(out_dir);
  write_file(out_dir / "trajectory.csv", trajectory_csv(rc, traj));
  write_file(out_dir / "diagnostics.json",
             diagnostics_json(rc, traj).dump(2) + "\n");
  return 0;
}

std::string phase_report(const RunConfig& rc, const PhaseResult& phases,
                         bool with_momentum) {
  std::string out = "phase-report\n";
  out += "model " + rc.model.name + "\n";
  out += "group " + std::string(to_string(rc.model.system.tag)) + "\n";
  out += "trivialization " +
         std::string(to_string(rc.model.system.triv)) + "\n";
  out += "period " + fmt(rc.path->period) + "\n";
  out += "cycles " + std::to_string(phases.cycle_count) + "\n";
  out += std::string("momentum ") + (with_momentum ? "on" : "off") + "\n";
  for (int k = 0; k < phases.cycle_count; ++k) {
    const GroupElement& h = phases.per_cycle[k];
    out += "cycle " + std::to_string(k + 1) + "\n";
    out += "  log";
    for (int i = 0; i < phases.per_cycle_log[k].size(); ++i)
      out += " " + fmt(phases.per_cycle_log[k][i]);
    out += "\n  rotation";
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out += " " + fmt(h.rotation(i, j));
    out += "\n  translation";
    for (int i = 0; i < 3; ++i) out += " " + fmt(h.translation[i]);
    out += "\n";
  }
  return out;
}

int run_phase(const std::string& config_path, const fs::path& out_dir,
              bool with_momentum, double dt_override) {
  RunConfig rc = parse_run_config(load_json_file(config_path));
  if (!std::isnan(dt_override)) {
    if (!(dt_override > 0.0)) throw ConfigError("--dt", "dt must be positive");
    rc.dt = dt_override;
  }
  if (!rc.path)
    throw ConfigError("path", "phase analysis needs a closed shape path");

  const double T = rc.path->period;
  if ((rc.path->eval_r(0.0) - rc.path->eval_r(T)).norm() > 1e-10)
    throw ConfigError("path", "shape path is not closed over one period");

  PhaseResult phases;
  if (!with_momentum) {
    // Zero momentum: the fiber motion is the pure connection flow.
    const LocalConnection conn =
        rc.model.connection ? *rc.model.connection
                            : mechanical_connection_form(rc.model.system);
    phases = geometric_phase(conn, *rc.path, rc.initial.g, rc.dt, rc.cycles);
  } else {
    if (rc.model.connection)
      throw ConfigError("momentum",
                        "momentum drift applies to floating-base models");
    if (rc.momentum.size() == 0)
      throw ConfigError("momentum", "missing momentum vector for --momentum");
    const Trajectory traj =
        reconstruct_with_drift(rc.model.system, rc.momentum, *rc.path,
                               rc.initial.g, rc.cycles * T, rc.dt);
    phases = phases_from_trajectory(traj, rc.model.system.triv, T);
  }

  fs::create_directories(out_dir);
  write_file(out_dir / "phase_report.txt",
             phase_report(rc, phases, with_momentum));
  return 0;
}

std::string coefficient_table(const RunConfig& rc, const Json& config) {
  const MechanicalSystem& sys = rc.model.system;
  const int d = sys.delta_bar;

  std::vector<VecX> samples;
  if (config.contains("coeffs") && config.at("coeffs").contains("samples")) {
    const Json& s = config.at("coeffs").at("samples");
    for (std::size_t i = 0; i < s.size(); ++i) {
      VecX r(d);
      for (int j = 0; j < d; ++j) r[j] = s.at(i).at(j).get<double>();
      samples.push_back(r);
    }
  } else {
    samples.push_back(VecX::Zero(d));
  }

  const LocalConnection conn = rc.model.connection
                                   ? *rc.model.connection
                                   : mechanical_connection_form(sys);

  std::string out = "coefficient-table\n";
  out += "model " + rc.model.name + "\n";
  out += "connection " +
         std::string(rc.model.connection ? "kinematic" : "mechanical") + "\n";
  for (const VecX& r : samples) {
    out += "r";
    for (int i = 0; i < d; ++i) out += " " + fmt(r[i]);
    out += "\n";
    const MatX A = conn.eval(r);
    for (int a = 0; a < A.rows(); ++a)
      for (int I = 0; I < A.cols(); ++I)
        if (A(a, I) != 0.0)
          out += "  A " + std::to_string(a + 1) + " " +
                 std::to_string(sys.m_bar() + I + 1) + " " + fmt(A(a, I)) +
                 "\n";
    const CurvatureComponents B = curvature(conn, r);
    for (int a = 0; a < B.m_bar(); ++a)
      for (int I = 0; I < d; ++I)
        for (int J = 0; J < d; ++J)
          if (B.B[a](I, J) != 0.0)
            out += "  B " + std::to_string(a + 1) + " " +
                   std::to_string(sys.m_bar() + I + 1) + " " +
                   std::to_string(sys.m_bar() + J + 1) + " " +
                   fmt(B.B[a](I, J)) + "\n";
  }
  return out;
}

std::string structure_table(const Json& config) {
  const Json& sc = config.at("coeffs").at("structure_constants");
  const GroupTag tag = [&] {
    const std::string g = sc.at("group").get<std::string>();
    if (g == "SO3") return GroupTag::SO3;
    if (g == "SE3") return GroupTag::SE3;
    if (g == "SO3xR3") return GroupTag::SO3xR3;
    throw ConfigError("coeffs.structure_constants.group", "unknown group");
  }();
  const Trivialization triv =
      sc.contains("trivialization") &&
              sc.at("trivialization").get<std::string>() == "right"
          ? Trivialization::Right
          : Trivialization::Left;
  const HamelCoefficients c = structure_constants(tag, triv);
  std::string out = "structure-constants\n";
  for (int k = 0; k < c.n(); ++k)
    for (int a = 0; a < c.n(); ++a)
      for (int b = 0; b < c.n(); ++b)
        if (c(k, a, b) != 0.0)
          out += "  c " + std::to_string(k + 1) + " " + std::to_string(a + 1) +
                 " " + std::to_string(b + 1) + " " + fmt(c(k, a, b)) + "\n";
  return out;
}

int run_coeffs(const std::string& config_path, const fs::path& out_dir) {
  const Json config = load_json_file(config_path);
  std::string table;
  if (config.contains("coeffs") &&
      config.at("coeffs").contains("structure_constants")) {
    table = structure_table(config);
  } else {
    RunConfig rc = parse_run_config(config);
    table = coefficient_table(rc, config);
  }
  fs::create_directories(out_dir);
  write_file(out_dir / "coeffs.txt", table);
  std::cout << table;
  return 0;
}

int run_check(const std::string& config_path) {
  RunConfig rc = parse_run_config(load_json_file(config_path));
  const MechanicalSystem& sys = rc.model.system;
  const int d = sys.delta_bar;
  bool all_ok = true;

  auto report = [&all_ok](bool ok, const std::string& name,
                          const std::string& detail) {
    std::cout << (ok ? "ok   " : "FAIL ") << name
              << (detail.empty() ? "" : " (" + detail + ")") << "\n";
    if (!ok) all_ok = false;
  };

  std::mt19937 rng(0x5eed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<VecX> samples;
  samples.push_back(VecX::Zero(d));
  for (int k = 0; k < 5; ++k) {
    VecX r(d);
    for (int i = 0; i < d; ++i) r[i] = u(rng);
    samples.push_back(r);
  }

  try {
    double worst = 0.0;
    for (const auto& r : samples) {
      const MatX M = mass_matrix(sys, r);
      Eigen::LLT<MatX> llt(M);
      if (llt.info() != Eigen::Success) worst = 1.0;
    }
    report(worst == 0.0, "mass-matrix-spd", "");
  } catch (const Error& e) {
    report(false, "mass-matrix-spd", e.what());
  }

  if (d > 0) {
    try {
      double worst = 0.0;
      for (const auto& r : samples) {
        const MatX A = mechanical_connection(sys, r);
        MatX T = MatX::Identity(sys.dof(), sys.dof());
        T.topRightCorner(sys.m_bar(), d) = -A;
        const MatX congruent =
            T.transpose() * mass_matrix(sys, r) * T;
        worst = std::max(worst, (congruent - locked_mass_matrix(sys, r))
                                    .cwiseAbs()
                                    .maxCoeff());
      }
      report(worst < 1e-10, "locked-decoupling", "defect " + fmt(worst));
    } catch (const Error& e) {
      report(false, "locked-decoupling", e.what());
    }

    try {
      const LocalConnection conn = rc.model.connection
                                       ? *rc.model.connection
                                       : mechanical_connection_form(sys);
      double worst = 0.0;
      for (const auto& r : samples) {
        const CurvatureComponents B = curvature(conn, r);
        for (const auto& blk : B.B)
          worst = std::max(
              worst, (blk + blk.transpose()).cwiseAbs().maxCoeff());
      }
      report(worst < 1e-10, "curvature-antisymmetry", "defect " + fmt(worst));
    } catch (const Error& e) {
      report(false, "curvature-antisymmetry", e.what());
    }
  }

  try {
    BundleState init = BundleState::make(sys);
    VecX xi(sys.m_bar());
    for (int i = 0; i < xi.size(); ++i) xi[i] = 0.2 * u(rng);
    init.xi = AlgebraVector(sys.tag, xi);
    for (int i = 0; i < d; ++i) init.rdot[i] = 0.2 * u(rng);

    Formulation form = Formulation::EulerPoincare;
    const LocalConnection* kin = nullptr;
    if (rc.model.connection) {
      form = Formulation::Constrained;
      kin = &*rc.model.connection;
    }
    const Trajectory traj = integrate(sys, form, init, 1.0, 1e-3, kin);
    const double e0 = total_energy(sys, traj.states.front());
    double drift = 0.0;
    for (const auto& s : traj.states)
      drift = std::max(drift, std::abs(total_energy(sys, s) - e0));
    const double rel = drift / std::max(1e-12, std::abs(e0));
    report(rel < 1e-8, "energy-conservation", "relative drift " + fmt(rel));
  } catch (const Error& e) {
    report(false, "energy-conservation", e.what());
  }

  return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hamel-mech: constrained and floating-base mechanics on "
               "Lie-group bundles"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string out_dir = ".";
  double dt_override = std::nan("");
  double t_end_override = std::nan("");
  bool with_momentum = false;
  int jobs = 1;

  auto* sim = app.add_subcommand("simulate", "integrate a model");
  sim->add_option("--config", configs, "config file(s)")->required();
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--dt", dt_override, "time step override (s)");
  sim->add_option("--t-end", t_end_override, "duration override (s)");
  sim->add_option("--jobs", jobs, "run configs concurrently");

  auto* phase = app.add_subcommand("phase", "per-cycle phase analysis");
  phase->add_option("--config", configs, "config file")->required();
  phase->add_option("--out", out_dir, "output directory");
  phase->add_option("--dt", dt_override, "time step override (s)");
  phase->add_flag("--momentum", with_momentum, "include the drift term");

  auto* coeffs = app.add_subcommand("coeffs", "coefficient tables");
  coeffs->add_option("--config", configs, "config file")->required();
  coeffs->add_option("--out", out_dir, "output directory");

  auto* check = app.add_subcommand("check", "run the invariant suite");
  check->add_option("--config", configs, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad usage is a config error under the exit contract
  }

  try {
    if (sim->parsed()) {
      if (configs.size() == 1)
        return run_simulate_one(configs[0], out_dir, dt_override,
                                t_end_override);
      // Batch mode: one subdirectory per config, optionally concurrent.
      std::vector<int> results(configs.size(), 0);
      std::vector<std::string> errors(configs.size());
      const int n_jobs = std::max(1, jobs);
      std::vector<std::thread> pool;
      std::atomic<std::size_t> next{0};
      for (int w = 0; w < n_jobs; ++w)
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
              const fs::path sub =
                  fs::path(out_dir) / fs::path(configs[i]).stem();
              results[i] = run_simulate_one(configs[i], sub, dt_override,
                                            t_end_override);
            } catch (const Error& e) {
              results[i] = 3;
              errors[i] = e.what();
            }
          }
        });
      for (auto& t : pool) t.join();
      int rc = 0;
      for (std::size_t i = 0; i < configs.size(); ++i) {
        if (results[i] != 0) {
          std::cerr << "error: " << configs[i] << ": " << errors[i] << "\n";
          rc = results[i];
        }
      }
      return rc;
    }
    if (phase->parsed())
      return run_phase(configs[0], out_dir, with_momentum, dt_override);
    if (coeffs->parsed()) return run_coeffs(configs[0], out_dir);
    if (check->parsed()) return run_check(configs[0]);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
