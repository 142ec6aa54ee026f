#include "cflow/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cflow/cluster_dynamics.hpp"
#include "cflow/errors.hpp"
#include "cflow/godunov.hpp"
#include "cflow/io_util.hpp"
#include "cflow/riemann_limit.hpp"
#include "cflow/rootfind.hpp"
#include "cflow/verify_suite.hpp"

namespace cflow {

namespace {

using nlohmann::json;

// --- config access -------------------------------------------------------

const json& require_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string("config: missing field '") + key + "'");
  return j[key];
}

double require_number(const json& j, const char* key) {
  const json& v = require_field(j, key);
  if (!v.is_number()) throw ConfigError(std::string("config: field '") + key + "' must be a number");
  return v.get<double>();
}

double get_number(const json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError(std::string("config: field '") + key + "' must be a number");
  return j[key].get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    throw ConfigError(std::string("config: field '") + key + "' must be an integer");
  return j[key].get<int>();
}

std::vector<double> require_number_array(const json& j, const char* key) {
  const json& v = require_field(j, key);
  if (!v.is_array() || v.empty())
    throw ConfigError(std::string("config: field '") + key + "' must be a nonempty array");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number())
      throw ConfigError(std::string("config: field '") + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

PressureLaw parse_law(const json& cfg) {
  PressureLaw law;
  if (cfg.contains("law")) {
    const json& l = cfg["law"];
    if (!l.is_object()) throw ConfigError("config: 'law' must be an object");
    law.rho_star = get_number(l, "rho_star", law.rho_star);
    law.gamma = get_number(l, "gamma", law.gamma);
  }
  return law;
}

SignedState parse_signed_state(const json& cfg, const char* key) {
  const json& s = require_field(cfg, key);
  return {require_number(s, "rho"), require_number(s, "theta")};
}

LimitState parse_limit_state(const json& cfg, const char* key) {
  const json& s = require_field(cfg, key);
  return {require_number(s, "rho"), require_number(s, "theta"), get_number(s, "pbar", 0.0)};
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// --- serialization -------------------------------------------------------

const char* family_name(WaveFamily f) { return f == WaveFamily::Minus ? "minus" : "plus"; }

const char* case_name(RiemannCase c) {
  switch (c) {
    case RiemannCase::EqualAngles: return "equal_angles";
    case RiemannCase::VacuumOpening: return "vacuum_opening";
    case RiemannCase::TwoShocks: return "two_shocks";
    default: return "mixed_shock_rarefaction";
  }
}

const char* limit_case_name(LimitCaseTag t) {
  switch (t) {
    case LimitCaseTag::UU_Contact: return "uu_contact";
    case LimitCaseTag::UU_Vacuum: return "uu_vacuum";
    case LimitCaseTag::UU_Congested: return "uu_congested";
    case LimitCaseTag::UC_ContactDecluster: return "uc_contact_decluster";
    case LimitCaseTag::UC_Vacuum: return "uc_vacuum";
    case LimitCaseTag::UC_Shock: return "uc_shock";
    case LimitCaseTag::CC_Uniform: return "cc_uniform";
    case LimitCaseTag::CC_Vacuum: return "cc_vacuum";
    default: return "cc_instant_shocks";
  }
}

const char* interface_name(InterfaceKind k) {
  switch (k) {
    case InterfaceKind::C_UC: return "C_UC";
    case InterfaceKind::UC_V: return "UC_V";
    case InterfaceKind::C_V: return "C_V";
    default: return "UC_UC";
  }
}

json wave_to_json(const Wave& w) {
  json out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ShockWave>) {
          out = {{"type", "shock"}, {"speed", v.speed}, {"family", family_name(v.family)}};
        } else if constexpr (std::is_same_v<T, RarefactionWave>) {
          out = {{"type", "rarefaction"},
                 {"speed_lo", v.speed_lo},
                 {"speed_hi", v.speed_hi},
                 {"family", family_name(v.family)}};
        } else if constexpr (std::is_same_v<T, SignContactWave>) {
          out = {{"type", "sign_contact"}, {"speed", v.speed}};
        } else {
          out = {{"type", "vacuum"}, {"speed_lo", v.speed_lo}, {"speed_hi", v.speed_hi}};
        }
      },
      w);
  return out;
}

json wave_to_json(const LimitWave& w) {
  json out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ContactWave>) {
          out = {{"type", "contact"}, {"speed", v.speed}};
        } else if constexpr (std::is_same_v<T, LimitShockWave>) {
          out = {{"type", "shock"}};
          if (v.speed) out["speed"] = *v.speed;
          else out["speed"] = nullptr;
        } else if constexpr (std::is_same_v<T, DeclusteringWave>) {
          out = {{"type", "declustering"}};
        } else {
          out = {{"type", "vacuum"}, {"speed_lo", v.speed_lo}, {"speed_hi", v.speed_hi}};
        }
      },
      w);
  return out;
}

void write_json(const std::string& path, const json& j) { atomic_write(path, j.dump(2) + "\n"); }

// --- commands ------------------------------------------------------------

std::vector<double> density_grid(const PressureLaw& law, int n) {
  if (n < 2) throw ConfigError("config: 'rho_points' must be at least 2");
  std::vector<double> grid;
  const double lo = law.rho_star / n, hi = law.rho_star * (1.0 - 1e-6);
  for (int i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * i / (n - 1));
  return grid;
}

// One wave curve through a datum, parametrized by density: integral-curve
// branch below the datum density, jump-locus branch above it.
void trace_curve(CsvBuilder& csv, const EpsState& datum, WaveFamily fam, const ScaledPressure& sp,
                 const std::vector<double>& grid) {
  const std::string shock_tag = std::string(family_name(fam)) + "_shock";
  const std::string rar_tag = std::string(family_name(fam)) + "_rarefaction";
  for (double rho : grid) {
    double theta;
    const char* tag;
    if (rho <= datum.rho) {
      theta = rarefaction_theta(datum, rho, fam, sp);
      tag = rar_tag.c_str();
      if (!(theta > kThetaEdgeTol && theta < std::numbers::pi - kThetaEdgeTol)) continue;
    } else {
      // the jump branch leaves the datum toward larger theta for the minus
      // family and smaller theta for the plus family; the outer bracket end
      // stays 1e-7 off the axis so cos(theta) never rounds to +-1
      const double lo = fam == WaveFamily::Minus ? datum.theta + 1e-12 : 1e-7;
      const double hi =
          fam == WaveFamily::Minus ? std::numbers::pi - 1e-7 : datum.theta - 1e-12;
      tag = shock_tag.c_str();
      try {
        theta = find_root(
            [&](double th) { return hugoniot_residual(datum, {rho, th}, sp); }, lo, hi);
      } catch (const NoRootError&) {
        continue;  // locus does not reach this density at this eps
      }
    }
    const auto [lam_minus, lam_plus] = eigenvalues({rho, theta}, sp);
    csv.row({csv.cell(theta), csv.cell(rho), csv.cell(lam_minus), csv.cell(lam_plus), tag});
  }
}

int cmd_curves(const json& cfg, const std::string& out, const std::string& hash) {
  const PressureLaw law = parse_law(cfg);
  validate(law);
  const SignedState left = parse_signed_state(cfg, "left");
  const SignedState right = parse_signed_state(cfg, "right");
  const std::vector<double> eps_list = require_number_array(cfg, "eps");
  const std::vector<double> grid = density_grid(law, get_int(cfg, "rho_points", 200));

  for (double eps : eps_list) {
    const ScaledPressure sp{law, eps};
    validate(sp);
    CsvBuilder csv({"theta", "rho", "lambda_minus", "lambda_plus", "branch"}, hash);
    trace_curve(csv, {left.rho, std::abs(left.theta)}, WaveFamily::Minus, sp, grid);
    trace_curve(csv, {right.rho, std::abs(right.theta)}, WaveFamily::Plus, sp, grid);
    atomic_write(join(out, "curves_eps_" + format_double(eps) + ".csv"), csv.str());
  }
  if (cfg.contains("pressure_profile") && cfg["pressure_profile"].is_boolean() &&
      cfg["pressure_profile"].get<bool>()) {
    atomic_write(join(out, "pressure_profile.csv"),
                 emit_pressure_profile(law, eps_list, density_grid(law, 400), hash));
  }
  return 0;
}

int cmd_riemann(const json& cfg, const std::string& out, const std::string& hash) {
  const PressureLaw law = parse_law(cfg);
  const ScaledPressure sp{law, require_number(cfg, "eps")};
  const SignedState left = parse_signed_state(cfg, "left");
  const SignedState right = parse_signed_state(cfg, "right");
  const RiemannSolution sol = solve(left, right, sp);
  const SolutionCheck chk = check_solution(sol);

  json doc;
  doc["case"] = case_name(sol.kind);
  doc["eps"] = sp.epsilon;
  doc["low_root"] = sol.low_root_flag;
  doc["states"] = json::array();
  for (const SignedState& s : sol.states) doc["states"].push_back({{"rho", s.rho}, {"theta", s.theta}});
  doc["waves"] = json::array();
  for (const Wave& w : sol.waves) doc["waves"].push_back(wave_to_json(w));
  doc["check"] = {{"max_rh_residual", chk.max_rh_residual},
                  {"ordered", chk.ordered},
                  {"pass", chk.pass},
                  {"waves_checked", chk.waves.size()}};
  write_json(join(out, "riemann_solution.json"), doc);

  const double xi_lo = get_number(cfg, "xi_lo", -2.0), xi_hi = get_number(cfg, "xi_hi", 2.0);
  const int points = get_int(cfg, "profile_points", 401);
  if (points < 2 || !(xi_lo < xi_hi)) throw ConfigError("config: bad profile window");
  CsvBuilder csv({"xi", "rho", "theta"}, hash);
  for (int k = 0; k < points; ++k) {
    const double xi = xi_lo + (xi_hi - xi_lo) * k / (points - 1);
    const SamplePoint pt = sample(sol, xi);
    csv.row({csv.cell(xi), csv.cell(pt.rho), pt.theta ? csv.cell(*pt.theta) : ""});
  }
  atomic_write(join(out, "riemann_profile.csv"), csv.str());
  return 0;
}

int cmd_limit(const json& cfg, const std::string& out, const std::string& hash) {
  const PressureLaw law = parse_law(cfg);
  const LimitState left = parse_limit_state(cfg, "left");
  const LimitState right = parse_limit_state(cfg, "right");
  const LimitSolution sol = solve_limit(left, right, law);

  json doc;
  doc["case"] = limit_case_name(sol.kind);
  doc["nonphysical"] = sol.nonphysical;
  doc["states"] = json::array();
  for (const LimitState& s : sol.states)
    doc["states"].push_back({{"rho", s.rho},
                             {"theta", s.theta},
                             {"pbar", s.pbar},
                             {"pbar_infinite", s.pbar_infinite}});
  doc["waves"] = json::array();
  for (const LimitWave& w : sol.waves) doc["waves"].push_back(wave_to_json(w));
  doc["interfaces"] = json::array();
  for (const InterfaceRecord& rec : interface_conditions(sol))
    doc["interfaces"].push_back({{"kind", interface_name(rec.kind)},
                                 {"speed", rec.speed},
                                 {"pressure_jump", rec.pressure_jump},
                                 {"speed_residual", rec.speed_residual},
                                 {"pressure_residual", rec.pressure_residual}});
  const RhPartialReport rh = rh_partial_check(sol);
  doc["rh_partial"] = {{"max_mass_residual", rh.max_mass_residual},
                       {"max_pressure_residual", rh.max_pressure_residual},
                       {"checked", rh.checked}};
  write_json(join(out, "limit_solution.json"), doc);

  const double xi_lo = get_number(cfg, "xi_lo", -2.0), xi_hi = get_number(cfg, "xi_hi", 2.0);
  const int points = get_int(cfg, "profile_points", 401);
  if (points < 2 || !(xi_lo < xi_hi)) throw ConfigError("config: bad profile window");
  CsvBuilder csv({"xi", "rho", "theta", "pbar"}, hash);
  for (int k = 0; k < points; ++k) {
    const double xi = xi_lo + (xi_hi - xi_lo) * k / (points - 1);
    const LimitSamplePoint pt = sample(sol, xi);
    csv.row({csv.cell(xi), csv.cell(pt.rho), pt.theta ? csv.cell(*pt.theta) : "",
             csv.cell(pt.pbar)});
  }
  atomic_write(join(out, "limit_profile.csv"), csv.str());
  return 0;
}

int cmd_collide(const json& cfg, const std::string& out, const std::string& hash) {
  const PressureLaw law = parse_law(cfg);
  const json& arr = require_field(cfg, "clusters");
  if (!arr.is_array() || arr.empty())
    throw ConfigError("config: 'clusters' must be a nonempty array");
  std::vector<Cluster> clusters;
  for (const json& c : arr)
    clusters.push_back(
        make_cluster(require_number(c, "a"), require_number(c, "b"), require_number(c, "theta")));
  const double horizon = require_number(cfg, "horizon");
  const ClusterTrajectory traj = simulate({clusters, law}, horizon);

  CsvBuilder csv({"t", "cluster", "a", "b", "theta"}, hash);
  for (const ClusterSnapshot& snap : traj.snapshots)
    for (std::size_t i = 0; i < snap.clusters.size(); ++i) {
      const Cluster& c = snap.clusters[i];
      csv.row({csv.cell(snap.t), std::to_string(i), csv.cell(c.a), csv.cell(c.b),
               csv.cell(c.theta)});
    }
  atomic_write(join(out, "collide_trajectory.csv"), csv.str());

  json events = json::array();
  for (const CollisionEvent& ev : traj.events)
    events.push_back({{"t_c", ev.t_c},
                      {"m", ev.m},
                      {"theta_tilde", ev.theta_tilde},
                      {"pi", {{"a", ev.pi.a}, {"m", ev.pi.m}, {"b", ev.pi.b}, {"peak", ev.pi.peak}}}});
  write_json(join(out, "collide_events.json"), json{{"events", events}});
  return 0;
}

int cmd_godunov(const json& cfg, const std::string& out, const std::string& hash) {
  const PressureLaw law = parse_law(cfg);
  const ScaledPressure sp{law, require_number(cfg, "eps")};
  const json& g = require_field(cfg, "grid");
  const Grid1D grid{require_number(g, "x_lo"), require_number(g, "x_hi"), get_int(g, "n", 0)};

  SimConfig sim{sp, get_number(cfg, "cfl", 0.9), require_number(cfg, "t_end"), Boundary::Outflow};
  if (cfg.contains("boundary")) {
    const json& b = cfg["boundary"];
    if (!b.is_string() || (b != "outflow" && b != "periodic"))
      throw ConfigError("config: 'boundary' must be \"outflow\" or \"periodic\"");
    if (b == "periodic") sim.boundary = Boundary::Periodic;
  }
  std::vector<double> snap_times;
  if (cfg.contains("snap_times")) snap_times = require_number_array(cfg, "snap_times");

  const json& init = require_field(cfg, "initial");
  const std::string type = require_field(init, "type").is_string()
                               ? init["type"].get<std::string>()
                               : throw ConfigError("config: 'initial.type' must be a string");
  std::function<CellState(double)> profile;
  if (type == "riemann") {
    const SignedState l = parse_signed_state(init, "left");
    const SignedState r = parse_signed_state(init, "right");
    const double split = get_number(init, "x_split", 0.0);
    profile = [=](double x) -> CellState {
      const SignedState& s = x < split ? l : r;
      return {s.rho, psi(std::cos(s.theta))};
    };
  } else if (type == "cells") {
    const std::vector<double> rho = require_number_array(init, "rho");
    const std::vector<double> theta = require_number_array(init, "theta");
    if (static_cast<int>(rho.size()) != grid.n || theta.size() != rho.size())
      throw ConfigError("config: 'initial.rho'/'initial.theta' must have length grid.n");
    profile = [rho, theta, grid](double x) -> CellState {
      int i = static_cast<int>((x - grid.x_lo) / grid.dx());
      i = std::min(std::max(i, 0), grid.n - 1);
      return {rho[i], psi(std::cos(theta[i]))};
    };
  } else {
    throw ConfigError("config: 'initial.type' must be \"riemann\" or \"cells\"");
  }

  const std::vector<GodunovSnapshot> snaps = run(sim, profile, grid, snap_times);
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    CsvBuilder csv({"t", "x_center", "rho", "theta", "eps_pressure"}, hash);
    for (int i = 0; i < grid.n; ++i) {
      const CellState& c = snaps[k].cells[i];
      csv.row({csv.cell(snaps[k].t), csv.cell(grid.center(i)), csv.cell(c.rho),
               csv.cell(cell_theta(c)), csv.cell(p(sp, c.rho))});
    }
    char name[32];
    std::snprintf(name, sizeof(name), "godunov_%03zu.csv", k);
    atomic_write(join(out, name), csv.str());
  }
  return 0;
}

int cmd_convergence(const json& cfg, const std::string& out, const std::string& hash) {
  const PressureLaw law = parse_law(cfg);
  const LimitState left = parse_limit_state(cfg, "left");
  const LimitState right = parse_limit_state(cfg, "right");
  std::vector<double> eps_grid;
  if (cfg.contains("eps_grid")) {
    eps_grid = require_number_array(cfg, "eps_grid");
  } else {
    for (int k = 2; k <= 10; ++k) eps_grid.push_back(std::pow(10.0, -k));
  }
  const double xi_lo = get_number(cfg, "xi_lo", -2.0), xi_hi = get_number(cfg, "xi_hi", 2.0);
  const ConvergenceReport rep = converge_from_eps(left, right, law, eps_grid, xi_lo, xi_hi);

  CsvBuilder csv({"eps", "l1_rho", "rho_gap", "theta_gap", "eps_p_mid", "has_mid"}, hash);
  for (const ConvergencePoint& pt : rep.points)
    csv.row({csv.cell(pt.eps), csv.cell(pt.l1_rho), pt.has_mid ? csv.cell(pt.rho_gap) : "",
             pt.has_mid ? csv.cell(pt.theta_gap) : "", pt.has_mid ? csv.cell(pt.eps_p_mid) : "",
             pt.has_mid ? "1" : "0"});
  atomic_write(join(out, "convergence.csv"), csv.str());

  json doc;
  doc["case"] = limit_case_name(rep.limit.kind);
  doc["l1_slope"] = rep.l1_slope;
  doc["has_mid"] = rep.has_mid;
  if (rep.has_mid) {
    doc["rho_gap_slope"] = rep.rho_gap_slope;
    doc["pbar_extrapolated"] = rep.pbar_extrapolated;
    doc["mid_pbar_limit"] = rep.mid_pbar_limit;
  }
  write_json(join(out, "convergence.json"), doc);
  return 0;
}

int cmd_verify(const json& cfg, const std::string& out, std::uint64_t seed) {
  std::vector<int> criteria;
  if (cfg.contains("criteria")) {
    const json& arr = cfg["criteria"];
    if (!arr.is_array()) throw ConfigError("config: 'criteria' must be an array of integers");
    for (const json& e : arr) {
      if (!e.is_number_integer())
        throw ConfigError("config: 'criteria' must be an array of integers");
      criteria.push_back(e.get<int>());
    }
  }
  const VerifyReport report = run_verify(seed, criteria);
  const std::string text = report_text(report);
  atomic_write(join(out, "verify_report.txt"), text);
  std::cout << text;
  return report.all_pass() ? 0 : 1;
}

void emit_error(const char* type, const std::string& message) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

std::string emit_pressure_profile(const PressureLaw& law, const std::vector<double>& eps_list,
                                  const std::vector<double>& rho_grid,
                                  const std::string& config_hash) {
  validate(law);
  CsvBuilder csv({"rho", "p", "eps", "eps_p"}, config_hash);
  for (double eps : eps_list) {
    validate(ScaledPressure{law, eps});
    for (double rho : rho_grid) {
      if (!(rho > 0.0) || rho > law.rho_star * (1.0 - 1e-6)) continue;
      const double pv = p(law, rho);
      csv.row({csv.cell(rho), csv.cell(pv), csv.cell(eps), csv.cell(eps * pv)});
    }
  }
  return csv.str();
}

int run_cli(int argc, char** argv) {
  CLI::App app{"toolkit for congested self-propelled flow in one dimension"};
  std::string config_path, out_dir = ".";
  std::uint64_t seed = 20260813ULL;
  app.add_option("--config", config_path, "path to the JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (created if absent)");
  app.add_option("--seed", seed, "seed for the randomized verification suite");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  json cfg;
  try {
    std::ifstream in(config_path);
    if (!in) {
      emit_error("config", "cannot open config file '" + config_path + "'");
      return 2;
    }
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    emit_error("parse", e.what());
    return 2;
  }

  std::string command;
  try {
    const json& cmd = require_field(cfg, "command");
    if (!cmd.is_string()) throw ConfigError("config: 'command' must be a string");
    command = cmd.get<std::string>();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ConfigError("config: cannot create output directory '" + out_dir + "'");

    const std::string hash = fnv1a64_hex(cfg.dump());
    if (command == "curves") return cmd_curves(cfg, out_dir, hash);
    if (command == "riemann") return cmd_riemann(cfg, out_dir, hash);
    if (command == "limit") return cmd_limit(cfg, out_dir, hash);
    if (command == "collide") return cmd_collide(cfg, out_dir, hash);
    if (command == "godunov") return cmd_godunov(cfg, out_dir, hash);
    if (command == "convergence") return cmd_convergence(cfg, out_dir, hash);
    if (command == "verify") return cmd_verify(cfg, out_dir, seed);
    throw ConfigError("config: unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const json::exception& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const Error& e) {
    emit_error("solver", e.what());
    return 1;
  }
}

}  // namespace cflow
