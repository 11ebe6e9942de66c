#pragma once

// Command implementations behind the CLI front end: solve / enumerate /
// simulate / verify / oracle, with machine-readable JSON reports and
// plot-ready trajectory tables.
//
// Exit codes: 0 ok, 1 input error, 2 outside the pursuers' win region,
// 3 verification failure.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bddg/assignment.hpp"
#include "bddg/oracle.hpp"
#include "bddg/scenario.hpp"
#include "bddg/sim.hpp"
#include "bddg/state.hpp"
#include "bddg/strategy.hpp"
#include "bddg/value.hpp"

namespace bddg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitOutsideWinRegion = 2;
inline constexpr int kExitVerification = 3;

inline std::string pursuer_label(int i) { return "P" + std::to_string(i + 1); }
inline std::string evader_label(int j) { return "E" + std::to_string(j + 1); }

struct AssignmentRow {
  int id = 0;  // 1-based position in the descending-value enumeration
  std::map<std::string, std::vector<std::string>> pairs;
  double value = 0.0;
  bool feasible = false;
  std::vector<std::string> unstoppable;
  bool operator==(const AssignmentRow&) const = default;
};

struct PlanRow {
  std::string evader;
  std::string mode;  // "solo" | "simultaneous" | "none"
  std::vector<std::string> pursuers;
  std::optional<std::array<double, 2>> aimpoint;
  std::optional<double> capture_y;
  bool operator==(const PlanRow&) const = default;
};

struct SolveReport {
  std::vector<AssignmentRow> assignments;
  int optimal_id = -1;  // -1 when the pursuers cannot win
  std::optional<double> value;
  std::vector<PlanRow> plans;
  std::string winner;  // "pursuers" | "evaders-partial"
  std::vector<std::string> unstoppable;
  std::optional<double> dispersal_gap;
  bool operator==(const SolveReport&) const = default;
};

inline void to_json(nlohmann::json& j, const AssignmentRow& r) {
  j = {{"id", r.id},
       {"pairs", r.pairs},
       {"value", r.value},
       {"feasible", r.feasible},
       {"unstoppable", r.unstoppable}};
}
inline void from_json(const nlohmann::json& j, AssignmentRow& r) {
  j.at("id").get_to(r.id);
  j.at("pairs").get_to(r.pairs);
  j.at("value").get_to(r.value);
  j.at("feasible").get_to(r.feasible);
  j.at("unstoppable").get_to(r.unstoppable);
}
inline void to_json(nlohmann::json& j, const PlanRow& r) {
  j = {{"evader", r.evader}, {"mode", r.mode}, {"pursuers", r.pursuers}};
  if (r.aimpoint)
    j["aimpoint"] = *r.aimpoint;
  else
    j["aimpoint"] = nullptr;
  if (r.capture_y)
    j["capture_y"] = *r.capture_y;
  else
    j["capture_y"] = nullptr;
}
inline void from_json(const nlohmann::json& j, PlanRow& r) {
  j.at("evader").get_to(r.evader);
  j.at("mode").get_to(r.mode);
  j.at("pursuers").get_to(r.pursuers);
  r.aimpoint.reset();
  if (!j.at("aimpoint").is_null()) r.aimpoint = j.at("aimpoint").get<std::array<double, 2>>();
  r.capture_y.reset();
  if (!j.at("capture_y").is_null()) r.capture_y = j.at("capture_y").get<double>();
}
inline void to_json(nlohmann::json& j, const SolveReport& r) {
  j = {{"assignments", r.assignments},
       {"optimal_id", r.optimal_id},
       {"plans", r.plans},
       {"winner", r.winner},
       {"unstoppable", r.unstoppable}};
  j["value"] = r.value ? nlohmann::json(*r.value) : nlohmann::json(nullptr);
  j["dispersal_gap"] = r.dispersal_gap ? nlohmann::json(*r.dispersal_gap) : nlohmann::json(nullptr);
}
inline void from_json(const nlohmann::json& j, SolveReport& r) {
  j.at("assignments").get_to(r.assignments);
  j.at("optimal_id").get_to(r.optimal_id);
  j.at("plans").get_to(r.plans);
  j.at("winner").get_to(r.winner);
  j.at("unstoppable").get_to(r.unstoppable);
  r.value.reset();
  if (!j.at("value").is_null()) r.value = j.at("value").get<double>();
  r.dispersal_gap.reset();
  if (!j.at("dispersal_gap").is_null()) r.dispersal_gap = j.at("dispersal_gap").get<double>();
}

namespace detail {

inline AssignmentRow make_row(const Assignment& a, int id) {
  AssignmentRow r;
  r.id = id;
  r.value = a.value;
  r.feasible = a.feasible;
  for (std::size_t j = 0; j < a.pursuers_for.size(); ++j) {
    if (a.pursuers_for[j].empty()) continue;
    std::vector<std::string> ps;
    for (int i : a.pursuers_for[j]) ps.push_back(pursuer_label(i));
    r.pairs[evader_label(static_cast<int>(j))] = ps;
  }
  for (int j : a.unstoppable) r.unstoppable.push_back(evader_label(j));
  return r;
}

inline std::vector<PlanRow> make_plans(const Assignment& a) {
  std::vector<PlanRow> plans;
  for (std::size_t j = 0; j < a.pursuers_for.size(); ++j) {
    if (a.pursuers_for[j].empty() && !a.plans[j]) continue;
    PlanRow p;
    p.evader = evader_label(static_cast<int>(j));
    for (int i : a.pursuers_for[j]) p.pursuers.push_back(pursuer_label(i));
    if (a.plans[j]) {
      p.mode = a.plans[j]->simultaneous() ? "simultaneous" : "solo";
      p.aimpoint = {a.plans[j]->point.x, a.plans[j]->point.y};
      p.capture_y = a.plans[j]->point.y;
    } else {
      p.mode = "none";
    }
    plans.push_back(std::move(p));
  }
  return plans;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline SolveReport build_solve_report(const GameState& state, const SpeedTable& speeds) {
  const auto rows = enumerate_assignments(state, speeds);
  const auto kind = game_of_kind(state, speeds);
  SolveReport rep;
  for (std::size_t k = 0; k < rows.size(); ++k)
    rep.assignments.push_back(detail::make_row(rows[k], static_cast<int>(k) + 1));

  const Assignment* best = bddg::detail::pick_optimal(rows);
  if (best) {
    rep.optimal_id = static_cast<int>(best - rows.data()) + 1;
    rep.value = best->value;
    rep.plans = detail::make_plans(*best);
    rep.winner = "pursuers";
  } else {
    rep.plans = detail::make_plans(kind.best_assignment);
    rep.winner = "evaders-partial";
  }
  for (int j : kind.unstoppable_evaders) rep.unstoppable.push_back(evader_label(j));
  if (best)
    if (const auto second = bddg::detail::second_best_value(rows, *best))
      rep.dispersal_gap = best->value - *second;
  return rep;
}

inline int cmd_solve(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioFile sc = load_scenario(path);
    const SolveReport rep = build_solve_report(sc.initial_state(), sc.speed_table());
    out << nlohmann::json(rep).dump(2) << "\n";
    return rep.winner == "pursuers" ? kExitOk : kExitOutsideWinRegion;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

inline int cmd_enumerate(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioFile sc = load_scenario(path);
    const auto rows = enumerate_assignments(sc.initial_state(), sc.speed_table());
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t k = 0; k < rows.size(); ++k)
      j.push_back(detail::make_row(rows[k], static_cast<int>(k) + 1));
    out << j.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

struct PolicyParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses "name" or "name:arg". Assignment ids are 1-based positions in the
/// solve/enumerate listing.
inline TeamPolicy parse_policy(const std::string& text, Side side,
                               const std::vector<Assignment>& rows) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);

  auto row_arg = [&]() -> Assignment {
    const int id = std::stoi(arg);
    if (id < 1 || id > static_cast<int>(rows.size()))
      throw PolicyParseError("assignment id " + arg + " out of range 1.." +
                             std::to_string(rows.size()));
    return rows[id - 1];
  };

  if (name == "optimal") return TeamPolicy::optimal();
  if (name == "pure-pursuit") {
    if (side != Side::Pursuers) throw PolicyParseError("pure-pursuit is a pursuer policy");
    return TeamPolicy::pure_pursuit();
  }
  if (name == "straight-to-border") {
    if (side != Side::Evaders) throw PolicyParseError("straight-to-border is an evader policy");
    return TeamPolicy::straight_to_border();
  }
  if (name == "reassign-each-step") return TeamPolicy::reassign_each_step();
  if (name == "fixed-assignment") return TeamPolicy::fixed_assignment(row_arg());
  if (name == "wrong-lowest-point") return TeamPolicy::wrong_lowest_point(row_arg());
  if (name == "fixed-heading") {
    std::vector<double> angles;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) angles.push_back(std::stod(tok));
    if (angles.empty()) throw PolicyParseError("fixed-heading needs angles, e.g. fixed-heading:1.57,0");
    return TeamPolicy::fixed_heading(angles);
  }
  throw PolicyParseError(
      "unknown policy '" + text +
      "'; valid: optimal, pure-pursuit, straight-to-border, reassign-each-step, "
      "fixed-assignment:<id>, wrong-lowest-point:<id>, fixed-heading:<radians,...>");
}

inline void write_trajectory_csv(const TrajectoryLog& log, int n, int m, std::ostream& out) {
  out << "t";
  for (int i = 0; i < n; ++i) out << "," << pursuer_label(i) << "x," << pursuer_label(i) << "y";
  for (int j = 0; j < m; ++j) out << "," << evader_label(j) << "x," << evader_label(j) << "y";
  out << "\n";
  for (const auto& s : log.samples) {
    out << detail::fmt(s.time);
    for (const auto& p : s.pursuers) out << "," << detail::fmt(p.x) << "," << detail::fmt(p.y);
    for (const auto& e : s.evaders) out << "," << detail::fmt(e.x) << "," << detail::fmt(e.y);
    out << "\n";
  }
}

inline nlohmann::json events_json(const TrajectoryLog& log) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& ev : log.events) {
    nlohmann::json e = {
        {"t", ev.time},
        {"kind", ev.kind == Event::Kind::Capture ? "capture" : "border-reach"},
        {"evader", evader_label(ev.evader)},
        {"x", ev.location.x},
        {"y", ev.location.y}};
    std::vector<std::string> ps;
    for (int i : ev.pursuers) ps.push_back(pursuer_label(i));
    e["pursuers"] = ps;
    arr.push_back(e);
  }
  return arr;
}

inline int cmd_simulate(const std::string& path, const std::string& pursuer_policy,
                        const std::string& evader_policy, const std::string& out_path,
                        const std::string& events_path, bool game_of_kind_fallback,
                        std::ostream& out, std::ostream& err) {
  ScenarioFile sc;
  try {
    sc = load_scenario(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  const GameState state = sc.initial_state();
  const SpeedTable speeds = sc.speed_table();
  const auto rows = enumerate_assignments(state, speeds);

  TeamPolicy ppol, epol;
  try {
    ppol = parse_policy(pursuer_policy, Side::Pursuers, rows);
    epol = parse_policy(evader_policy, Side::Evaders, rows);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::optional<double> v;
  std::optional<Assignment> committed_override;
  const Assignment* best = bddg::detail::pick_optimal(rows);
  if (best) {
    v = best->value;
  } else if (game_of_kind_fallback) {
    committed_override = game_of_kind(state, speeds).best_assignment;
  } else {
    err << "error: state lies outside the pursuers' win region "
           "(rerun with --game-of-kind to simulate the best partial defense)\n";
    return kExitOutsideWinRegion;
  }

  TrajectoryLog log;
  try {
    log = run_engagement(state, speeds, ppol, epol, sc.sim_params(), committed_override);
  } catch (const SimulationTimeoutError& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerification;
  }

  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) {
      err << "error: cannot write " << out_path << "\n";
      return kExitInput;
    }
    write_trajectory_csv(log, state.n_pursuers(), state.n_evaders(), f);
  }
  if (!events_path.empty()) {
    std::ofstream f(events_path);
    if (!f) {
      err << "error: cannot write " << events_path << "\n";
      return kExitInput;
    }
    f << events_json(log).dump(2) << "\n";
  }

  out << "payoff=" << detail::fmt(log.payoff) << " terminal_time=" << detail::fmt(log.terminal_time);
  if (v)
    out << " V=" << detail::fmt(*v) << " payoff_minus_V=" << detail::fmt(log.payoff - *v);
  else
    out << " V=n/a";
  out << "\n";
  return kExitOk;
}

struct VerifyReport {
  int samples = 0;
  int evaluated = 0;
  int skipped_near_dispersal = 0;
  int skipped_mode_boundary = 0;
  double max_hji_residual = 0.0;  // normalized by v_max * |grad V|
  double max_gradient_rel_error = 0.0;
  double max_coop_identity_residual = 0.0;
  bool pass = true;
};

inline void to_json(nlohmann::json& j, const VerifyReport& r) {
  j = {{"samples", r.samples},
       {"evaluated", r.evaluated},
       {"skipped_near_dispersal", r.skipped_near_dispersal},
       {"skipped_mode_boundary", r.skipped_mode_boundary},
       {"max_hji_residual", r.max_hji_residual},
       {"max_gradient_rel_error", r.max_gradient_rel_error},
       {"max_coop_identity_residual", r.max_coop_identity_residual},
       {"pass", r.pass}};
}

inline constexpr double kHjiTolerance = 1e-6;       // of v_max * |grad V|
inline constexpr double kGradientTolerance = 1e-5;  // componentwise relative
inline constexpr double kIdentityTolerance = 1e-9;  // relative

namespace detail {

/// Guards against states where finite differences would cross a branch:
/// near-dispersal (assignment about to switch) and near mode boundaries of
/// simultaneous-capture pairs.
enum class SampleClass { Good, NearDispersal, ModeBoundary };

inline SampleClass classify_sample(const GameState& state, const SpeedTable& speeds,
                                   const std::vector<Assignment>& rows, const Assignment& best) {
  if (const auto second = bddg::detail::second_best_value(rows, best)) {
    if (best.value - *second <= 1e-3 * std::max(1.0, std::abs(best.value)))
      return SampleClass::NearDispersal;
  }
  for (std::size_t j = 0; j < best.pursuers_for.size(); ++j) {
    const auto& set = best.pursuers_for[j];
    const auto& plan = best.plans[j];
    if (!plan || set.size() != 2) continue;
    const Point2 e = state.evaders[j].pos;
    const Circle a = apollonius_circle(state.pursuers[set[0]].pos, e, speeds.alpha(set[0], static_cast<int>(j)));
    const Circle b = apollonius_circle(state.pursuers[set[1]].pos, e, speeds.alpha(set[1], static_cast<int>(j)));
    const double margin_a = std::abs(distance({a.center.x, a.center.y - a.radius}, b.center) - b.radius);
    const double margin_b = std::abs(distance({b.center.x, b.center.y - b.radius}, a.center) - a.radius);
    if (margin_a < 1e-3 * b.radius || margin_b < 1e-3 * a.radius) return SampleClass::ModeBoundary;
    if (plan->simultaneous()) {
      if (std::abs(a.center.x - b.center.x) < 1e-3 * std::max(a.radius, b.radius))
        return SampleClass::ModeBoundary;
      int slow = set[0], fast = set[1];
      if (speeds.pursuer_speeds[slow] > speeds.pursuer_speeds[fast]) std::swap(slow, fast);
      const double app = speeds.pursuer_speeds[slow] / speeds.pursuer_speeds[fast];
      if (1.0 - app > 1e-9) {
        const auto s = bddg::detail::coop_scalars(state.pursuers[slow].pos, state.pursuers[fast].pos,
                                                  e, speeds.alpha(slow, static_cast<int>(j)),
                                                  speeds.alpha(fast, static_cast<int>(j)), app);
        if (s.G < 1e-6 * std::max(s.rp * s.rp * s.D, s.W * s.W)) return SampleClass::ModeBoundary;
      }
    }
  }
  return SampleClass::Good;
}

}  // namespace detail

/// Evaluates HJI residual, gradient/finite-difference agreement, and the
/// cooperative proof identities at one state, folding into the report.
inline void verify_state(const GameState& state, const SpeedTable& speeds, VerifyReport& rep) {
  const auto rows = enumerate_assignments(state, speeds);
  const Assignment* best = bddg::detail::pick_optimal(rows);
  if (!best) return;

  double v_max = 0.0;
  for (double v : speeds.pursuer_speeds) v_max = std::max(v_max, v);
  for (double v : speeds.evader_speeds) v_max = std::max(v_max, v);

  const ValueGradient g = value_gradient(state, speeds);
  const double hji = std::abs(hji_residual(state, speeds)) / (v_max * g.norm());
  rep.max_hji_residual = std::max(rep.max_hji_residual, hji);

  const ValueGradient fd = finite_difference_gradient(state, speeds);
  for (std::size_t k = 0; k < g.d.size(); ++k) {
    const double rel = std::abs(g.d[k] - fd.d[k]) / std::max(1.0, std::abs(g.d[k]));
    rep.max_gradient_rel_error = std::max(rep.max_gradient_rel_error, rel);
  }

  for (std::size_t j = 0; j < best->pursuers_for.size(); ++j) {
    const auto& plan = best->plans[j];
    if (!plan || !plan->simultaneous()) continue;
    int slow = plan->pursuers[0], fast = plan->pursuers[1];
    if (speeds.pursuer_speeds[slow] > speeds.pursuer_speeds[fast]) std::swap(slow, fast);
    if (1.0 - speeds.pursuer_speeds[slow] / speeds.pursuer_speeds[fast] <= 1e-9) continue;
    const auto res = coop_identities(state, speeds, {slow, fast}, static_cast<int>(j));
    rep.max_coop_identity_residual = std::max(rep.max_coop_identity_residual, res.max_residual());
  }
  ++rep.evaluated;
}

inline int cmd_verify(const std::string& path, int samples, std::optional<std::uint64_t> seed,
                      std::ostream& out, std::ostream& err) {
  ScenarioFile sc;
  try {
    sc = load_scenario(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  if (samples < 0) {
    err << "error: --samples must be nonnegative\n";
    return kExitInput;
  }

  const GameState base = sc.initial_state();
  const SpeedTable speeds = sc.speed_table();
  const double span = std::max(1.0, bddg::detail::configuration_diameter(base));
  std::mt19937_64 rng(seed ? *seed : sc.seed);
  std::uniform_real_distribution<double> jitter(-0.35 * span, 0.35 * span);

  VerifyReport rep;
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    for (int attempt = 0; attempt < 400; ++attempt) {
      GameState st = base;
      for (auto& p : st.pursuers) {
        p.pos.x += jitter(rng);
        p.pos.y = std::max(0.0, p.pos.y + jitter(rng));
      }
      for (auto& e : st.evaders) {
        e.pos.x += jitter(rng);
        e.pos.y = std::max(0.05 * span, e.pos.y + jitter(rng));
      }
      const auto rows = enumerate_assignments(st, speeds);
      const Assignment* best = bddg::detail::pick_optimal(rows);
      if (!best) continue;
      bool margin_ok = true;
      for (const auto& plan : best->plans)
        if (plan && plan->point.y < 1e-3) margin_ok = false;
      if (!margin_ok) continue;

      const auto cls = detail::classify_sample(st, speeds, rows, *best);
      if (cls == detail::SampleClass::NearDispersal) {
        ++rep.skipped_near_dispersal;
        break;
      }
      if (cls == detail::SampleClass::ModeBoundary) {
        ++rep.skipped_mode_boundary;
        break;
      }
      verify_state(st, speeds, rep);
      break;
    }
  }

  rep.pass = rep.max_hji_residual <= kHjiTolerance &&
             rep.max_gradient_rel_error <= kGradientTolerance &&
             rep.max_coop_identity_residual <= kIdentityTolerance;
  out << nlohmann::json(rep).dump(2) << "\n";
  return rep.pass ? kExitOk : kExitVerification;
}

inline int cmd_oracle(const std::string& path, double resolution, std::ostream& out,
                      std::ostream& err) {
  if (resolution <= 0.0) {
    err << "error: --resolution must be positive\n";
    return kExitInput;
  }
  ScenarioFile sc;
  try {
    sc = load_scenario(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  const GameState state = sc.initial_state();
  const SpeedTable speeds = sc.speed_table();
  Assignment best;
  try {
    best = optimal_assignment(state, speeds);
  } catch (const NoFeasibleAssignmentError&) {
    err << "error: state lies outside the pursuers' win region\n";
    return kExitOutsideWinRegion;
  }

  nlohmann::json per = nlohmann::json::array();
  bool pass = true;
  for (std::size_t j = 0; j < best.pursuers_for.size(); ++j) {
    const auto& plan = best.plans[j];
    if (!plan) continue;
    std::vector<PursuerConstraint> cons;
    for (int i : best.pursuers_for[j])
      cons.push_back({state.pursuers[i].pos, speeds.alpha(i, static_cast<int>(j))});
    const auto grid = grid_lowest_point(state.evaders[j].pos, cons, resolution);
    const double diff = grid ? std::abs(plan->point.y - grid->y)
                             : std::numeric_limits<double>::infinity();
    const bool ok = diff <= 2.0 * resolution;
    pass = pass && ok;
    per.push_back({{"evader", evader_label(static_cast<int>(j))},
                   {"closed_form_y", plan->point.y},
                   {"grid_y", grid ? nlohmann::json(grid->y) : nlohmann::json(nullptr)},
                   {"abs_diff", diff},
                   {"pass", ok}});
  }
  out << nlohmann::json{{"resolution", resolution}, {"per_evader", per}, {"pass", pass}}.dump(2)
      << "\n";
  return pass ? kExitOk : kExitVerification;
}

}  // namespace bddg::cli
