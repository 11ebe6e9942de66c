#pragma once

// Deterministic fixed-step engagement simulator: forward-Euler motion,
// capture and border-reach detection with linear event interpolation, the
// post-capture freeze rule, and terminal payoff bookkeeping.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bddg/assignment.hpp"
#include "bddg/state.hpp"
#include "bddg/strategy.hpp"

namespace bddg {

struct SimParams {
  double dt = 1e-3;
  double capture_radius = 1e-3;
  std::optional<double> t_max;  // default: 4 * initial diameter / min pursuer speed
};

struct Event {
  enum class Kind { Capture, BorderReach };
  double time = 0.0;
  Kind kind = Kind::Capture;
  int evader = -1;
  std::vector<int> pursuers;
  Point2 location;
};

struct Sample {
  double time = 0.0;
  std::vector<Point2> pursuers;
  std::vector<Point2> evaders;
};

struct TrajectoryLog {
  std::vector<Sample> samples;
  std::vector<Event> events;
  double payoff = 0.0;
  double terminal_time = 0.0;
};

struct SimulationTimeoutError : std::runtime_error {
  TrajectoryLog partial;
  explicit SimulationTimeoutError(TrajectoryLog log)
      : std::runtime_error("run_engagement: t_max reached with active evaders"),
        partial(std::move(log)) {}
};

/// One forward-Euler step. Only active agents may carry a heading; frozen
/// agents never move.
inline GameState step(const GameState& state, const SpeedTable& speeds,
                      const std::vector<std::optional<HeadingCommand>>& pursuer_headings,
                      const std::vector<std::optional<HeadingCommand>>& evader_headings,
                      double dt) {
  if (dt <= 0.0) throw std::invalid_argument("step: dt must be positive");
  GameState next = state;
  for (int i = 0; i < state.n_pursuers(); ++i) {
    const auto& h = pursuer_headings[i];
    if (!h) continue;
    if (!state.pursuers[i].active)
      throw std::logic_error("step: heading supplied for an inactive pursuer");
    const double v = speeds.pursuer_speeds[i];
    next.pursuers[i].pos = state.pursuers[i].pos + (v * dt) * Point2{h->cos_h, h->sin_h};
  }
  for (int j = 0; j < state.n_evaders(); ++j) {
    const auto& h = evader_headings[j];
    if (!h) continue;
    if (!state.evaders[j].active)
      throw std::logic_error("step: heading supplied for an inactive evader");
    const double v = speeds.evader_speeds[j];
    next.evaders[j].pos = state.evaders[j].pos + (v * dt) * Point2{h->cos_h, h->sin_h};
  }
  next.time = state.time + dt;
  return next;
}

namespace detail {

inline double configuration_diameter(const GameState& s) {
  std::vector<Point2> pts;
  for (const auto& p : s.pursuers) pts.push_back(p.pos);
  for (const auto& e : s.evaders) pts.push_back(e.pos);
  double d = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) d = std::max(d, distance(pts[a], pts[b]));
  return d;
}

struct PendingEvent {
  double tau = 0.0;  // offset within the step
  Event::Kind kind = Event::Kind::Capture;
  int evader = -1;
};

}  // namespace detail

/// Runs one engagement under a pair of team policies. The pursuers commit
/// to their assignment at t0 (the policy's own assignment when it carries
/// one, the optimal assignment otherwise); ReassignEachStep recomputes it
/// every step and is the only mode where a pursuer outlives its capture.
/// Captures freeze the evader at the interpolated meeting point and retire
/// its pursuer(s); border reaches contribute zero payoff.
inline TrajectoryLog run_engagement(const GameState& initial, const SpeedTable& speeds,
                                    const TeamPolicy& pursuer_policy,
                                    const TeamPolicy& evader_policy, const SimParams& params,
                                    std::optional<Assignment> committed_override = std::nullopt) {
  GameState state = initial;
  const double dt = params.dt;
  const double eps = params.capture_radius;
  double v_pmin = speeds.pursuer_speeds.empty() ? 1.0 : speeds.pursuer_speeds[0];
  for (double v : speeds.pursuer_speeds) v_pmin = std::min(v_pmin, v);
  const double t_max =
      params.t_max ? *params.t_max : 4.0 * detail::configuration_diameter(initial) / v_pmin;

  const bool reassigning = pursuer_policy.kind == PolicyKind::ReassignEachStep;
  Assignment committed;
  if (committed_override)
    committed = *committed_override;
  else if (pursuer_policy.assignment)
    committed = *pursuer_policy.assignment;
  else
    committed = optimal_assignment(state, speeds);

  TrajectoryLog log;
  auto record = [&](const GameState& s) {
    Sample smp;
    smp.time = s.time;
    for (const auto& p : s.pursuers) smp.pursuers.push_back(p.pos);
    for (const auto& e : s.evaders) smp.evaders.push_back(e.pos);
    log.samples.push_back(std::move(smp));
  };

  auto active_set = [&](int j) {
    std::vector<int> set;
    if (j < static_cast<int>(committed.pursuers_for.size()))
      for (int i : committed.pursuers_for[j])
        if (state.pursuers[i].active) set.push_back(i);
    return set;
  };

  auto freeze_evader = [&](int j, double t_event, Point2 loc, Event::Kind kind,
                           const std::vector<int>& set, const GameState& pre) {
    Event ev;
    ev.time = t_event;
    ev.kind = kind;
    ev.evader = j;
    ev.pursuers = set;
    ev.location = loc;
    log.events.push_back(ev);
    state.evaders[j].pos = loc;
    state.evaders[j].active = false;
    state.evaders[j].frozen_y = kind == Event::Kind::Capture ? loc.y : 0.0;
    if (!reassigning) {
      const double tau = t_event - pre.time;
      for (int i : set) {
        const Point2 from = pre.pursuers[i].pos, to = state.pursuers[i].pos;
        const double full = state.time - pre.time;
        const double f = full > 0.0 ? tau / full : 0.0;
        state.pursuers[i].pos = from + f * (to - from);
        state.pursuers[i].active = false;
      }
    }
  };

  // Events already present in the initial conditions.
  for (int j = 0; j < state.n_evaders(); ++j) {
    if (!state.evaders[j].active) continue;
    const auto set = active_set(j);
    if (state.evaders[j].pos.y <= 0.0) {
      GameState pre = state;
      freeze_evader(j, state.time, {state.evaders[j].pos.x, 0.0}, Event::Kind::BorderReach, set,
                    pre);
      continue;
    }
    for (int i : set) {
      if (distance(state.pursuers[i].pos, state.evaders[j].pos) <= eps) {
        GameState pre = state;
        freeze_evader(j, state.time, state.evaders[j].pos, Event::Kind::Capture, set, pre);
        break;
      }
    }
  }

  record(state);

  auto evaders_remain = [&] {
    for (const auto& e : state.evaders)
      if (e.active) return true;
    return false;
  };

  while (evaders_remain()) {
    if (state.time > t_max) {
      log.payoff = 0.0;
      for (const auto& e : state.evaders)
        if (e.frozen_y) log.payoff += *e.frozen_y;
      log.terminal_time = state.time;
      throw SimulationTimeoutError(std::move(log));
    }
    if (reassigning) committed = optimal_assignment(state, speeds);

    const auto hp = team_headings(state, speeds, pursuer_policy, Side::Pursuers, committed);
    const auto he = team_headings(state, speeds, evader_policy, Side::Evaders, committed);
    const GameState pre = state;
    state = step(state, speeds, hp, he, dt);

    // Detect crossings inside the step, then process them in interpolated
    // time order (ties by ascending evader index).
    std::vector<detail::PendingEvent> pending;
    for (int j = 0; j < pre.n_evaders(); ++j) {
      if (!pre.evaders[j].active) continue;
      std::optional<detail::PendingEvent> ev;
      for (int i : active_set(j)) {
        const double d0 = distance(pre.pursuers[i].pos, pre.evaders[j].pos);
        const double d1 = distance(state.pursuers[i].pos, state.evaders[j].pos);
        if (d1 <= eps) {
          const double tau = d0 > d1 ? dt * (d0 - eps) / (d0 - d1) : 0.0;
          if (!ev || tau < ev->tau) ev = {std::max(tau, 0.0), Event::Kind::Capture, j};
        }
      }
      const double y0 = pre.evaders[j].pos.y, y1 = state.evaders[j].pos.y;
      if (y1 <= 0.0) {
        const double tau = y0 > y1 ? dt * y0 / (y0 - y1) : 0.0;
        if (!ev || tau < ev->tau) ev = {std::max(tau, 0.0), Event::Kind::BorderReach, j};
      }
      if (ev) pending.push_back(*ev);
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [](const detail::PendingEvent& a, const detail::PendingEvent& b) {
                       if (std::abs(a.tau - b.tau) > 1e-12) return a.tau < b.tau;
                       return a.evader < b.evader;
                     });
    for (const auto& pe : pending) {
      const int j = pe.evader;
      if (!state.evaders[j].active) continue;
      const double f = pe.tau / dt;
      const Point2 from = pre.evaders[j].pos, to = state.evaders[j].pos;
      Point2 loc = from + f * (to - from);
      if (pe.kind == Event::Kind::BorderReach) loc.y = 0.0;
      freeze_evader(j, pre.time + pe.tau, loc, pe.kind, active_set(j), pre);
    }
    record(state);
  }

  log.payoff = 0.0;
  for (const auto& e : state.evaders)
    if (e.frozen_y) log.payoff += *e.frozen_y;
  log.terminal_time = log.events.empty() ? state.time : log.events.back().time;
  for (const auto& ev : log.events) log.terminal_time = std::max(log.terminal_time, ev.time);
  return log;
}

}  // namespace bddg
