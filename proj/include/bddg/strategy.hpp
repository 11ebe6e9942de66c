#pragma once

// State-feedback guidance: optimal aimpoints for solo and cooperative
// capture, unit heading commands, and the library of team policies used in
// the robustness studies (pure pursuit, wrong lowest point, fixed headings,
// per-step reassignment).

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bddg/assignment.hpp"
#include "bddg/geometry.hpp"
#include "bddg/state.hpp"

namespace bddg {

struct AtAimpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PolicySideError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct HeadingCommand {
  double cos_h = 1.0;
  double sin_h = 0.0;

  double angle() const { return std::atan2(sin_h, cos_h); }
};

enum class Side { Pursuers, Evaders };

enum class PolicyKind {
  Optimal,
  FixedAssignmentOptimal,
  PurePursuit,
  WrongLowestPoint,
  StraightToBorder,
  FixedHeading,
  ReassignEachStep,
};

/// A team's guidance policy. Policies carrying an assignment aim at the
/// capture points that assignment induces, recomputed closed-loop from the
/// current state each call. Pure pursuit is pursuer-only; straight-to-border
/// is evader-only.
struct TeamPolicy {
  PolicyKind kind = PolicyKind::Optimal;
  std::optional<Assignment> assignment;  // FixedAssignmentOptimal / WrongLowestPoint
  std::vector<double> heading_angles;    // FixedHeading, radians per team agent

  static TeamPolicy optimal() { return {PolicyKind::Optimal, std::nullopt, {}}; }
  static TeamPolicy fixed_assignment(Assignment a) {
    return {PolicyKind::FixedAssignmentOptimal, std::move(a), {}};
  }
  static TeamPolicy pure_pursuit() { return {PolicyKind::PurePursuit, std::nullopt, {}}; }
  static TeamPolicy wrong_lowest_point(Assignment a) {
    return {PolicyKind::WrongLowestPoint, std::move(a), {}};
  }
  static TeamPolicy straight_to_border() {
    return {PolicyKind::StraightToBorder, std::nullopt, {}};
  }
  static TeamPolicy fixed_heading(std::vector<double> angles) {
    return {PolicyKind::FixedHeading, std::nullopt, std::move(angles)};
  }
  static TeamPolicy reassign_each_step() {
    return {PolicyKind::ReassignEachStep, std::nullopt, {}};
  }
};

/// Optimal aimpoint of a solo pursuer-evader pair: the lowest point of
/// their Apollonius circle.
inline Point2 aimpoint_solo(Point2 p, Point2 e, double alpha) {
  return lowest_point(apollonius_circle(p, e, alpha)).point;
}

/// Shared aimpoint for an evader engaged by two pursuers; falls back to the
/// solo capture point when cooperation does not shrink the dominance region.
inline Point2 aimpoint_cooperative(Point2 p_a, Point2 p_b, Point2 e,
                                   double alpha_a, double alpha_b) {
  return cooperative_lowest_point(p_a, p_b, e, alpha_a, alpha_b).point;
}

/// Unit heading from an agent toward its aimpoint.
inline HeadingCommand heading_to(Point2 from, Point2 aim, double eps = 1e-9) {
  const double d = distance(from, aim);
  if (d < eps) throw AtAimpointError("heading_to: agent is already at its aimpoint");
  return {(aim.x - from.x) / d, (aim.y - from.y) / d};
}

/// Heading commands for every active agent of one team. Agents with no
/// command (frozen, or pursuers left idle by the assignment) get nullopt.
/// Aim-based policies recompute their aimpoints from the current state on
/// every call.
inline std::vector<std::optional<HeadingCommand>> team_headings(
    const GameState& state, const SpeedTable& speeds, const TeamPolicy& policy, Side side,
    const Assignment& committed) {
  if (side == Side::Evaders && policy.kind == PolicyKind::PurePursuit)
    throw PolicySideError("team_headings: evaders may not use pure pursuit");
  if (side == Side::Pursuers && policy.kind == PolicyKind::StraightToBorder)
    throw PolicySideError("team_headings: pursuers may not use straight-to-border");

  const int n = state.n_pursuers(), m = state.n_evaders();
  std::vector<std::optional<HeadingCommand>> out(side == Side::Pursuers ? n : m);

  if (policy.kind == PolicyKind::FixedHeading) {
    for (std::size_t k = 0; k < out.size() && k < policy.heading_angles.size(); ++k) {
      const bool active = side == Side::Pursuers ? state.pursuers[k].active : state.evaders[k].active;
      if (active) out[k] = HeadingCommand{std::cos(policy.heading_angles[k]),
                                          std::sin(policy.heading_angles[k])};
    }
    return out;
  }
  if (policy.kind == PolicyKind::StraightToBorder) {
    for (int j = 0; j < m; ++j)
      if (state.evaders[j].active) out[j] = HeadingCommand{0.0, -1.0};
    return out;
  }

  const Assignment* plan_src = &committed;
  Assignment reassigned;
  if ((policy.kind == PolicyKind::FixedAssignmentOptimal ||
       policy.kind == PolicyKind::WrongLowestPoint) &&
      policy.assignment) {
    plan_src = &*policy.assignment;
  } else if (policy.kind == PolicyKind::ReassignEachStep) {
    reassigned = optimal_assignment(state, speeds);
    plan_src = &reassigned;
  }

  for (int j = 0; j < m; ++j) {
    if (!state.evaders[j].active) continue;
    if (j >= static_cast<int>(plan_src->pursuers_for.size())) continue;
    std::vector<int> set;
    for (int i : plan_src->pursuers_for[j])
      if (state.pursuers[i].active) set.push_back(i);
    if (set.empty()) continue;

    const Point2 e = state.evaders[j].pos;
    Point2 aim;
    if (set.size() == 1) {
      aim = aimpoint_solo(state.pursuers[set[0]].pos, e, speeds.alpha(set[0], j));
    } else {
      aim = aimpoint_cooperative(state.pursuers[set[0]].pos, state.pursuers[set[1]].pos, e,
                                 speeds.alpha(set[0], j), speeds.alpha(set[1], j));
    }

    if (side == Side::Evaders) {
      out[j] = heading_to(e, aim);
    } else {
      for (int i : set) {
        if (policy.kind == PolicyKind::PurePursuit)
          out[i] = heading_to(state.pursuers[i].pos, e);
        else
          out[i] = heading_to(state.pursuers[i].pos, aim);
      }
    }
  }
  return out;
}

}  // namespace bddg
