#pragma once

// Shared fixtures and instance generators for the test suites. Numeric
// constants here were computed with an independent reference implementation
// before the library existed and are frozen.

#include <random>
#include <utility>
#include <vector>

#include "bddg/assignment.hpp"
#include "bddg/state.hpp"

namespace testutil {

using bddg::GameState;
using bddg::Point2;
using bddg::SpeedTable;

// Two pursuers vs. two evaders benchmark configuration.
inline GameState example1_state() {
  return GameState::from_positions({{-1.5, 4.2}, {9.3, 4.5}}, {{4.1, 11.0}, {5.5, 12.2}});
}
inline SpeedTable example1_speeds() { return {{1.0, 1.04}, {0.81, 0.77}}; }

inline constexpr double kEx1Value = 10.696302;       // y_s1
inline constexpr double kEx1SecondValue = 8.287843;  // y_s2
inline constexpr double kEx1Gap = 2.408459;
inline constexpr double kEx1Aim1X = 14.783803;
inline constexpr double kEx1Aim1Y = 3.224833;
inline constexpr double kEx1Aim2X = 0.889769;
inline constexpr double kEx1Aim2Y = 7.471469;
inline constexpr double kEx1GradYE1 = 1.089667;

// Symmetric two-on-one cooperative capture: E=(5,4), P=(0,0),(10,0), both
// alpha 0.5; lens bottom at (5, 16/3 - sqrt(139)/3).
inline constexpr double kCoopSymY = 1.403391;

// Unequal-speed two-on-one used for the closed-form cross-check:
// P=(0,0) v=1, P'=(10,0) v=1.25, E=(5,4) v=0.5.
inline constexpr double kCoopClosedFormY = 1.730635749;

// Three pursuers, three evaders; the only infeasible pairing is P1-E3.
inline GameState fig2_state() {
  return GameState::from_positions({{-1.81, 3.76}, {5.15, 4.79}, {6.75, 5.9}},
                                   {{0.09, 10.93}, {2.77, 9.25}, {12.22, 7.63}});
}
inline SpeedTable fig2_speeds() { return {{1.0, 1.0, 1.0}, {0.693, 0.693, 0.693}}; }

// Three pursuers, two evaders realizing the six-row structure: pairs
// (P1,P2)->E1, (P2,P3)->E2, (P1,P3)->E2 capture simultaneously; the pairs
// on the other evader reduce to solo P2, P2, and P1 respectively.
inline GameState table1_state() {
  return GameState::from_positions({{-5.8, 3.88}, {0.07, 4.49}, {6.34, 2.86}},
                                   {{-3.86, 10.6}, {2.58, 9.48}});
}
inline SpeedTable table1_speeds() { return {{1.0, 1.0, 1.0}, {0.543, 0.727}}; }

// Mirror-symmetric 2v2 on a dispersal surface: evaders on the pursuers'
// perpendicular bisector, equal pursuer speeds.
inline GameState dispersal_state() {
  return GameState::from_positions({{-3.0, 2.0}, {3.0, 2.0}}, {{0.0, 8.0}, {0.0, 12.0}});
}
inline SpeedTable dispersal_speeds() { return {{1.0, 1.0}, {0.5, 0.6}}; }

// Two-on-one where each solo capture fails but the cooperative pair holds
// the evader above the border.
inline GameState rescue_state() {
  return GameState::from_positions({{-4.94, 0.59}, {3.9, 2.24}}, {{0.12, 4.2}});
}
// Alphas 0.826 / 0.770 against the two pursuers.
inline SpeedTable rescue_speeds_distinct() { return {{1.0, 0.826 / 0.770}, {0.826}}; }

// Fig 3b regime: circles intersect but the E-P2 circle's bottom lies inside
// the other disk, so capture is solo by P2 at (8, 20/3).
inline constexpr double kFig3bSoloY = 6.666667;

struct Random2v2 {
  GameState state;
  SpeedTable speeds;
};

/// Random 2v2 instance in the pursuers' win region with solo captures.
/// Returns instances accepted by the caller's own filters.
inline Random2v2 random_2v2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> px(-10.0, 10.0), py(1.0, 6.0);
  std::uniform_real_distribution<double> ex(-8.0, 8.0), ey(8.0, 14.0);
  std::uniform_real_distribution<double> vp(1.0, 1.3), ve(0.5, 0.85);
  Random2v2 r;
  r.state = GameState::from_positions({{px(rng), py(rng)}, {px(rng), py(rng)}},
                                      {{ex(rng), ey(rng)}, {ex(rng), ey(rng)}});
  r.speeds = {{vp(rng), vp(rng)}, {ve(rng), ve(rng)}};
  return r;
}

struct Random2v1 {
  GameState state;
  SpeedTable speeds;
};

/// Random 2v1 instance with flanking pursuers of unequal speeds; most draws
/// land in the simultaneous-capture regime.
inline Random2v1 random_2v1(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lx(-8.0, -2.0), rx(2.0, 8.0), py(0.5, 4.0);
  std::uniform_real_distribution<double> ex(-1.5, 1.5), ey(6.0, 12.0);
  std::uniform_real_distribution<double> vfast(1.15, 1.4), vslow(1.0, 1.1), ve(0.5, 0.8);
  Random2v1 r;
  r.state = GameState::from_positions({{lx(rng), py(rng)}, {rx(rng), py(rng)}},
                                      {{ex(rng), ey(rng)}});
  r.speeds = {{vslow(rng), vfast(rng)}, {ve(rng)}};
  return r;
}

struct Random3v1 {
  GameState state;
  SpeedTable speeds;
};

inline Random3v1 random_3v1(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> px(-9.0, 9.0), py(0.0, 6.0);
  std::uniform_real_distribution<double> ex(-2.0, 2.0), ey(5.0, 10.0);
  std::uniform_real_distribution<double> vp(1.0, 1.35), ve(0.45, 0.85);
  Random3v1 r;
  r.state = GameState::from_positions(
      {{px(rng), py(rng)}, {px(rng), py(rng)}, {px(rng), py(rng)}}, {{ex(rng), ey(rng)}});
  r.speeds = {{vp(rng), vp(rng), vp(rng)}, {ve(rng)}};
  return r;
}

}  // namespace testutil
