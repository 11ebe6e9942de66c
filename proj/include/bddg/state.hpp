#pragma once

// Engagement state shared by the solver and the simulator.

#include <optional>
#include <vector>

#include "bddg/geometry.hpp"

namespace bddg {

struct PursuerState {
  Point2 pos;
  bool active = true;
};

struct EvaderState {
  Point2 pos;
  bool active = true;
  // Terminal height once the evader is captured (or 0 on border reach).
  std::optional<double> frozen_y;
};

/// Complete game state: positions and alive flags for all agents.
/// Inactive agents never move.
struct GameState {
  std::vector<PursuerState> pursuers;
  std::vector<EvaderState> evaders;
  double time = 0.0;

  int n_pursuers() const { return static_cast<int>(pursuers.size()); }
  int n_evaders() const { return static_cast<int>(evaders.size()); }

  static GameState from_positions(const std::vector<Point2>& pursuer_pos,
                                  const std::vector<Point2>& evader_pos) {
    GameState s;
    s.pursuers.reserve(pursuer_pos.size());
    for (auto p : pursuer_pos) s.pursuers.push_back({p, true});
    s.evaders.reserve(evader_pos.size());
    for (auto e : evader_pos) s.evaders.push_back({e, true, std::nullopt});
    return s;
  }
};

}  // namespace bddg
