#pragma once

// Pursuer-to-evader assignment: feasibility, enumeration of solo and
// cooperative-pair matchings, optimal selection with deterministic
// tie-breaking, the Hungarian solver for the square case, and the
// game-of-kind classification.

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bddg/geometry.hpp"
#include "bddg/state.hpp"

namespace bddg {

struct SpeedTable {
  std::vector<double> pursuer_speeds;
  std::vector<double> evader_speeds;

  double alpha(int pursuer, int evader) const {
    return evader_speeds[evader] / pursuer_speeds[pursuer];
  }
};

struct EnumerationLimitError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NoFeasibleAssignmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonSquareMatrixError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// One assignment row: each evader owns one pursuer or a cooperative pair,
/// no pursuer serves two evaders. `value` is the summed capture height over
/// evaders with a constructible plan (the game payoff of the row when it is
/// feasible); evaders whose best plan still reaches the border are listed
/// in `unstoppable`.
struct Assignment {
  std::vector<std::vector<int>> pursuers_for;         // per evader, sorted
  std::vector<std::optional<CapturePoint>> plans;     // per evader
  double value = 0.0;
  double captured_value = 0.0;  // sum over stoppable evaders only
  bool feasible = false;
  std::vector<int> unstoppable;

  /// Lexicographic encoding used for deterministic tie-breaking.
  const std::vector<std::vector<int>>& encoding() const { return pursuers_for; }
};

struct GameOfKindReport {
  enum class Winner { Pursuers, EvadersPartial };
  Winner winner = Winner::EvadersPartial;
  std::vector<int> unstoppable_evaders;
  Assignment best_assignment;

  bool pursuers_win() const { return winner == Winner::Pursuers; }
};

/// True iff assigning pursuer p to evader e can capture strictly above the
/// border: alpha < 1 and the circle's lowest point has y > 0. Tangency
/// (lowest point exactly on the border) counts as infeasible.
inline bool pair_feasible(int p, int e, const GameState& state, const SpeedTable& speeds) {
  const double a = speeds.alpha(p, e);
  if (!(a > 0.0 && a < 1.0)) return false;
  const Circle c = apollonius_circle(state.pursuers.at(p).pos, state.evaders.at(e).pos, a);
  return c.center.y - c.radius > 0.0;
}

namespace detail {

inline double tie_epsilon(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

/// Evaluates one structural row: computes per-evader plans, reduces
/// non-helping pairs to the dominating solo, and fills value/feasibility.
inline Assignment evaluate_row(const GameState& state, const SpeedTable& speeds,
                               const std::vector<int>& evaders,
                               const std::vector<std::vector<int>>& sets) {
  Assignment row;
  row.pursuers_for.assign(state.n_evaders(), {});
  row.plans.assign(state.n_evaders(), std::nullopt);
  for (std::size_t k = 0; k < evaders.size(); ++k) {
    const int j = evaders[k];
    const Point2 e = state.evaders[j].pos;
    std::vector<int> set = sets[k];
    std::optional<CapturePoint> plan;

    if (set.size() == 1) {
      const int i = set[0];
      const double a = speeds.alpha(i, j);
      if (a > 0.0 && a < 1.0) {
        CapturePoint cp = lowest_point(apollonius_circle(state.pursuers[i].pos, e, a));
        cp.pursuers = {i, -1};
        plan = cp;
      }
    } else {
      const int ia = set[0], ib = set[1];
      const double aa = speeds.alpha(ia, j), ab = speeds.alpha(ib, j);
      const bool ca = aa > 0.0 && aa < 1.0, cb = ab > 0.0 && ab < 1.0;
      if (ca && cb) {
        CapturePoint cp = cooperative_lowest_point(state.pursuers[ia].pos,
                                                   state.pursuers[ib].pos, e, aa, ab);
        if (cp.simultaneous()) {
          cp.pursuers = {ia, ib};
          plan = cp;
        } else {
          // Pair does not help: reduce to the dominating solo.
          const int winner = cp.pursuers[0] == 0 ? ia : ib;
          cp.pursuers = {winner, -1};
          set = {winner};
          plan = cp;
        }
      } else if (ca || cb) {
        const int winner = ca ? ia : ib;
        CapturePoint cp =
            lowest_point(apollonius_circle(state.pursuers[winner].pos, e, speeds.alpha(winner, j)));
        cp.pursuers = {winner, -1};
        set = {winner};
        plan = cp;
      }
      // Neither member can outrun the evader: the pair stays as listed with
      // no plan, and the evader is unstoppable under this row.
    }

    row.pursuers_for[j] = set;
    row.plans[j] = plan;
    if (plan) row.value += plan->point.y;
    if (plan && plan->point.y > 0.0) {
      row.captured_value += plan->point.y;
    } else {
      row.unstoppable.push_back(j);
    }
  }
  row.feasible = row.unstoppable.empty();
  return row;
}

}  // namespace detail

/// All candidate assignments for the active agents, sorted by descending
/// value (ties by ascending pursuer-set encoding). Each active evader gets a
/// solo pursuer or a cooperative pair; the structures use the maximal number
/// of pursuers min(N, 2M), and a pair that fails to yield simultaneous
/// capture is reduced to its dominating solo. Rows where some evader cannot
/// be stopped are kept and annotated rather than dropped.
inline std::vector<Assignment> enumerate_assignments(const GameState& state,
                                                     const SpeedTable& speeds,
                                                     int player_limit = 16) {
  std::vector<int> ap, ae;
  for (int i = 0; i < state.n_pursuers(); ++i)
    if (state.pursuers[i].active) ap.push_back(i);
  for (int j = 0; j < state.n_evaders(); ++j)
    if (state.evaders[j].active) ae.push_back(j);

  if (static_cast<int>(ap.size() + ae.size()) > player_limit)
    throw EnumerationLimitError("enumerate_assignments: " + std::to_string(ap.size() + ae.size()) +
                                " active players exceed the limit of " +
                                std::to_string(player_limit));
  if (ae.empty()) {
    Assignment empty;
    empty.pursuers_for.assign(state.n_evaders(), {});
    empty.plans.assign(state.n_evaders(), std::nullopt);
    empty.feasible = true;
    return {empty};
  }
  if (ap.size() < ae.size())
    throw std::invalid_argument("enumerate_assignments: fewer active pursuers than evaders");

  const int m = static_cast<int>(ae.size());
  const int total = std::min<int>(static_cast<int>(ap.size()), 2 * m);
  const int pair_budget = total - m;

  std::vector<Assignment> rows;
  std::vector<std::vector<int>> sets(m);
  std::vector<char> used(ap.size(), 0);

  auto recurse = [&](auto&& self, int k, int pairs_left) -> void {
    if (k == m) {
      if (pairs_left == 0) rows.push_back(detail::evaluate_row(state, speeds, ae, sets));
      return;
    }
    for (std::size_t a = 0; a < ap.size(); ++a) {
      if (used[a]) continue;
      used[a] = 1;
      sets[k] = {ap[a]};
      self(self, k + 1, pairs_left);
      if (pairs_left > 0) {
        for (std::size_t b = a + 1; b < ap.size(); ++b) {
          if (used[b]) continue;
          used[b] = 1;
          sets[k] = {ap[a], ap[b]};
          self(self, k + 1, pairs_left - 1);
          used[b] = 0;
        }
      }
      used[a] = 0;
    }
  };
  recurse(recurse, 0, pair_budget);

  std::sort(rows.begin(), rows.end(), [](const Assignment& x, const Assignment& y) {
    if (x.value != y.value) return x.value > y.value;
    return x.encoding() < y.encoding();
  });
  return rows;
}

/// Argmax of value over the feasible assignments. Ties within the tie
/// epsilon resolve to the lexicographically smallest pursuer-set encoding,
/// so both teams independently compute the same assignment.
inline Assignment optimal_assignment(const GameState& state, const SpeedTable& speeds,
                                     int player_limit = 16) {
  const auto rows = enumerate_assignments(state, speeds, player_limit);
  const Assignment* best = nullptr;
  for (const auto& row : rows)
    if (row.feasible && !best) best = &row;
  if (!best)
    throw NoFeasibleAssignmentError(
        "optimal_assignment: no assignment captures every evader; consult game_of_kind");
  const double eps = detail::tie_epsilon(best->value);
  const Assignment* pick = best;
  for (const auto& row : rows) {
    if (!row.feasible || row.value < best->value - eps) continue;
    if (row.encoding() < pick->encoding()) pick = &row;
  }
  return *pick;
}

struct HungarianResult {
  std::vector<int> match;  // row i is assigned column match[i]
  double total = 0.0;
};

/// Maximum-total assignment on a square score matrix via shortest
/// augmenting paths with potentials.
inline HungarianResult hungarian_assign(const std::vector<std::vector<double>>& score) {
  const int n = static_cast<int>(score.size());
  for (const auto& r : score)
    if (static_cast<int>(r.size()) != n)
      throw NonSquareMatrixError("hungarian_assign: matrix must be square");
  if (n == 0) return {{}, 0.0};

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -score[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  HungarianResult res;
  res.match.assign(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) res.match[p[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) res.total += score[i][res.match[i]];
  return res;
}

/// Whether the border can be fully protected, and the best assignment when
/// it cannot: fewest evaders reaching the border first, then the highest
/// payoff over the evaders that are still captured.
inline GameOfKindReport game_of_kind(const GameState& state, const SpeedTable& speeds,
                                     int player_limit = 16) {
  const auto rows = enumerate_assignments(state, speeds, player_limit);
  const Assignment* best = nullptr;
  for (const auto& row : rows) {
    if (!best) {
      best = &row;
      continue;
    }
    const auto lhs = std::make_tuple(row.unstoppable.size(), -row.captured_value);
    const auto rhs = std::make_tuple(best->unstoppable.size(), -best->captured_value);
    if (lhs < rhs || (lhs == rhs && row.encoding() < best->encoding())) best = &row;
  }
  GameOfKindReport report;
  report.best_assignment = *best;
  report.unstoppable_evaders = best->unstoppable;
  report.winner = best->unstoppable.empty() ? GameOfKindReport::Winner::Pursuers
                                            : GameOfKindReport::Winner::EvadersPartial;
  return report;
}

}  // namespace bddg
