#pragma once

// Value of the game, its analytic gradient, the HJI residual, and the
// algebraic identities behind the simultaneous-capture branch.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bddg/assignment.hpp"
#include "bddg/geometry.hpp"
#include "bddg/state.hpp"
#include "bddg/strategy.hpp"

namespace bddg {

struct OutsideWinRegionError : std::runtime_error {
  GameOfKindReport report;
  explicit OutsideWinRegionError(GameOfKindReport r)
      : std::runtime_error("value: state lies outside the pursuers' win region"),
        report(std::move(r)) {}
};
struct DispersalSurfaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sensitivities of the Value with respect to every coordinate, ordered
/// pursuers then evaders, (x, y) per agent. Frozen agents hold zeros.
struct ValueGradient {
  int n_pursuers = 0;
  int n_evaders = 0;
  std::vector<double> d;

  double px(int i) const { return d[2 * i]; }
  double py(int i) const { return d[2 * i + 1]; }
  double ex(int j) const { return d[2 * (n_pursuers + j)]; }
  double ey(int j) const { return d[2 * (n_pursuers + j) + 1]; }
  double& at(int k) { return d[k]; }

  double norm() const {
    double s = 0.0;
    for (double v : d) s += v * v;
    return std::sqrt(s);
  }
};

/// Scalars of the simultaneous-capture term and their partials with respect
/// to the six coordinates of (P_i, P_i', E_j), ordered
/// (xPi, yPi, xPi', yPi', xE, yE). P_i' is the strictly faster pursuer.
struct CoopDerivs {
  double F = 0.0, G = 0.0, D = 0.0, R = 0.0;
  std::array<double, 6> dF{}, dG{}, dD{};
};

inline CoopDerivs coop_derivs(Point2 p_i, Point2 p_ip, Point2 e, double alpha_i,
                              double alpha_ip, double alpha_pp) {
  const auto s = detail::coop_scalars(p_i, p_ip, e, alpha_i, alpha_ip, alpha_pp);
  CoopDerivs out;
  out.F = s.F;
  out.G = s.G;
  out.D = s.D;
  out.R = s.R;

  const double Ai = alpha_i * alpha_i / (1.0 - alpha_i * alpha_i);
  const double Aj = alpha_ip * alpha_ip / (1.0 - alpha_ip * alpha_ip);
  const double Ap = alpha_pp * alpha_pp / (1.0 - alpha_pp * alpha_pp);
  const double Ce = 1.0 / (1.0 - alpha_i * alpha_i) - 1.0 / (1.0 - alpha_ip * alpha_ip);
  const double ip2 = 1.0 / (1.0 - alpha_pp * alpha_pp);
  const double dx = s.dx, dy = s.dy, xp = s.xp, yp = s.yp;
  const double rp2 = s.rp * s.rp, W = s.W, D = s.D, halfR = 0.5 * s.R;

  out.dF[0] = Ai * (-2.0 * yp * dx + dy * (xp - p_i.x)) - dx * dy * ip2;
  out.dF[1] = Ai * (halfR + xp * dx - dy * p_i.y) + dx * dx * ip2;
  out.dF[2] = -Aj * (-2.0 * yp * dx + dy * (xp - p_ip.x)) + Ap * dx * dy;
  out.dF[3] = -Aj * (halfR + xp * dx - dy * p_ip.y) - Ap * dx * dx;
  out.dF[4] = Ce * (2.0 * yp * dx + dy * (e.x - xp));
  out.dF[5] = Ce * (dy * e.y - halfR - xp * dx);

  out.dG[0] = -2.0 * Ai * (dx * rp2 + (p_i.x - xp) * W) +
              2.0 * ip2 * (Ap * (p_i.x - p_ip.x) * D - dx * W);
  out.dG[1] = -2.0 * Ai * (dy * rp2 + (p_i.y - yp) * W) +
              2.0 * ip2 * (Ap * (p_i.y - p_ip.y) * D - dy * W);
  out.dG[2] = 2.0 * Aj * (dx * rp2 + (p_ip.x - xp) * W) -
              2.0 * Ap * ((p_i.x - p_ip.x) * ip2 * D - dx * W);
  out.dG[3] = 2.0 * Aj * (dy * rp2 + (p_ip.y - yp) * W) -
              2.0 * Ap * ((p_i.y - p_ip.y) * ip2 * D - dy * W);
  out.dG[4] = 2.0 * Ce * (dx * rp2 + (e.x - xp) * W);
  out.dG[5] = 2.0 * Ce * (dy * rp2 + (e.y - yp) * W);

  out.dD[0] = -2.0 * Ai * dx;
  out.dD[1] = -2.0 * Ai * dy;
  out.dD[2] = 2.0 * Aj * dx;
  out.dD[3] = 2.0 * Aj * dy;
  out.dD[4] = 2.0 * Ce * dx;
  out.dD[5] = 2.0 * Ce * dy;
  return out;
}

namespace detail {

/// Feasible-row argmax with the shared tie-break (smallest encoding).
inline const Assignment* pick_optimal(const std::vector<Assignment>& rows) {
  const Assignment* best = nullptr;
  for (const auto& row : rows)
    if (row.feasible && !best) best = &row;
  if (!best) return nullptr;
  const double eps = tie_epsilon(best->value);
  const Assignment* pick = best;
  for (const auto& row : rows) {
    if (!row.feasible || row.value < best->value - eps) continue;
    if (row.encoding() < pick->encoding()) pick = &row;
  }
  return pick;
}

/// Value of the best feasible row whose assignment differs from `best`.
inline std::optional<double> second_best_value(const std::vector<Assignment>& rows,
                                               const Assignment& best) {
  std::optional<double> second;
  for (const auto& row : rows) {
    if (!row.feasible || row.encoding() == best.encoding()) continue;
    if (!second || row.value > *second) second = row.value;
  }
  return second;
}

/// Gradient of a solo term, accumulated into the four affected slots.
inline void add_solo_gradient(ValueGradient& g, const GameState& state,
                              const SpeedTable& speeds, int i, int j) {
  const Point2 p = state.pursuers[i].pos, e = state.evaders[j].pos;
  const double a = speeds.alpha(i, j);
  const double d = distance(p, e);
  const double s = 1.0 - a * a;
  const double ux = (e.x - p.x) / d, uy = (e.y - p.y) / d;
  g.at(2 * (g.n_pursuers + j)) += -a / s * ux;
  g.at(2 * (g.n_pursuers + j) + 1) += (1.0 - a * uy) / s;
  g.at(2 * i) += a / s * ux;
  g.at(2 * i + 1) += a / s * (-a + uy);
}

/// Gradient of a simultaneous-capture term via the closed-form scalars.
/// Requires strictly unequal pursuer speeds.
inline void add_coop_gradient_closed(ValueGradient& g, const GameState& state,
                                     const SpeedTable& speeds, int slow, int fast, int j) {
  const Point2 pi = state.pursuers[slow].pos, pj = state.pursuers[fast].pos;
  const Point2 e = state.evaders[j].pos;
  const double ai = speeds.alpha(slow, j), aj = speeds.alpha(fast, j);
  const double app = speeds.pursuer_speeds[slow] / speeds.pursuer_speeds[fast];
  const auto s = coop_scalars(pi, pj, e, ai, aj, app);
  const auto cd = coop_derivs(pi, pj, e, ai, aj, app);

  const double S = std::sqrt(s.dx * s.dx * s.G);
  const double Vs = (s.F - S) / s.D;
  const double Ai = ai * ai / (1.0 - ai * ai);
  const double Aj = aj * aj / (1.0 - aj * aj);
  const double Ce = 1.0 / (1.0 - ai * ai) - 1.0 / (1.0 - aj * aj);
  // d(dx)/d(coordinate); y-coordinates do not move the center x's.
  const std::array<double, 6> ddx = {-Ai, 0.0, Aj, 0.0, Ce, 0.0};

  const std::array<int, 6> slot = {2 * slow,          2 * slow + 1, 2 * fast,
                                   2 * fast + 1,      2 * (g.n_pursuers + j),
                                   2 * (g.n_pursuers + j) + 1};
  for (int k = 0; k < 6; ++k) {
    const double dS = (s.dx * ddx[k] * s.G + 0.5 * s.dx * s.dx * cd.dG[k]) / S;
    g.at(slot[k]) += (cd.dF[k] - dS - Vs * cd.dD[k]) / s.D;
  }
}

/// Gradient of a simultaneous-capture term by implicit differentiation of
/// the two circle constraints at the lower intersection point; valid for
/// any pursuer speed ratio, including equal speeds.
inline void add_coop_gradient_implicit(ValueGradient& g, const GameState& state,
                                       const SpeedTable& speeds, int ia, int ib, int j,
                                       Point2 q) {
  const Point2 e = state.evaders[j].pos;
  struct Per {
    int i;
    Circle c;
    double a, d;
  };
  const Per per[2] = {
      {ia, apollonius_circle(state.pursuers[ia].pos, e, speeds.alpha(ia, j)),
       speeds.alpha(ia, j), distance(state.pursuers[ia].pos, e)},
      {ib, apollonius_circle(state.pursuers[ib].pos, e, speeds.alpha(ib, j)),
       speeds.alpha(ib, j), distance(state.pursuers[ib].pos, e)}};

  const double j11 = q.x - per[0].c.center.x, j12 = q.y - per[0].c.center.y;
  const double j21 = q.x - per[1].c.center.x, j22 = q.y - per[1].c.center.y;
  const double det = j11 * j22 - j12 * j21;

  // Six coordinates: (xPa, yPa, xPb, yPb, xE, yE).
  const std::array<int, 6> slot = {2 * ia,       2 * ia + 1, 2 * ib, 2 * ib + 1,
                                   2 * (g.n_pursuers + j), 2 * (g.n_pursuers + j) + 1};
  for (int k = 0; k < 6; ++k) {
    double rhs[2];
    for (int c = 0; c < 2; ++c) {
      const Per& pc = per[c];
      const bool own = (k < 4) ? (k / 2 == c) : true;
      if (!own) {
        rhs[c] = 0.0;
        continue;
      }
      const Point2 p = state.pursuers[pc.i].pos;
      const double s = 1.0 - pc.a * pc.a;
      double dxc = 0.0, dyc = 0.0, dd = 0.0;
      const bool xcoord = (k % 2 == 0);
      if (k < 4) {  // pursuer coordinate
        if (xcoord) {
          dxc = -pc.a * pc.a / s;
          dd = -(e.x - p.x) / pc.d;
        } else {
          dyc = -pc.a * pc.a / s;
          dd = -(e.y - p.y) / pc.d;
        }
      } else {  // evader coordinate
        if (xcoord) {
          dxc = 1.0 / s;
          dd = (e.x - p.x) / pc.d;
        } else {
          dyc = 1.0 / s;
          dd = (e.y - p.y) / pc.d;
        }
      }
      const double dr = pc.a / s * dd;
      rhs[c] = (q.x - pc.c.center.x) * dxc + (q.y - pc.c.center.y) * dyc + pc.c.radius * dr;
    }
    // Solve J * [dqx, dqy] = rhs; only dqy contributes to the Value.
    const double dqy = (j11 * rhs[1] - j21 * rhs[0]) / det;
    g.at(slot[k]) += dqy;
  }
}

}  // namespace detail

/// Value of the game: captured evaders contribute their frozen heights,
/// active evaders the optimal assignment's capture heights.
inline double value(const GameState& state, const SpeedTable& speeds, int player_limit = 16) {
  double frozen = 0.0;
  for (const auto& ev : state.evaders)
    if (!ev.active && ev.frozen_y) frozen += *ev.frozen_y;
  bool any_active = false;
  for (const auto& ev : state.evaders) any_active |= ev.active;
  if (!any_active) return frozen;
  try {
    return frozen + optimal_assignment(state, speeds, player_limit).value;
  } catch (const NoFeasibleAssignmentError&) {
    throw OutsideWinRegionError(game_of_kind(state, speeds, player_limit));
  }
}

/// Analytic gradient of the active branch of the Value. Errors on dispersal
/// surfaces, where the Value is not differentiable.
inline ValueGradient value_gradient(const GameState& state, const SpeedTable& speeds,
                                    int player_limit = 16) {
  const auto rows = enumerate_assignments(state, speeds, player_limit);
  const Assignment* best = detail::pick_optimal(rows);
  if (!best) throw OutsideWinRegionError(game_of_kind(state, speeds, player_limit));
  if (const auto second = detail::second_best_value(rows, *best)) {
    if (best->value - *second <= detail::tie_epsilon(best->value))
      throw DispersalSurfaceError("value_gradient: state lies on a dispersal surface");
  }

  ValueGradient g;
  g.n_pursuers = state.n_pursuers();
  g.n_evaders = state.n_evaders();
  g.d.assign(2 * (g.n_pursuers + g.n_evaders), 0.0);

  for (int j = 0; j < g.n_evaders; ++j) {
    if (!state.evaders[j].active) continue;
    const auto& plan = best->plans[j];
    if (!plan) continue;
    const auto& set = best->pursuers_for[j];
    if (!plan->simultaneous()) {
      detail::add_solo_gradient(g, state, speeds, plan->pursuers[0], j);
    } else {
      int slow = set[0], fast = set[1];
      if (speeds.pursuer_speeds[slow] > speeds.pursuer_speeds[fast]) std::swap(slow, fast);
      const double app = speeds.pursuer_speeds[slow] / speeds.pursuer_speeds[fast];
      if (1.0 - app > 1e-9)
        detail::add_coop_gradient_closed(g, state, speeds, slow, fast, j);
      else
        detail::add_coop_gradient_implicit(g, state, speeds, set[0], set[1], j, plan->point);
    }
  }
  return g;
}

/// The HJI residual dV/dx . f(x, u*_P, u*_E) under mutually optimal
/// headings; vanishes everywhere in the win region off dispersal surfaces.
inline double hji_residual(const GameState& state, const SpeedTable& speeds,
                           int player_limit = 16) {
  const ValueGradient g = value_gradient(state, speeds, player_limit);
  const Assignment best = optimal_assignment(state, speeds, player_limit);
  const auto hp = team_headings(state, speeds, TeamPolicy::optimal(), Side::Pursuers, best);
  const auto he = team_headings(state, speeds, TeamPolicy::optimal(), Side::Evaders, best);
  double r = 0.0;
  for (int i = 0; i < state.n_pursuers(); ++i)
    if (hp[i]) r += speeds.pursuer_speeds[i] * (g.px(i) * hp[i]->cos_h + g.py(i) * hp[i]->sin_h);
  for (int j = 0; j < state.n_evaders(); ++j)
    if (he[j]) r += speeds.evader_speeds[j] * (g.ex(j) * he[j]->cos_h + g.ey(j) * he[j]->sin_h);
  return r;
}

/// Residuals of the simultaneous-capture proof identities, each as
/// |lhs - rhs| / max(1, scale of the terms involved).
struct CoopIdentityResiduals {
  double sum_fx = 0.0;      // dF partials over x sum to 0
  double sum_fy = 0.0;      // dF partials over y sum to D
  double sum_gx = 0.0;      // dG partials over x sum to 0
  double sum_gy = 0.0;      // dG partials over y sum to 0
  double weighted_f = 0.0;  // coordinate-weighted dF sum equals 3F
  double weighted_g = 0.0;  // coordinate-weighted dG sum equals 4G

  double max_residual() const {
    return std::max({sum_fx, sum_fy, sum_gx, sum_gy, weighted_f, weighted_g});
  }
};

inline CoopIdentityResiduals coop_identities(const GameState& state, const SpeedTable& speeds,
                                             std::pair<int, int> pair, int evader) {
  int slow = pair.first, fast = pair.second;
  if (speeds.pursuer_speeds[slow] > speeds.pursuer_speeds[fast]) std::swap(slow, fast);
  const Point2 pi = state.pursuers[slow].pos, pj = state.pursuers[fast].pos;
  const Point2 e = state.evaders[evader].pos;
  const double ai = speeds.alpha(slow, evader), aj = speeds.alpha(fast, evader);
  const double app = speeds.pursuer_speeds[slow] / speeds.pursuer_speeds[fast];
  const auto cd = coop_derivs(pi, pj, e, ai, aj, app);

  const std::array<double, 6> w = {pi.x, pi.y, pj.x, pj.y, e.x, e.y};
  auto rel = [](double lhs, double rhs, double scale) {
    return std::abs(lhs - rhs) / std::max({1.0, std::abs(rhs), scale});
  };
  auto mag3 = [](double a, double b, double c) {
    return std::abs(a) + std::abs(b) + std::abs(c);
  };

  CoopIdentityResiduals res;
  res.sum_fx = rel(cd.dF[0] + cd.dF[2] + cd.dF[4], 0.0, mag3(cd.dF[0], cd.dF[2], cd.dF[4]));
  res.sum_fy = rel(cd.dF[1] + cd.dF[3] + cd.dF[5], cd.D, mag3(cd.dF[1], cd.dF[3], cd.dF[5]));
  res.sum_gx = rel(cd.dG[0] + cd.dG[2] + cd.dG[4], 0.0, mag3(cd.dG[0], cd.dG[2], cd.dG[4]));
  res.sum_gy = rel(cd.dG[1] + cd.dG[3] + cd.dG[5], 0.0, mag3(cd.dG[1], cd.dG[3], cd.dG[5]));
  double wf = 0.0, wg = 0.0, mf = 0.0, mg = 0.0;
  for (int k = 0; k < 6; ++k) {
    wf += w[k] * cd.dF[k];
    wg += w[k] * cd.dG[k];
    mf += std::abs(w[k] * cd.dF[k]);
    mg += std::abs(w[k] * cd.dG[k]);
  }
  res.weighted_f = rel(wf, 3.0 * cd.F, mf);
  res.weighted_g = rel(wg, 4.0 * cd.G, mg);
  return res;
}

/// Central-difference gradient of the Value, h = 1e-6 * max(1, |coordinate|).
/// The reference the analytic gradient is checked against.
inline ValueGradient finite_difference_gradient(const GameState& state, const SpeedTable& speeds,
                                                int player_limit = 16) {
  ValueGradient g;
  g.n_pursuers = state.n_pursuers();
  g.n_evaders = state.n_evaders();
  g.d.assign(2 * (g.n_pursuers + g.n_evaders), 0.0);

  auto coord = [&](GameState& s, int k) -> double& {
    const int agent = k / 2;
    if (agent < s.n_pursuers()) {
      Point2& p = s.pursuers[agent].pos;
      return k % 2 == 0 ? p.x : p.y;
    }
    Point2& p = s.evaders[agent - s.n_pursuers()].pos;
    return k % 2 == 0 ? p.x : p.y;
  };

  GameState work = state;
  for (int k = 0; k < static_cast<int>(g.d.size()); ++k) {
    const int agent = k / 2;
    const bool frozen = agent < g.n_pursuers ? !state.pursuers[agent].active
                                             : !state.evaders[agent - g.n_pursuers].active;
    if (frozen) continue;
    double& c = coord(work, k);
    const double c0 = c;
    const double h = 1e-6 * std::max(1.0, std::abs(c0));
    c = c0 + h;
    const double vp = value(work, speeds, player_limit);
    c = c0 - h;
    const double vm = value(work, speeds, player_limit);
    c = c0;
    g.d[k] = (vp - vm) / (2.0 * h);
  }
  return g;
}

/// Margin between the best and second-best assignment; zero (within the tie
/// epsilon) signals a dispersal surface.
inline double dispersal_gap(const GameState& state, const SpeedTable& speeds,
                            int player_limit = 16) {
  const auto rows = enumerate_assignments(state, speeds, player_limit);
  const Assignment* best = detail::pick_optimal(rows);
  if (!best) throw OutsideWinRegionError(game_of_kind(state, speeds, player_limit));
  const auto second = detail::second_best_value(rows, *best);
  if (!second)
    throw std::invalid_argument("dispersal_gap: fewer than two feasible assignments");
  return best->value - *second;
}

}  // namespace bddg
