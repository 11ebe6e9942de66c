#pragma once

// Brute-force dominance-region scanner. Decides membership purely by the
// distance-ratio test against every pursuer, so it is independent of the
// closed-form circle construction it is used to check.

#include <cmath>
#include <optional>
#include <vector>

#include "bddg/geometry.hpp"

namespace bddg {

struct PursuerConstraint {
  Point2 pos;
  double alpha = 0.0;  // v_E / v_P
};

/// Lowest grid point (resolution-spaced lattice) the evader can reach no
/// later than every listed pursuer, scanning rows of y >= 0 upward. The
/// search window follows from the triangle inequality alone: any reachable
/// point s satisfies dist(E, s) <= alpha * dist(P, E) / (1 - alpha) for each
/// pursuer. Returns nullopt only for an empty constraint list.
inline std::optional<Point2> grid_lowest_point(Point2 evader,
                                               const std::vector<PursuerConstraint>& pursuers,
                                               double resolution) {
  if (pursuers.empty() || resolution <= 0.0) return std::nullopt;
  double reach = std::numeric_limits<double>::infinity();
  for (const auto& pc : pursuers) {
    const double d = distance(pc.pos, evader);
    reach = std::min(reach, pc.alpha * d / (1.0 - pc.alpha));
  }

  auto member = [&](Point2 s) {
    const double de = distance(evader, s);
    for (const auto& pc : pursuers)
      if (de > pc.alpha * distance(pc.pos, s)) return false;
    return true;
  };

  const double x_lo = evader.x - reach, x_hi = evader.x + reach;
  const double y_lo = std::max(0.0, evader.y - reach);
  const double y_hi = evader.y + reach;
  const long k0 = static_cast<long>(std::floor(y_lo / resolution));
  const long k1 = static_cast<long>(std::ceil(y_hi / resolution));
  const long c0 = static_cast<long>(std::floor(x_lo / resolution));
  const long c1 = static_cast<long>(std::ceil(x_hi / resolution));
  for (long k = k0; k <= k1; ++k) {
    const double y = k * resolution;
    for (long c = c0; c <= c1; ++c) {
      const Point2 s{c * resolution, y};
      if (member(s)) return s;
    }
  }
  return std::nullopt;  // unreachable: the evader's own cell is a member
}

}  // namespace bddg
