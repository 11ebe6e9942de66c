#pragma once

// Apollonius-circle geometry for the border-defense game: dominance
// boundaries, their lowest points, circle intersections, and the
// two-pursuer cooperative capture point.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bddg {

/// Point in the play half-plane. The defended border is the line y = 0.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

struct DegenerateInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct EqualSpeedError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct CoincidentCirclesError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateConfigurationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class CircleKind { PursuerEvader, PursuerPursuer };

/// Apollonius dominance boundary: the locus of points S with
/// dist(inner, S) / dist(outer, S) == ratio. The inner focus (the evader,
/// or the slower of a pursuer pair) lies strictly inside the circle.
struct Circle {
  Point2 center;
  double radius = 0.0;
  CircleKind kind = CircleKind::PursuerEvader;
  double ratio = 0.0;  // in (0,1)
  Point2 inner;
  Point2 outer;

  bool contains(Point2 p) const { return distance(center, p) <= radius; }
};

enum class CaptureMode { Solo, Simultaneous };

/// Lowest point of a dominance region plus the pursuer(s) realizing it.
/// Geometry-level calls fill `pursuers` with argument slots (0 = first
/// pursuer argument, 1 = second); the assignment layer rewrites them to
/// global pursuer indices.
struct CapturePoint {
  Point2 point;
  CaptureMode mode = CaptureMode::Solo;
  std::array<int, 2> pursuers{-1, -1};
  int pursuer_count = 0;

  bool simultaneous() const { return mode == CaptureMode::Simultaneous; }
};

namespace detail {
// Intersections closer than this (relative to the larger radius) collapse
// to a tangency point.
inline constexpr double kTangencyRel = 1e-9;
// Radical-line branch switch when circle centers are vertically aligned.
inline constexpr double kBranchRel = 1e-12;
inline constexpr double kEqualSpeedRel = 1e-12;
}  // namespace detail

/// Circle of capture points between one pursuer and one evader with speed
/// ratio alpha = v_E / v_P in (0,1).
inline Circle apollonius_circle(Point2 pursuer, Point2 evader, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DegenerateInputError("apollonius_circle: speed ratio must lie in (0,1), got " +
                               std::to_string(alpha));
  const double d = distance(pursuer, evader);
  if (d <= 0.0)
    throw DegenerateInputError("apollonius_circle: pursuer and evader coincide");
  const double s = 1.0 - alpha * alpha;
  Circle c;
  c.center = {(evader.x - alpha * alpha * pursuer.x) / s,
              (evader.y - alpha * alpha * pursuer.y) / s};
  c.radius = alpha * d / s;
  c.kind = CircleKind::PursuerEvader;
  c.ratio = alpha;
  c.inner = evader;
  c.outer = pursuer;
  return c;
}

/// Lowest point of a pursuer-evader circle: the solo capture point.
inline CapturePoint lowest_point(const Circle& c) {
  CapturePoint cp;
  cp.point = {c.center.x, c.center.y - c.radius};
  cp.mode = CaptureMode::Solo;
  cp.pursuers = {0, -1};
  cp.pursuer_count = 1;
  return cp;
}

/// Circle of points equidistant in time between two pursuers,
/// alpha_pp = v_slow / v_fast in (0,1). Degenerates to the perpendicular
/// bisector at equal speeds, which has no circle representation.
inline Circle pursuer_pair_circle(Point2 p_slow, Point2 p_fast, double alpha_pp) {
  if (std::abs(alpha_pp - 1.0) <= detail::kEqualSpeedRel)
    throw EqualSpeedError("pursuer_pair_circle: equal pursuer speeds degenerate to the bisector");
  if (!(alpha_pp > 0.0 && alpha_pp < 1.0))
    throw DegenerateInputError("pursuer_pair_circle: speed ratio must lie in (0,1), got " +
                               std::to_string(alpha_pp));
  const double d = distance(p_slow, p_fast);
  if (d <= 0.0)
    throw DegenerateInputError("pursuer_pair_circle: pursuers coincide");
  const double s = 1.0 - alpha_pp * alpha_pp;
  Circle c;
  c.center = {(p_slow.x - alpha_pp * alpha_pp * p_fast.x) / s,
              (p_slow.y - alpha_pp * alpha_pp * p_fast.y) / s};
  c.radius = alpha_pp * d / s;
  c.kind = CircleKind::PursuerPursuer;
  c.ratio = alpha_pp;
  c.inner = p_slow;
  c.outer = p_fast;
  return c;
}

/// Intersection points of two circles, sorted by ascending y (then x).
/// Radical line plus quadratic; the substitution solves for x in terms of y
/// unless the centers are vertically aligned, in which case the roles of x
/// and y are exchanged.
inline std::vector<Point2> circle_intersections(const Circle& a, const Circle& b) {
  const double rmax = std::max(a.radius, b.radius);
  const double tol = detail::kTangencyRel * rmax;
  const double d = distance(a.center, b.center);

  if (d <= tol && std::abs(a.radius - b.radius) <= tol)
    throw CoincidentCirclesError("circle_intersections: circles are identical");
  if (d <= tol) return {};  // concentric, distinct radii
  if (d > a.radius + b.radius + tol) return {};
  if (d < std::abs(a.radius - b.radius) - tol) return {};

  const Point2 u = (1.0 / d) * (b.center - a.center);
  if (std::abs(d - (a.radius + b.radius)) <= tol)
    return {a.center + a.radius * u};  // external tangency
  if (std::abs(d - std::abs(a.radius - b.radius)) <= tol) {
    // internal tangency: touch point lies beyond the larger circle's center
    if (a.radius >= b.radius) return {a.center + a.radius * u};
    return {a.center - a.radius * u};
  }

  const double dx = b.center.x - a.center.x;
  const double dy = b.center.y - a.center.y;
  const double rad = a.radius * a.radius - b.radius * b.radius -
                     a.center.x * a.center.x + b.center.x * b.center.x -
                     a.center.y * a.center.y + b.center.y * b.center.y;

  Point2 p1, p2;
  if (std::abs(dx) >= detail::kBranchRel * rmax) {
    // x = (rad - 2 dy y) / (2 dx) substituted into circle a
    const double A = (rad - 2.0 * dx * a.center.x) / (2.0 * dx);
    const double B = dy / dx;
    const double qa = B * B + 1.0;
    const double qh = A * B + a.center.y;  // half of the linear coefficient
    const double qc = A * A + a.center.y * a.center.y - a.radius * a.radius;
    const double disc = std::max(qh * qh - qa * qc, 0.0);
    const double root = std::sqrt(disc);
    const double y1 = (qh - root) / qa;
    const double y2 = (qh + root) / qa;
    p1 = {a.center.x + A - B * y1, y1};
    p2 = {a.center.x + A - B * y2, y2};
  } else {
    // vertically aligned centers: y = (rad - 2 dx x) / (2 dy) substituted
    const double A = (rad - 2.0 * dy * a.center.y) / (2.0 * dy);
    const double B = dx / dy;
    const double qa = B * B + 1.0;
    const double qh = A * B + a.center.x;
    const double qc = A * A + a.center.x * a.center.x - a.radius * a.radius;
    const double disc = std::max(qh * qh - qa * qc, 0.0);
    const double root = std::sqrt(disc);
    const double x1 = (qh - root) / qa;
    const double x2 = (qh + root) / qa;
    p1 = {x1, a.center.y + A - B * x1};
    p2 = {x2, a.center.y + A - B * x2};
  }
  if (distance(p1, p2) <= tol) return {{0.5 * (p1 + p2)}};
  if (p1.y > p2.y || (p1.y == p2.y && p1.x > p2.x)) std::swap(p1, p2);
  return {p1, p2};
}

/// Lowest point of the intersection of two pursuer-evader dominance disks
/// around the same evader. Solo when one disk contains the other or when a
/// disk's own lowest point lies inside the other disk; otherwise the lower
/// intersection point, captured simultaneously.
inline CapturePoint cooperative_lowest_point(Point2 p_a, Point2 p_b, Point2 e,
                                             double alpha_a, double alpha_b) {
  const Circle A = apollonius_circle(p_a, e, alpha_a);
  const Circle B = apollonius_circle(p_b, e, alpha_b);
  const double tol = detail::kTangencyRel * std::max(A.radius, B.radius);
  const double d = distance(A.center, B.center);

  auto solo = [](const Circle& c, int slot) {
    CapturePoint cp = lowest_point(c);
    cp.pursuers = {slot, -1};
    return cp;
  };

  // Identical circles: the game morphs into a single-pursuer game.
  if (d <= tol && std::abs(A.radius - B.radius) <= tol) return solo(A, 0);
  if (d + B.radius <= A.radius + tol) return solo(B, 1);  // disk B inside A
  if (d + A.radius <= B.radius + tol) return solo(A, 0);  // disk A inside B

  const CapturePoint la = solo(A, 0);
  if (distance(la.point, B.center) <= B.radius + tol) return la;
  const CapturePoint lb = solo(B, 1);
  if (distance(lb.point, A.center) <= A.radius + tol) return lb;

  const auto pts = circle_intersections(A, B);
  if (pts.empty())
    throw std::logic_error("cooperative_lowest_point: overlapping disks without intersection");
  CapturePoint cp;
  cp.point = pts.front();
  cp.mode = CaptureMode::Simultaneous;
  cp.pursuers = {0, 1};
  cp.pursuer_count = 2;
  return cp;
}

namespace detail {

/// Scalars of the closed-form simultaneous-capture height: the radical line
/// of the two pursuer-evader circles substituted into the pursuer-pair
/// circle gives the quadratic D y^2 - 2 F y + (...) = 0 whose lower root is
/// (F - sqrt(dx^2 G)) / D, with G = r^2 D - W^2.
struct CoopScalars {
  double xi, yi, ri;     // slow-pursuer/evader circle
  double xj, yj, rj;     // fast-pursuer/evader circle
  double xp, yp, rp;     // pursuer-pair circle
  double dx, dy;         // center offsets, slow minus fast
  double R, D, F, W, G;
};

inline CoopScalars coop_scalars(Point2 p_i, Point2 p_ip, Point2 e,
                                double alpha_i, double alpha_ip, double alpha_pp) {
  const Circle ci = apollonius_circle(p_i, e, alpha_i);
  const Circle cj = apollonius_circle(p_ip, e, alpha_ip);
  const Circle cp = pursuer_pair_circle(p_i, p_ip, alpha_pp);
  CoopScalars s;
  s.xi = ci.center.x; s.yi = ci.center.y; s.ri = ci.radius;
  s.xj = cj.center.x; s.yj = cj.center.y; s.rj = cj.radius;
  s.xp = cp.center.x; s.yp = cp.center.y; s.rp = cp.radius;
  s.dx = s.xi - s.xj;
  s.dy = s.yi - s.yj;
  s.R = s.ri * s.ri - s.rj * s.rj - s.xi * s.xi + s.xj * s.xj - s.yi * s.yi + s.yj * s.yj;
  s.D = s.dx * s.dx + s.dy * s.dy;
  s.F = s.yp * s.dx * s.dx - s.dy * (0.5 * s.R + s.xp * s.dx);
  s.W = 0.5 * s.R + s.xp * s.dx + s.yp * s.dy;
  s.G = s.rp * s.rp * s.D - s.W * s.W;
  return s;
}

}  // namespace detail

/// Closed-form capture height for simultaneous capture by a slow pursuer
/// p_i and a strictly faster p_iprime (alpha_pp = v_i / v_iprime < 1).
/// Cross-check path only: production geometry goes through
/// cooperative_lowest_point, which is valid for all speed ratios.
inline double vs_closed_form(Point2 p_i, Point2 p_iprime, Point2 e,
                             double alpha_i, double alpha_iprime, double alpha_pp) {
  const auto s = detail::coop_scalars(p_i, p_iprime, e, alpha_i, alpha_iprime, alpha_pp);
  const double len2 = std::max({s.ri * s.ri, s.rj * s.rj, 1e-300});
  if (s.D <= 1e-12 * len2)
    throw DegenerateConfigurationError("vs_closed_form: coincident circle centers (D ~ 0)");
  if (s.G <= 1e-12 * std::max(s.rp * s.rp * s.D, s.W * s.W))
    throw DegenerateConfigurationError("vs_closed_form: equal intersection heights (G ~ 0)");
  return (s.F - std::sqrt(s.dx * s.dx * s.G)) / s.D;
}

}  // namespace bddg
