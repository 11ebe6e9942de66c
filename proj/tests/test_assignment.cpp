#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "bddg/assignment.hpp"
#include "bddg/oracle.hpp"
#include "helpers.hpp"

using namespace bddg;
using Catch::Approx;

namespace {

std::vector<std::vector<int>> sets_of(const Assignment& a) { return a.pursuers_for; }

double brute_force_max(const std::vector<std::vector<double>>& score) {
  const int n = static_cast<int>(score.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1e300;
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += score[i][perm[i]];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("pair_feasible") {
  GameState far = GameState::from_positions({{0, 10}}, {{0, 1}});
  SpeedTable fast{{1.0}, {0.9}};
  CHECK_FALSE(pair_feasible(0, 0, far, fast));

  CHECK(pair_feasible(0, 0, testutil::example1_state(), testutil::example1_speeds()));

  // Circle tangent to the border: capture exactly on the line counts as lost.
  GameState tangent = GameState::from_positions({{0, 4}}, {{0, 2}});
  SpeedTable half{{1.0}, {0.5}};
  CHECK_FALSE(pair_feasible(0, 0, tangent, half));

  // Slower pursuer is assignment-forbidden outright.
  GameState near = GameState::from_positions({{0, 5}}, {{0, 6}});
  SpeedTable slow{{1.0}, {1.2}};
  CHECK_FALSE(pair_feasible(0, 0, near, slow));
}

TEST_CASE("enumerate_assignments 1v1") {
  GameState s = GameState::from_positions({{0, 0}}, {{0, 3}});
  SpeedTable v{{1.0}, {0.5}};
  const auto rows = enumerate_assignments(s, v);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].feasible);
  CHECK(rows[0].value == Approx(2.0));
}

TEST_CASE("enumerate_assignments reproduces the 3v3 feasibility pattern") {
  const auto rows = enumerate_assignments(testutil::fig2_state(), testutil::fig2_speeds());
  std::vector<std::vector<std::vector<int>>> feasible;
  for (const auto& r : rows)
    if (r.feasible) feasible.push_back(sets_of(r));
  REQUIRE(feasible.size() == 4);
  // Every permutation avoiding the P1-E3 pairing, and nothing else.
  const std::set<std::vector<std::vector<int>>> got(feasible.begin(), feasible.end());
  const std::set<std::vector<std::vector<int>>> want = {
      {{0}, {1}, {2}},  // P1-E1, P2-E2, P3-E3
      {{0}, {2}, {1}},  // P1-E1, P3-E2, P2-E3
      {{1}, {0}, {2}},  // P2-E1, P1-E2, P3-E3
      {{2}, {0}, {1}},  // P3-E1, P1-E2, P2-E3
  };
  CHECK(got == want);
  // Rows using P1-E3 are enumerated but flagged infeasible.
  CHECK(rows.size() == 6);
}

TEST_CASE("enumerate_assignments reproduces the 3v2 six-row structure") {
  const auto rows = enumerate_assignments(testutil::table1_state(), testutil::table1_speeds());
  REQUIRE(rows.size() == 6);
  std::multiset<std::vector<std::vector<int>>> got;
  for (const auto& r : rows) {
    CHECK(r.feasible);
    got.insert(sets_of(r));
  }
  const std::multiset<std::vector<std::vector<int>>> want = {
      {{0, 1}, {2}},  // pair (P1,P2) on E1 helps, P3 solo on E2
      {{0}, {1, 2}},  // pair (P2,P3) on E2 helps, P1 solo on E1
      {{2}, {1}},     // pair (P1,P2) on E2 reduced to P2, P3 on E1
      {{1}, {0}},     // pair (P2,P3) on E1 reduced to P2, P1 on E2
      {{0}, {1}},     // pair (P1,P3) on E1 reduced to P1, P2 on E2
      {{1}, {0, 2}},  // pair (P1,P3) on E2 helps, P2 solo on E1
  };
  CHECK(got == want);
}

TEST_CASE("enumerate_assignments guards") {
  std::vector<Point2> many_p(9, Point2{0, 1}), many_e(8, Point2{0, 5});
  for (std::size_t i = 0; i < many_p.size(); ++i) many_p[i].x = static_cast<double>(i);
  for (std::size_t j = 0; j < many_e.size(); ++j) many_e[j].x = static_cast<double>(j);
  GameState big = GameState::from_positions(many_p, many_e);
  SpeedTable v{std::vector<double>(9, 1.0), std::vector<double>(8, 0.5)};
  CHECK_THROWS_AS(enumerate_assignments(big, v), EnumerationLimitError);

  GameState few = GameState::from_positions({{0, 1}}, {{0, 5}, {1, 5}});
  SpeedTable v2{{1.0}, {0.5, 0.5}};
  CHECK_THROWS_AS(enumerate_assignments(few, v2), std::invalid_argument);
}

TEST_CASE("optimal_assignment on example 1") {
  const auto best = optimal_assignment(testutil::example1_state(), testutil::example1_speeds());
  CHECK(best.value == Approx(10.696).margin(1e-3));
  CHECK(best.pursuers_for == std::vector<std::vector<int>>{{0}, {1}});

  // Swapping pursuer labels keeps the same physical matching.
  GameState swapped = GameState::from_positions({{9.3, 4.5}, {-1.5, 4.2}},
                                                {{4.1, 11.0}, {5.5, 12.2}});
  SpeedTable sw{{1.04, 1.0}, {0.81, 0.77}};
  const auto best2 = optimal_assignment(swapped, sw);
  CHECK(best2.value == Approx(best.value).epsilon(1e-12));
  CHECK(best2.pursuers_for == std::vector<std::vector<int>>{{1}, {0}});
}

TEST_CASE("optimal_assignment tie-break on the dispersal surface") {
  const auto rows = enumerate_assignments(testutil::dispersal_state(), testutil::dispersal_speeds());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].value == Approx(rows[1].value).epsilon(1e-9));
  const auto best = optimal_assignment(testutil::dispersal_state(), testutil::dispersal_speeds());
  CHECK(best.pursuers_for == std::vector<std::vector<int>>{{0}, {1}});
}

TEST_CASE("optimal_assignment outside the win region") {
  GameState s = GameState::from_positions({{0, 10}}, {{0, 1}});
  SpeedTable v{{1.0}, {0.9}};
  CHECK_THROWS_AS(optimal_assignment(s, v), NoFeasibleAssignmentError);
}

TEST_CASE("hungarian_assign basics") {
  const auto r = hungarian_assign({{2, 1}, {1, 3}});
  CHECK(r.match == std::vector<int>{0, 1});
  CHECK(r.total == Approx(5.0));

  const auto one = hungarian_assign({{7}});
  CHECK(one.match == std::vector<int>{0});
  CHECK(one.total == Approx(7.0));

  CHECK_THROWS_AS(hungarian_assign({{1, 2}, {3}}), NonSquareMatrixError);
}

TEST_CASE("hungarian_assign matches permutation brute force") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> score(6, std::vector<double>(6));
    for (auto& row : score)
      for (auto& x : row) x = val(rng);
    const auto r = hungarian_assign(score);
    CHECK(r.total == Approx(brute_force_max(score)).margin(1e-9));
  }
}

TEST_CASE("optimal_assignment equals hungarian for square all-feasible games") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> px(-8.0, 8.0), py(1.0, 5.0), ex(-8.0, 8.0),
      ey(9.0, 14.0), ve(0.4, 0.7);
  int done = 0;
  while (done < 30) {
    GameState s = GameState::from_positions(
        {{px(rng), py(rng)}, {px(rng), py(rng)}, {px(rng), py(rng)}},
        {{ex(rng), ey(rng)}, {ex(rng), ey(rng)}, {ex(rng), ey(rng)}});
    SpeedTable v{{1.0, 1.0, 1.0}, {ve(rng), ve(rng), ve(rng)}};
    bool all = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) all = all && pair_feasible(i, j, s, v);
    if (!all) continue;
    std::vector<std::vector<double>> score(3, std::vector<double>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        score[i][j] =
            lowest_point(apollonius_circle(s.pursuers[i].pos, s.evaders[j].pos, v.alpha(i, j)))
                .point.y;
    const auto hung = hungarian_assign(score);
    const auto best = optimal_assignment(s, v);
    CHECK(best.value == Approx(hung.total).margin(1e-9));
    ++done;
  }
}

TEST_CASE("optimal_assignment is invariant under relabeling") {
  std::mt19937_64 rng(13);
  int done = 0;
  while (done < 20) {
    const auto inst = testutil::random_2v2(rng);
    double base;
    try {
      base = optimal_assignment(inst.state, inst.speeds).value;
    } catch (const NoFeasibleAssignmentError&) {
      continue;
    }
    GameState relabeled = inst.state;
    std::swap(relabeled.pursuers[0], relabeled.pursuers[1]);
    std::swap(relabeled.evaders[0], relabeled.evaders[1]);
    SpeedTable sw = inst.speeds;
    std::swap(sw.pursuer_speeds[0], sw.pursuer_speeds[1]);
    std::swap(sw.evader_speeds[0], sw.evader_speeds[1]);
    CHECK(optimal_assignment(relabeled, sw).value == Approx(base).epsilon(1e-12));
    ++done;
  }
}

TEST_CASE("removing a pursuer never raises the value") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> px(-8.0, 8.0), py(0.5, 5.0), ex(-4.0, 4.0),
      ey(7.0, 12.0), ve(0.45, 0.7);
  int done = 0;
  while (done < 20) {
    GameState s3 = GameState::from_positions(
        {{px(rng), py(rng)}, {px(rng), py(rng)}, {px(rng), py(rng)}},
        {{ex(rng), ey(rng)}, {ex(rng), ey(rng)}});
    SpeedTable v3{{1.0, 1.1, 1.2}, {ve(rng), ve(rng)}};
    double full;
    try {
      full = optimal_assignment(s3, v3).value;
    } catch (const NoFeasibleAssignmentError&) {
      continue;
    }
    for (int drop = 0; drop < 3; ++drop) {
      GameState s2;
      SpeedTable v2;
      for (int i = 0; i < 3; ++i) {
        if (i == drop) continue;
        s2.pursuers.push_back(s3.pursuers[i]);
        v2.pursuer_speeds.push_back(v3.pursuer_speeds[i]);
      }
      s2.evaders = s3.evaders;
      v2.evader_speeds = v3.evader_speeds;
      try {
        CHECK(optimal_assignment(s2, v2).value <= full + 1e-9);
      } catch (const NoFeasibleAssignmentError&) {
        // Losing a pursuer may forfeit the game entirely; that is allowed.
      }
    }
    ++done;
  }
}

TEST_CASE("game_of_kind verdicts") {
  const auto win = game_of_kind(testutil::example1_state(), testutil::example1_speeds());
  CHECK(win.pursuers_win());
  CHECK(win.unstoppable_evaders.empty());

  GameState lost = GameState::from_positions({{0, 10}}, {{0, 1}});
  SpeedTable v{{1.0}, {0.9}};
  const auto report = game_of_kind(lost, v);
  CHECK_FALSE(report.pursuers_win());
  CHECK(report.unstoppable_evaders == std::vector<int>{0});

  // Both solos lose but the cooperative pair holds the evader above the
  // border.
  GameState rescue = testutil::rescue_state();
  SpeedTable rv = testutil::rescue_speeds_distinct();
  CHECK_FALSE(pair_feasible(0, 0, rescue, rv));
  CHECK_FALSE(pair_feasible(1, 0, rescue, rv));
  const auto saved = game_of_kind(rescue, rv);
  CHECK(saved.pursuers_win());
  REQUIRE(saved.best_assignment.plans[0]);
  CHECK(saved.best_assignment.plans[0]->simultaneous());
  const auto grid = grid_lowest_point(rescue.evaders[0].pos,
                                      {{rescue.pursuers[0].pos, rv.alpha(0, 0)},
                                       {rescue.pursuers[1].pos, rv.alpha(1, 0)}},
                                      2e-3);
  REQUIRE(grid);
  CHECK(std::abs(saved.best_assignment.plans[0]->point.y - grid->y) <= 4e-3);
}

TEST_CASE("a third pursuer on one evader is redundant") {
  std::mt19937_64 rng(3);
  const double res = 5e-3;
  int done = 0;
  while (done < 25) {
    const auto inst = testutil::random_3v1(rng);
    const Point2 e = inst.state.evaders[0].pos;
    bool valid = true;
    for (int i = 0; i < 3; ++i)
      if (distance(inst.state.pursuers[i].pos, e) < 0.5) valid = false;
    if (!valid) continue;
    double best = -1e300;
    for (int i = 0; i < 3; ++i) {
      const Circle c = apollonius_circle(inst.state.pursuers[i].pos, e, inst.speeds.alpha(i, 0));
      best = std::max(best, c.center.y - c.radius);
    }
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        best = std::max(best, cooperative_lowest_point(inst.state.pursuers[a].pos,
                                                       inst.state.pursuers[b].pos, e,
                                                       inst.speeds.alpha(a, 0),
                                                       inst.speeds.alpha(b, 0))
                                  .point.y);
    if (best < 0.1) continue;
    std::vector<PursuerConstraint> cons;
    for (int i = 0; i < 3; ++i)
      cons.push_back({inst.state.pursuers[i].pos, inst.speeds.alpha(i, 0)});
    const auto grid = grid_lowest_point(e, cons, res);
    REQUIRE(grid);
    CHECK(std::abs(best - grid->y) <= 2.0 * res);
    ++done;
  }
}
