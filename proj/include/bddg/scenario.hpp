#pragma once

// Scenario file loading and validation. One JSON document per engagement;
// unknown keys are a hard error so experiment typos fail loudly.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bddg/assignment.hpp"
#include "bddg/sim.hpp"
#include "bddg/state.hpp"

namespace bddg {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AgentSpec {
  double x = 0.0;
  double y = 0.0;
  double speed = 0.0;
};

struct ScenarioFile {
  std::vector<AgentSpec> pursuers;
  std::vector<AgentSpec> evaders;
  double dt = 1e-3;
  double capture_radius = 1e-3;
  std::optional<double> t_max;
  std::uint64_t seed = 0;

  GameState initial_state() const {
    std::vector<Point2> p, e;
    for (const auto& a : pursuers) p.push_back({a.x, a.y});
    for (const auto& a : evaders) e.push_back({a.x, a.y});
    return GameState::from_positions(p, e);
  }

  SpeedTable speed_table() const {
    SpeedTable t;
    for (const auto& a : pursuers) t.pursuer_speeds.push_back(a.speed);
    for (const auto& a : evaders) t.evader_speeds.push_back(a.speed);
    return t;
  }

  SimParams sim_params() const {
    SimParams p;
    p.dt = dt;
    p.capture_radius = capture_radius;
    p.t_max = t_max;
    return p;
  }
};

namespace detail {

inline AgentSpec parse_agent(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ScenarioError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "x" && it.key() != "y" && it.key() != "speed")
      throw ScenarioError(where + ": unknown field '" + it.key() + "'");
  AgentSpec a;
  for (const char* f : {"x", "y", "speed"}) {
    if (!j.contains(f)) throw ScenarioError(where + ": missing field '" + std::string(f) + "'");
    if (!j[f].is_number()) throw ScenarioError(where + ": field '" + std::string(f) + "' must be a number");
  }
  a.x = j["x"].get<double>();
  a.y = j["y"].get<double>();
  a.speed = j["speed"].get<double>();
  if (a.speed <= 0.0) throw ScenarioError(where + ": speed must be positive");
  if (a.y < 0.0) throw ScenarioError(where + ": y must be nonnegative (play is in y >= 0)");
  return a;
}

}  // namespace detail

inline ScenarioFile parse_scenario(const nlohmann::json& j) {
  if (!j.is_object()) throw ScenarioError("scenario: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "pursuers" && k != "evaders" && k != "dt" && k != "capture_radius" &&
        k != "t_max" && k != "seed")
      throw ScenarioError("scenario: unknown top-level key '" + k + "'");
  }
  for (const char* k : {"pursuers", "evaders"})
    if (!j.contains(k) || !j[k].is_array() || j[k].empty())
      throw ScenarioError(std::string("scenario: '") + k + "' must be a nonempty array");

  ScenarioFile s;
  int idx = 0;
  for (const auto& a : j["pursuers"])
    s.pursuers.push_back(detail::parse_agent(a, "pursuers[" + std::to_string(idx++) + "]"));
  idx = 0;
  for (const auto& a : j["evaders"])
    s.evaders.push_back(detail::parse_agent(a, "evaders[" + std::to_string(idx++) + "]"));

  if (j.contains("dt")) {
    s.dt = j["dt"].get<double>();
    if (s.dt <= 0.0) throw ScenarioError("scenario: dt must be positive");
  }
  if (j.contains("capture_radius")) {
    s.capture_radius = j["capture_radius"].get<double>();
    if (s.capture_radius <= 0.0) throw ScenarioError("scenario: capture_radius must be positive");
  }
  if (j.contains("t_max")) {
    s.t_max = j["t_max"].get<double>();
    if (*s.t_max <= 0.0) throw ScenarioError("scenario: t_max must be positive");
  }
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();

  if (s.pursuers.size() < s.evaders.size())
    throw ScenarioError("scenario: needs at least as many pursuers as evaders (N >= M); got N=" +
                        std::to_string(s.pursuers.size()) + ", M=" +
                        std::to_string(s.evaders.size()));
  return s;
}

inline ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  return parse_scenario(j);
}

}  // namespace bddg
