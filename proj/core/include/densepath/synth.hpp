#pragma once

#include <cstdint>
#include <vector>

#include "densepath/scene.hpp"

namespace densepath {

// Deterministic synthetic lane-graph scenarios: straight, fork-left,
// fork-right and U-turn templates built from analytic curves sampled at 1 m.
// The target follows one uniformly chosen branch at a sampled speed with a
// Gaussian lateral offset that ramps in over the horizon and is clamped to
// stay on the lane, so every ground-truth endpoint lies on a lane.
struct GenConfig {
  int n_scenarios = 1000;
  // template mix, must sum to 1
  double w_straight = 0.25;
  double w_fork_left = 0.25;
  double w_fork_right = 0.25;
  double w_uturn = 0.25;
  double lane_width = 4.0;
  double speed_min = 6.0;   // m/s
  double speed_max = 9.0;   // m/s
  double noise_sigma = 0.5;  // lateral endpoint noise, meters
  std::uint64_t seed = 0;
  double horizon_s = 8.0;
  double history_s = 1.0;
  double parking_prob = 0.15;  // chance of an adjacent parking pseudo-lane
  int max_background = 3;
};

void validate_gen_config(const GenConfig& cfg);

// Index-addressable and order-independent: generate_one(cfg, i) is the i-th
// element of generate(cfg)'s stream.
Scenario generate_one(const GenConfig& cfg, std::uint64_t index);
std::vector<Scenario> generate(const GenConfig& cfg);

}  // namespace densepath
