#pragma once

#include <utility>
#include <vector>

#include "ntn/channel.hpp"
#include "ntn/config.hpp"
#include "ntn/kinematics.hpp"
#include "ntn/trace.hpp"

// The slotted decision process: observe the candidate window and last
// realized link state, pick (satellite, acceleration) as one discrete
// action, advance the world, collect a sigmoid-shaped reward.

namespace ntn {

struct DecodedAction {
  int sat_choice = 0;  // index into the candidate window
  Vec2 accel;          // m/s^2, already norm-projected
};

// idx = sat_choice * levels^2 + ix * levels + iy; each axis maps its level
// to a uniform grid on [-a_max, +a_max], then the pair is norm-projected.
// encode/decode is a bijection on [0, candidate_count * levels^2).
DecodedAction decode_action(int idx, int candidate_count, int accel_levels, double a_max);

// Logistic reward 1 / (1 + exp(-(rate - mu) / sigma)), clamped to
// [1e-12, 1 - 1e-12] so the open-interval contract survives saturation.
double reward_value(double rate, double mu, double sigma);

struct StepInfo {
  int slot = 0;                    // completed slots so far
  int sat_global_idx = -1;
  Candidate chosen;                // post-move wrapped coordinate/position
  std::vector<Candidate> window;   // candidates the action indexed into
  double d1 = 0, d2 = 0, d3 = 0;   // realized link distances, m
  HopCapacities caps;
  HopRates rates;                  // realized (equals caps when bufferless)
  double e2e = 0;
  HapState hap;                    // post-move
  Vec2 accel;                      // applied acceleration
};

struct StepOutcome {
  std::vector<double> obs;
  double reward = 0;
  bool done = false;
  StepInfo info;
};

// Deterministic world: there is no seed because nothing in the dynamics is
// random (all randomness belongs to the acting policy). Requires a
// calibrated reward (finite mu/sigma); see calibrate_reward.
class Env {
 public:
  explicit Env(const ScenarioConfig& cfg);

  std::vector<double> reset();
  StepOutcome step(int action_idx);

  int obs_dim() const { return cfg_.obs_dim(); }
  int action_dim() const { return cfg_.action_count(); }
  bool done() const { return done_; }
  int slot() const { return slot_; }
  const ScenarioConfig& cfg() const { return cfg_; }
  const std::vector<Candidate>& window() const { return window_; }

  SlotRecord record(const StepOutcome& out) const;  // trace row for a step

 private:
  std::vector<double> make_obs() const;

  ScenarioConfig cfg_;
  double direct_rate_ = 0;  // src->dst capacity, constant over the episode
  Constellation constellation_;
  HapState hap_;
  BufferState buffers_;
  std::vector<Candidate> window_;  // at the current (observed) geometry
  double last_d_[3] = {0, 0, 0};   // realized distances of the last slot
  double last_r_[3] = {0, 0, 0};   // realized rates of the last slot
  int slot_ = 0;
  bool done_ = false;
};

// (mu, sigma) from a per-slot rate trace: mu is the mean, sigma the largest
// absolute deviation from it (falls back to mu when the trace is constant).
std::pair<double, double> reward_calibration(const std::vector<double>& rates);

// Resolves reward_mu/reward_sigma from the fixed-HAP placement baseline
// (grid sweep at the HAP altitude, then reward_calibration on the
// argmax trace). No-op when both are already set.
void calibrate_reward(ScenarioConfig& cfg);

}  // namespace ntn
