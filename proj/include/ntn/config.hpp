#pragma once

#include <string>
#include <vector>

#include "ntn/channel.hpp"
#include "ntn/kinematics.hpp"
#include "ntn/vec.hpp"

// Scenario and training configuration. Files are plain text, one
// "key = value" per line, '#' comments; positions and lengths are given in
// kilometers (converted to meters on load), everything else in SI.

namespace ntn {

struct ScenarioConfig {
  Vec3 src_pos{0, 0, 0};          // m
  Vec3 dst_pos{4.0e6, 0, 0};      // m
  RadioParams radio;              // B = 1e9 Hz, snr0 = 1e9, alpha = 2
  KinematicsConfig kin;           // dt = 10 s, a_max = 5, window 4e6 m, 2 candidates

  int sat_count = 22;
  double sat_speed = 7800.0;      // m/s
  double sat_altitude = 550.0e3;  // m
  double orbit_length = 40030.0e3;  // m
  double sat_phase = 0.0;         // satellite 0 initial along-track coordinate, m
  Vec3 orbit_axis{1, 0, 0};       // horizontal direction of motion
  Vec2 track_origin{0, 0};        // ground point of along-track coordinate 0

  Vec3 hap_init{2.072e6, 0, 50.0e3};  // m; z is the flight altitude
  Vec2 hap_init_vel{0, 0};            // m/s

  int episode_slots = 513;
  int accel_levels = 5;           // per-axis acceleration grid size

  // Sigmoid reward center/scale in bps. NaN means "auto": resolved by
  // calibrate_reward from the fixed-HAP baseline before an Env is built.
  double reward_mu = nan_value();
  double reward_sigma = nan_value();

  bool use_buffers = false;       // default: bufferless bottleneck rate
  double sweep_grid = 95.0e3;     // relay placement grid step, m

  static double nan_value();
  Constellation make_constellation() const;
  HapState make_hap() const;
  int candidate_count() const { return kin.candidate_count; }
  int action_count() const { return kin.candidate_count * accel_levels * accel_levels; }
  // Candidate positions, HAP position and velocity, hop distances, hop
  // rates, and the direct-link rate.
  int obs_dim() const { return 3 * kin.candidate_count + 12; }
  bool reward_calibrated() const;
};

struct DqnConfig {
  std::vector<int> hidden_dims{300, 300, 200};
  double lr = 1e-4;
  double gamma = 0.95;
  int batch = 500;
  int target_sync = 500;          // gradient updates between target copies
  long long iterations = 500000;  // environment steps
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_decay_frac = 0.2;    // fraction of iterations spent decaying
  int replay_capacity = 100000;
  int steps_per_update = 1;       // env steps per gradient update
  double grad_clip = 0.0;         // global L2 clip; 0 disables
  bool mean_loss = false;         // false: summed squared error
};

struct FileConfig {
  ScenarioConfig scenario;
  DqnConfig dqn;
};

// Throws std::invalid_argument naming the offending field.
void validate(const ScenarioConfig& cfg);
void validate(const DqnConfig& cfg, const ScenarioConfig& scenario);

FileConfig parse_config(const std::string& text);
FileConfig load_config(const std::string& path);

// Full key=value rendering of a resolved config (kilometer keys rendered in
// kilometers). parse_config(render_config(c)) reproduces c up to one unit
// round-trip ulp.
std::string render_config(const FileConfig& cfg);

}  // namespace ntn
