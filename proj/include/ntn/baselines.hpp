#pragma once

#include <string>
#include <vector>

#include "ntn/config.hpp"
#include "ntn/kinematics.hpp"
#include "ntn/neural.hpp"
#include "ntn/trace.hpp"

// Deterministic comparison schemes: direct transmission, satellite-only
// two-hop relaying, and a static relay placed by exhaustive grid search.
// Every scheme consumes the identical constellation trajectory and the same
// candidate window as the learned policy, so differences are attributable
// to relaying strategy alone.

namespace ntn {

struct SchemeResult {
  std::string scheme;
  std::vector<double> rates;  // delivered end-to-end rate per slot, bps
  double mean_rate = 0;       // arithmetic mean of rates
  double spectral_efficiency = 0;  // mean_rate / bandwidth
  bool has_relay = false;
  Vec3 relay;                 // set when has_relay
  std::vector<SlotRecord> trace;
};

// Candidate windows at each slot's post-propagation geometry
// (t = n*dt, n = 1..episode_slots). Shared by every scheme.
std::vector<std::vector<Candidate>> candidate_schedule(const ScenarioConfig& cfg);

// Constant-rate single hop Src->Dst.
SchemeResult direct_rate(const ScenarioConfig& cfg);

// Two-hop Src->SAT->Dst; per slot the window candidate with the largest
// min(src-sat, sat-dst) capacity (first maximizer in window order).
SchemeResult sat_only(const ScenarioConfig& cfg);

// Three-hop Src->SAT->relay->Dst with the relay pinned at position; per
// slot the window candidate with the largest bottleneck rate. position must
// differ from Src and Dst (path-loss singularity).
SchemeResult fixed_relay_eval(const Vec3& position, const ScenarioConfig& cfg);

struct SweepResult {
  SchemeResult best;   // fixed_relay_eval at the argmax
  int grid_points = 0; // positions evaluated
};

// Exhaustive placement search on the square [0, |dst-src|]^2 at the given
// altitude, step grid_step along each axis; grid points coinciding with Src
// or Dst are skipped. Ties go to the lexicographically smallest (x, y).
SweepResult fixed_relay_sweep(const ScenarioConfig& cfg, double grid_step, double relay_altitude);

struct ComparisonRow {
  std::string scheme;
  double mean_rate = 0;
  double spectral_efficiency = 0;
  bool has_relay = false;
  Vec3 relay;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::vector<SchemeResult> results;  // same order as rows
  std::string csv;  // scheme,mean_rate_bps,spectral_efficiency,relay_x_km,relay_y_km,relay_z_km
};

// All schemes at the configured sweep grid; with trained parameters, also a
// greedy rollout of the policy ("dqn" row). Schemes appear in fixed order:
// direct, sat_only, fixed_ground, fixed_hap[, dqn].
Comparison compare_schemes(const ScenarioConfig& cfg, const MlpParams* trained = nullptr);

}  // namespace ntn
