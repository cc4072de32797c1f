#pragma once

#include <vector>

#include "ntn/vec.hpp"

// World motion: a HAP flying as a horizontal double integrator at fixed
// altitude, and a string of equally spaced satellites on one circular orbit
// unrolled to a wrapping line.

namespace ntn {

struct HapState {
  Vec3 position;        // m; z is the altitude and never changes
  Vec2 velocity;        // m/s, horizontal
  double altitude = 0;  // m
};

struct KinematicsConfig {
  double dt = 10.0;              // slot length, s
  double a_max = 5.0;            // acceleration norm bound, m/s^2
  double window_length = 4.0e6;  // coordinate-space window, m
  int candidate_count = 2;       // satellites kept in the window
};

// Reduce y into [0, length).
double wrap_coord(double y, double length);

// v' = v + a*dt, p' = p + v*dt + a*dt^2/2. The caller is responsible for
// ||a|| <= a_max (see project_acceleration); non-finite inputs are rejected.
HapState step_hap(const HapState& h, const Vec2& accel, double dt);

// Returns accel unchanged when ||accel|| <= a_max, otherwise rescaled to
// norm a_max with direction preserved.
Vec2 project_acceleration(const Vec2& accel, double a_max);

// Equally spaced satellites on one orbital track. The scalar along-track
// coordinates are the source of truth; 3-D positions are
// origin + coord * axis with origin.z = altitude and a horizontal axis.
class Constellation {
 public:
  Constellation(int count, double phase, double speed, double orbit_length,
                double altitude, const Vec3& axis, const Vec2& track_origin);

  int count() const { return static_cast<int>(coords_.size()); }
  double orbit_speed() const { return speed_; }
  double orbit_length() const { return length_; }
  double altitude() const { return altitude_; }
  const Vec3& axis() const { return axis_; }
  const Vec3& origin() const { return origin_; }

  double coord(int i) const { return coords_[i]; }     // in [0, orbit_length)
  Vec3 position(int i) const { return position_at(coords_[i]); }
  Vec3 position_at(double coord) const { return origin_ + coord * axis_; }

  // Along-track coordinate of an arbitrary point (projection on the axis).
  double track_coord(const Vec3& p) const { return dot(p - origin_, axis_); }

  friend Constellation propagate(const Constellation& c, double dt);

 private:
  std::vector<double> coords_;
  double speed_ = 0;
  double length_ = 0;
  double altitude_ = 0;
  Vec3 axis_;
  Vec3 origin_;
};

// Advance every satellite by speed*dt along the track, wrapped mod
// orbit_length. dt must be > 0.
Constellation propagate(const Constellation& c, double dt);

struct Candidate {
  int sat_index = 0;     // global index in the constellation
  double wrapped = 0;    // along-track coordinate mod window_length, m
  Vec3 position;         // effective position: origin + wrapped * axis
};

// Wraps every satellite's along-track coordinate modulo cfg.window_length
// and keeps the cfg.candidate_count satellites whose wrapped coordinate is
// nearest the source's wrapped coordinate (ties to the lower satellite
// index). Result sorted by wrapped coordinate ascending, ties by index.
std::vector<Candidate> window_candidates(const Constellation& c, const KinematicsConfig& cfg,
                                         const Vec3& src);

}  // namespace ntn
