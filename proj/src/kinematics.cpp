#include "ntn/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ntn {

double wrap_coord(double y, double length) {
  double r = std::fmod(y, length);
  if (r < 0) r += length;
  if (r >= length) r = 0;  // fmod(-eps, L) + L can round up to L exactly
  return r;
}

HapState step_hap(const HapState& h, const Vec2& accel, double dt) {
  if (!is_finite(h.position) || !is_finite(h.velocity) || !is_finite(accel) ||
      !std::isfinite(dt)) {
    throw std::invalid_argument("step_hap: non-finite input");
  }
  HapState out = h;
  out.velocity = h.velocity + dt * accel;
  out.position.x = h.position.x + h.velocity.x * dt + 0.5 * accel.x * dt * dt;
  out.position.y = h.position.y + h.velocity.y * dt + 0.5 * accel.y * dt * dt;
  out.position.z = h.altitude;
  return out;
}

Vec2 project_acceleration(const Vec2& accel, double a_max) {
  if (!is_finite(accel)) throw std::invalid_argument("project_acceleration: non-finite input");
  const double n = norm(accel);
  if (n <= a_max) return accel;
  return (a_max / n) * accel;
}

Constellation::Constellation(int count, double phase, double speed, double orbit_length,
                             double altitude, const Vec3& axis, const Vec2& track_origin) {
  if (count < 1) throw std::invalid_argument("constellation: count must be >= 1");
  if (!(orbit_length > 0)) throw std::invalid_argument("constellation: orbit_length must be > 0");
  if (!(speed > 0)) throw std::invalid_argument("constellation: orbit speed must be > 0");
  const double axis_norm = norm(axis);
  if (!(axis_norm > 0) || !is_finite(axis)) {
    throw std::invalid_argument("constellation: orbit_axis must be a nonzero vector");
  }
  if (axis.z != 0) {
    throw std::invalid_argument("constellation: orbit_axis must be horizontal (z = 0)");
  }
  speed_ = speed;
  length_ = orbit_length;
  altitude_ = altitude;
  axis_ = (1.0 / axis_norm) * axis;
  origin_ = {track_origin.x, track_origin.y, altitude};
  const double spacing = orbit_length / count;
  coords_.resize(count);
  for (int i = 0; i < count; ++i) coords_[i] = wrap_coord(phase + i * spacing, orbit_length);
}

Constellation propagate(const Constellation& c, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("propagate: dt must be > 0");
  Constellation out = c;
  const double step = c.speed_ * dt;
  for (double& y : out.coords_) y = wrap_coord(y + step, c.length_);
  return out;
}

std::vector<Candidate> window_candidates(const Constellation& c, const KinematicsConfig& cfg,
                                         const Vec3& src) {
  const int n = c.count();
  const int keep = cfg.candidate_count;
  if (keep < 1 || keep > n) {
    throw std::invalid_argument("window_candidates: candidate_count out of range");
  }
  if (!(cfg.window_length > 0) || cfg.window_length > c.orbit_length()) {
    throw std::invalid_argument("window_candidates: window_length out of range");
  }
  const double src_w = wrap_coord(c.track_coord(src), cfg.window_length);

  std::vector<std::pair<double, int>> wrapped(n);  // (wrapped coord, sat index)
  for (int i = 0; i < n; ++i) wrapped[i] = {wrap_coord(c.coord(i), cfg.window_length), i};
  std::sort(wrapped.begin(), wrapped.end(), [src_w](const auto& a, const auto& b) {
    const double da = std::abs(a.first - src_w);
    const double db = std::abs(b.first - src_w);
    if (da != db) return da < db;
    return a.second < b.second;
  });
  wrapped.resize(keep);
  std::sort(wrapped.begin(), wrapped.end());  // ascending coord, ties by index

  std::vector<Candidate> out(keep);
  for (int j = 0; j < keep; ++j) {
    out[j].sat_index = wrapped[j].second;
    out[j].wrapped = wrapped[j].first;
    out[j].position = c.position_at(wrapped[j].first);
  }
  return out;
}

}  // namespace ntn
