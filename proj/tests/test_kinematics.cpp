#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ntn/kinematics.hpp"
#include "ntn/rng.hpp"

using namespace ntn;

namespace {

Constellation default_constellation() {
  return Constellation(22, 0.0, 7800.0, 40030.0e3, 550.0e3, {1, 0, 0}, {0, 0});
}

// Shortest distance between two along-track coordinates on the wrapping line.
double circ_dist(double a, double b, double length) {
  const double d = std::fabs(a - b);
  return std::min(d, length - d);
}

// Reference implementation of the candidate window: wrap all coordinates,
// sort by distance to the source's wrapped coordinate (ties by index), keep
// the first k, then re-sort ascending by (wrapped, index).
std::vector<Candidate> window_oracle(const Constellation& c, const KinematicsConfig& cfg,
                                     const Vec3& src) {
  const double w = cfg.window_length;
  const double src_w = wrap_coord(c.track_coord(src), w);
  std::vector<std::pair<double, int>> all;
  for (int i = 0; i < c.count(); ++i) all.emplace_back(wrap_coord(c.coord(i), w), i);
  std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    return std::fabs(a.first - src_w) < std::fabs(b.first - src_w);
  });
  all.resize(cfg.candidate_count);
  std::sort(all.begin(), all.end());
  std::vector<Candidate> out;
  for (const auto& [wc, i] : all) out.push_back({i, wc, c.position_at(wc)});
  return out;
}

}  // namespace

TEST_CASE("wrap_coord reduces into [0, length)") {
  CHECK(wrap_coord(0.0, 10.0) == 0.0);
  CHECK(wrap_coord(10.0, 10.0) == 0.0);
  CHECK(wrap_coord(23.5, 10.0) == doctest::Approx(3.5));
  CHECK(wrap_coord(-2.0, 10.0) == doctest::Approx(8.0));
  CHECK(wrap_coord(40029000.0 + 78000.0, 40030000.0) == 77000.0);
}

TEST_CASE("wrap_coord is idempotent over random inputs") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double len = uniform(rng, 1e-3, 1e8);
    const double y = uniform(rng, -1e9, 1e9);
    const double w = wrap_coord(y, len);
    REQUIRE(w >= 0.0);
    REQUIRE(w < len);
    REQUIRE(wrap_coord(w, len) == w);
  }
}

TEST_CASE("step_hap integrates velocity then position") {
  const HapState h{{0, 0, 20.0e3}, {10, 0}, 20.0e3};
  const HapState n = step_hap(h, {1, 0}, 10.0);
  CHECK(n.velocity.x == 20.0);
  CHECK(n.velocity.y == 0.0);
  CHECK(n.position.x == 150.0);
  CHECK(n.position.y == 0.0);
  CHECK(n.position.z == 20.0e3);
  CHECK(n.altitude == 20.0e3);
}

TEST_CASE("step_hap at rest with no thrust stays put") {
  const HapState h{{5, -3, 50.0e3}, {0, 0}, 50.0e3};
  const HapState n = step_hap(h, {0, 0}, 10.0);
  CHECK(n.position == h.position);
  CHECK(n.velocity == h.velocity);
}

TEST_CASE("step_hap symmetric deceleration to rest") {
  const HapState h{{0, 0, 50.0e3}, {0, 5}, 50.0e3};
  const HapState n = step_hap(h, {0, -0.5}, 10.0);
  CHECK(n.velocity.x == 0.0);
  CHECK(n.velocity.y == 0.0);
  CHECK(n.position.y == 25.0);
}

TEST_CASE("step_hap rejects non-finite input") {
  const HapState h{{0, 0, 50.0e3}, {0, 0}, 50.0e3};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(step_hap(h, {nan, 0}, 10.0), std::invalid_argument);
  HapState bad = h;
  bad.velocity.x = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(step_hap(bad, {0, 0}, 10.0), std::invalid_argument);
}

TEST_CASE("altitude never drifts under long action sequences") {
  Rng rng(11);
  HapState h{{0, 0, 50.0e3}, {0, 0}, 50.0e3};
  for (int i = 0; i < 5000; ++i) {
    const Vec2 a = project_acceleration({uniform(rng, -9, 9), uniform(rng, -9, 9)}, 5.0);
    h = step_hap(h, a, 10.0);
    REQUIRE(h.position.z == 50.0e3);
  }
}

TEST_CASE("project_acceleration keeps feasible vectors and rescales the rest") {
  const Vec2 keep = project_acceleration({3, 4}, 5.0);
  CHECK(keep.x == 3.0);
  CHECK(keep.y == 4.0);
  const Vec2 cut = project_acceleration({6, 8}, 5.0);
  CHECK(cut.x == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(cut.y == doctest::Approx(4.0).epsilon(1e-12));
  const Vec2 zero = project_acceleration({0, 0}, 5.0);
  CHECK(zero.x == 0.0);
  CHECK(zero.y == 0.0);
}

TEST_CASE("projected accelerations always satisfy the norm bound") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double a_max = uniform(rng, 1e-3, 50);
    const Vec2 a{uniform(rng, -1e3, 1e3), uniform(rng, -1e3, 1e3)};
    const Vec2 p = project_acceleration(a, a_max);
    REQUIRE(norm(p) <= a_max + 1e-12);
    if (norm(a) > 0) {
      // Direction preserved: cross product is zero.
      REQUIRE(a.x * p.y - a.y * p.x == doctest::Approx(0.0).scale(norm(a)));
    }
  }
}

TEST_CASE("constellation constructor validates its inputs") {
  CHECK_THROWS_AS(Constellation(0, 0, 7800, 40030e3, 550e3, {1, 0, 0}, {0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Constellation(22, 0, 0, 40030e3, 550e3, {1, 0, 0}, {0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Constellation(22, 0, 7800, 0, 550e3, {1, 0, 0}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Constellation(22, 0, 7800, 40030e3, 550e3, {0, 0, 0}, {0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Constellation(22, 0, 7800, 40030e3, 550e3, {1, 0, 0.5}, {0, 0}),
                  std::invalid_argument);
}

TEST_CASE("constellation normalizes the orbit axis") {
  const Constellation c(4, 0, 7800, 40030e3, 550e3, {2, 0, 0}, {0, 0});
  CHECK(c.axis().x == 1.0);
  CHECK(c.axis().y == 0.0);
  CHECK(c.axis().z == 0.0);
}

TEST_CASE("satellite positions sit at the orbit altitude with wrapped coordinates") {
  const Constellation c = default_constellation();
  const double spacing = 40030.0e3 / 22.0;
  for (int i = 0; i < c.count(); ++i) {
    REQUIRE(c.coord(i) >= 0.0);
    REQUIRE(c.coord(i) < c.orbit_length());
    REQUIRE(c.position(i).z == 550.0e3);
    REQUIRE(c.coord(i) == doctest::Approx(i * spacing).epsilon(1e-12));
  }
}

TEST_CASE("propagate advances and wraps along the orbit") {
  const Constellation c(1, 40029000.0, 7800.0, 40030000.0, 550e3, {1, 0, 0}, {0, 0});
  const Constellation n = propagate(c, 10.0);
  CHECK(n.coord(0) == 77000.0);
}

TEST_CASE("propagate rejects non-positive dt") {
  const Constellation c = default_constellation();
  CHECK_THROWS_AS(propagate(c, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(propagate(c, -1.0), std::invalid_argument);
}

TEST_CASE("propagating twice by 5 s equals once by 10 s") {
  const Constellation c = default_constellation();
  const Constellation a = propagate(propagate(c, 5.0), 5.0);
  const Constellation b = propagate(c, 10.0);
  for (int i = 0; i < c.count(); ++i) {
    REQUIRE(a.coord(i) == doctest::Approx(b.coord(i)).epsilon(1e-12));
  }
}

TEST_CASE("one orbital period returns every satellite to its start") {
  const Constellation c = default_constellation();
  const double period = c.orbit_length() / c.orbit_speed();

  const Constellation once = propagate(c, period);
  for (int i = 0; i < c.count(); ++i) {
    REQUIRE(circ_dist(once.coord(i), c.coord(i), c.orbit_length()) < 1e-3);
  }

  Constellation accum = c;
  const int steps = 513;
  for (int s = 0; s < steps; ++s) accum = propagate(accum, period / steps);
  for (int i = 0; i < c.count(); ++i) {
    REQUIRE(circ_dist(accum.coord(i), c.coord(i), c.orbit_length()) < 1e-3);
  }
}

TEST_CASE("pairwise spacing survives propagation") {
  Constellation c = default_constellation();
  const double L = c.orbit_length();
  std::vector<double> gaps;
  for (int i = 0; i < c.count(); ++i) {
    gaps.push_back(wrap_coord(c.coord((i + 1) % c.count()) - c.coord(i), L));
  }
  Rng rng(5);
  for (int s = 0; s < 200; ++s) {
    c = propagate(c, uniform(rng, 0.1, 500.0));
    for (int i = 0; i < c.count(); ++i) {
      const double g = wrap_coord(c.coord((i + 1) % c.count()) - c.coord(i), L);
      REQUIRE(g == doctest::Approx(gaps[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("default window keeps the co-located pair nearest the source") {
  const Constellation c = default_constellation();
  const KinematicsConfig cfg;
  const auto cands = window_candidates(c, cfg, {0, 0, 0});
  REQUIRE(cands.size() == 2);
  CHECK(cands[0].sat_index == 0);
  CHECK(cands[0].wrapped == 0.0);
  CHECK(cands[1].sat_index == 11);
  CHECK(cands[1].wrapped == doctest::Approx(15000.0).epsilon(1e-9));
  for (const auto& cand : cands) {
    REQUIRE(cand.wrapped >= 0.0);
    REQUIRE(cand.wrapped < cfg.window_length);
    REQUIRE(cand.position.z == 550.0e3);
    REQUIRE(cand.position.x == cand.wrapped);
    REQUIRE(cand.position.y == 0.0);
  }
}

TEST_CASE("window degenerates to the identity when it spans the whole orbit") {
  const Constellation c = default_constellation();
  KinematicsConfig cfg;
  cfg.window_length = c.orbit_length();
  cfg.candidate_count = c.count();
  const auto cands = window_candidates(c, cfg, {0, 0, 0});
  REQUIRE(cands.size() == 22);
  for (int i = 0; i < 22; ++i) {
    REQUIRE(cands[i].sat_index == i);
    REQUIRE(cands[i].wrapped == c.coord(i));
  }
}

TEST_CASE("window orders candidates by wrapped coordinate") {
  // Two satellites whose wrapped coordinates are 100 km and 1919.5 km.
  const Constellation c(2, 100.0e3, 7800.0, 11639.0e3, 550e3, {1, 0, 0}, {0, 0});
  KinematicsConfig cfg;
  cfg.candidate_count = 2;
  const auto cands = window_candidates(c, cfg, {0, 0, 0});
  REQUIRE(cands.size() == 2);
  CHECK(cands[0].sat_index == 0);
  CHECK(cands[0].wrapped == doctest::Approx(100.0e3).epsilon(1e-12));
  CHECK(cands[1].sat_index == 1);
  CHECK(cands[1].wrapped == doctest::Approx(1919.5e3).epsilon(1e-12));
}

TEST_CASE("window ties break toward the lower satellite index") {
  // Both satellites wrap to coordinate 0.
  const Constellation c(2, 0.0, 7800.0, 8.0e6, 550e3, {1, 0, 0}, {0, 0});
  KinematicsConfig cfg;
  cfg.candidate_count = 2;
  const auto cands = window_candidates(c, cfg, {0, 0, 0});
  REQUIRE(cands.size() == 2);
  CHECK(cands[0].wrapped == 0.0);
  CHECK(cands[1].wrapped == 0.0);
  CHECK(cands[0].sat_index == 0);
  CHECK(cands[1].sat_index == 1);
}

TEST_CASE("window validates candidate count and window length") {
  const Constellation c(2, 0.0, 7800.0, 8.0e6, 550e3, {1, 0, 0}, {0, 0});
  KinematicsConfig cfg;
  cfg.candidate_count = 3;
  CHECK_THROWS_AS(window_candidates(c, cfg, {0, 0, 0}), std::invalid_argument);
  cfg.candidate_count = 2;
  cfg.window_length = 9.0e6;  // longer than the orbit
  CHECK_THROWS_AS(window_candidates(c, cfg, {0, 0, 0}), std::invalid_argument);
  cfg.window_length = 0.0;
  CHECK_THROWS_AS(window_candidates(c, cfg, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("window matches a brute-force selection over random scenarios") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int count = 1 + uniform_int(rng, 40);
    const double length = uniform(rng, 1e6, 5e7);
    const double phase = uniform(rng, 0, length);
    Constellation c(count, phase, uniform(rng, 100, 1e4), length, uniform(rng, 1e5, 1e6),
                    {1, 0, 0}, {0, 0});
    if (trial % 3 == 0) c = propagate(c, uniform(rng, 1, 1e4));
    KinematicsConfig cfg;
    cfg.window_length = uniform(rng, length / 20, length);
    cfg.candidate_count = 1 + uniform_int(rng, count);
    const Vec3 src{uniform(rng, -length, length), uniform(rng, -1e5, 1e5), 0};

    const auto got = window_candidates(c, cfg, src);
    const auto want = window_oracle(c, cfg, src);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      REQUIRE(got[i].sat_index == want[i].sat_index);
      REQUIRE(got[i].wrapped == want[i].wrapped);
      REQUIRE(got[i].position == want[i].position);
    }
  }
}
