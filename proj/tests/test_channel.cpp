#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ntn/channel.hpp"
#include "ntn/rng.hpp"

using namespace ntn;

TEST_CASE("link_distance is the Euclidean norm") {
  CHECK(link_distance({0, 0, 0}, {3e6, 4e6, 0}) == 5e6);
  CHECK(link_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(link_distance({0, 0, 0}, {0, 0, 550e3}) == 550e3);
  CHECK(link_distance({1e6, 0, 0}, {0, 0, 0}) == link_distance({0, 0, 0}, {1e6, 0, 0}));
}

TEST_CASE("link_distance rejects non-finite points") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(link_distance({inf, 0, 0}, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("link_capacity matches high-precision reference values") {
  const RadioParams rp;  // B = 1e9, snr0 = 1e9, alpha = 2
  // 1e9 * log2(1 + 1e9) at d = 1 m.
  CHECK(link_capacity(1.0, rp) == doctest::Approx(29897352855.42896).epsilon(1e-12));
  // SNR exactly 1 at d = sqrt(snr0).
  CHECK(link_capacity(std::sqrt(1e9), rp) == doctest::Approx(1e9).epsilon(1e-12));
  // Spectral efficiency of the 4,000 km direct link.
  CHECK(link_capacity(4e6, rp) / rp.bandwidth ==
        doctest::Approx(9.016562240920980e-5).epsilon(1e-9));
}

TEST_CASE("link_capacity rejects the path-loss singularity") {
  const RadioParams rp;
  CHECK_THROWS_AS(link_capacity(0.0, rp), std::invalid_argument);
  CHECK_THROWS_AS(link_capacity(-1.0, rp), std::invalid_argument);
}

TEST_CASE("link_capacity is monotone in distance, reference SNR, and bandwidth") {
  Rng rng(23);
  for (int i = 0; i < 5000; ++i) {
    RadioParams rp;
    rp.bandwidth = uniform(rng, 1e6, 1e10);
    rp.reference_snr = uniform(rng, 1e3, 1e12);
    rp.pathloss_exponent = uniform(rng, 1.0, 4.0);
    const double d = std::exp(uniform(rng, 0.0, 16.0));

    const double c = link_capacity(d, rp);
    REQUIRE(c > 0.0);
    REQUIRE(link_capacity(d * 1.01, rp) < c);

    RadioParams stronger = rp;
    stronger.reference_snr *= 1.01;
    REQUIRE(link_capacity(d, stronger) > c);

    RadioParams wider = rp;
    wider.bandwidth *= 2.0;
    REQUIRE(link_capacity(d, wider) == 2.0 * c);
  }
}

TEST_CASE("link_capacity stays accurate deep in the weak-signal tail") {
  // At snr = 1e-12 the naive log2(1 + snr) loses ~half its digits;
  // B * snr / ln 2 approximates the true value to ~1e-13 relative here.
  RadioParams rp;
  rp.bandwidth = 1e9;
  rp.reference_snr = 1.0;
  rp.pathloss_exponent = 2.0;
  const double d = 1e6;  // snr = 1e-12
  const double expect = 1e9 * 1e-12 / std::log(2.0);
  CHECK(link_capacity(d, rp) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("e2e_rate is the bottleneck of the chain") {
  CHECK(e2e_rate(3, 1, 2) == 1.0);
  CHECK(e2e_rate(7.5, 7.5, 7.5) == 7.5);
  CHECK(e2e_rate(5, 0, 9) == 0.0);
  Rng rng(29);
  for (int i = 0; i < 2000; ++i) {
    const double a = uniform(rng, 0, 1e9), b = uniform(rng, 0, 1e9), c = uniform(rng, 0, 1e9);
    const double r = e2e_rate(a, b, c);
    REQUIRE(r <= a);
    REQUIRE(r <= b);
    REQUIRE(r <= c);
    REQUIRE((r == a || r == b || r == c));
  }
}

TEST_CASE("buffered rates with empty buffers reduce to the running min") {
  const HopRates r = buffered_hop_rates({1, 5, 5}, {0, 0});
  CHECK(r.src_sat == 1.0);
  CHECK(r.sat_hap == 1.0);
  CHECK(r.hap_dst == 1.0);
}

TEST_CASE("a full buffer decouples a relay from its upstream hop") {
  const HopRates r = buffered_hop_rates({1, 5, 3}, {1e18, 0});
  CHECK(r.src_sat == 1.0);
  CHECK(r.sat_hap == 5.0);
  CHECK(r.hap_dst == 3.0);
}

TEST_CASE("buffered rates combine backlog and same-slot arrivals") {
  const HopRates r = buffered_hop_rates({2, 3, 4}, {1, 0});
  CHECK(r.src_sat == 2.0);
  CHECK(r.sat_hap == 3.0);
  CHECK(r.hap_dst == 3.0);
}

TEST_CASE("buffered rates scale backlog by the slot length") {
  // 20 buffered bits over a 10 s slot contribute 2 bps of extra headroom.
  const HopRates r = buffered_hop_rates({2, 5, 5}, {20, 0}, 10.0);
  CHECK(r.sat_hap == 4.0);
  CHECK(r.hap_dst == 4.0);
  CHECK_THROWS_AS(buffered_hop_rates({1, 1, 1}, {0, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("buffer bookkeeping accumulates inflow minus outflow") {
  const BufferState b = update_buffers({1, 0}, {2, 3, 3});
  CHECK(b.sat_bits == 0.0);
  CHECK(b.hap_bits == 0.0);
  const BufferState c = update_buffers({0, 0}, {5, 2, 1}, 10.0);
  CHECK(c.sat_bits == 30.0);
  CHECK(c.hap_bits == 10.0);
  // Outflow never drives a backlog negative.
  const BufferState d = update_buffers({1, 1}, {0, 2, 10});
  CHECK(d.sat_bits == 0.0);
  CHECK(d.hap_bits == 0.0);
  // Balanced in/out leaves the backlog untouched.
  CHECK(update_buffers({1, 1}, {0, 10, 10}).hap_bits == 1.0);
  CHECK_THROWS_AS(update_buffers({0, 0}, {1, 1, 1}, -1.0), std::invalid_argument);
}

TEST_CASE("zero buffers make the buffered chain deliver the bufferless rate") {
  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    const HopCapacities caps{uniform(rng, 0, 1e7), uniform(rng, 0, 1e7), uniform(rng, 0, 1e7)};
    const HopRates r = buffered_hop_rates(caps, {0, 0});
    const double bottleneck = e2e_rate(caps.src_sat, caps.sat_hap, caps.hap_dst);
    REQUIRE(std::min({r.src_sat, r.sat_hap, r.hap_dst}) == bottleneck);
    REQUIRE(r.hap_dst == bottleneck);
  }
}

TEST_CASE("buffered delivery never exceeds hop capacity") {
  Rng rng(37);
  for (int i = 0; i < 2000; ++i) {
    const HopCapacities caps{uniform(rng, 0, 1e7), uniform(rng, 0, 1e7), uniform(rng, 0, 1e7)};
    const BufferState buf{uniform(rng, 0, 1e8), uniform(rng, 0, 1e8)};
    const double dt = uniform(rng, 0.1, 20.0);
    const HopRates r = buffered_hop_rates(caps, buf, dt);
    REQUIRE(r.src_sat <= caps.src_sat);
    REQUIRE(r.sat_hap <= caps.sat_hap);
    REQUIRE(r.hap_dst <= caps.hap_dst);
    const BufferState next = update_buffers(buf, r, dt);
    REQUIRE(next.sat_bits >= 0.0);
    REQUIRE(next.hap_bits >= 0.0);
  }
}
