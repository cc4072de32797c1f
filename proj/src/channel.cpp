#include "ntn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ntn {

namespace {
constexpr double kInvLn2 = 1.4426950408889634;  // 1/ln(2)
}

double link_distance(const Vec3& p, const Vec3& q) {
  if (!is_finite(p) || !is_finite(q)) throw std::invalid_argument("link_distance: non-finite input");
  return norm(p - q);
}

double link_capacity(double d, const RadioParams& rp) {
  if (!(d > 0)) throw std::invalid_argument("link_capacity: distance must be > 0");
  const double a = rp.pathloss_exponent;
  const double snr = rp.reference_snr / (a == 2.0 ? d * d : std::pow(d, a));
  if (snr >= 1.0) return rp.bandwidth * std::log2(1.0 + snr);
  // log2(1+x) loses ~eps/x relative accuracy for small x; log1p does not.
  return rp.bandwidth * (std::log1p(snr) * kInvLn2);
}

double e2e_rate(double c1, double c2, double c3) { return std::min(c1, std::min(c2, c3)); }

HopRates buffered_hop_rates(const HopCapacities& caps, const BufferState& buf, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("buffered_hop_rates: dt must be > 0");
  HopRates r;
  r.src_sat = caps.src_sat;
  r.sat_hap = std::min(caps.sat_hap, buf.sat_bits / dt + r.src_sat);
  r.hap_dst = std::min(caps.hap_dst, buf.hap_bits / dt + r.sat_hap);
  return r;
}

BufferState update_buffers(const BufferState& buf, const HopRates& r, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("update_buffers: dt must be > 0");
  BufferState out;
  out.sat_bits = std::max(0.0, buf.sat_bits + (r.src_sat - r.sat_hap) * dt);
  out.hap_bits = std::max(0.0, buf.hap_bits + (r.sat_hap - r.hap_dst) * dt);
  return out;
}

}  // namespace ntn
