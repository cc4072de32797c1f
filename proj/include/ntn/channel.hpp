#pragma once

#include "ntn/vec.hpp"

// Link-budget arithmetic: LoS path loss referenced at 1 m, Shannon capacity
// per hop, the bufferless decode-and-forward bottleneck, and the
// causality-limited rates of relays with finite buffers.

namespace ntn {

struct RadioParams {
  double bandwidth = 1e9;      // Hz
  double reference_snr = 1e9;  // SNR at d = 1 m (dimensionless)
  double pathloss_exponent = 2.0;
};

struct HopCapacities {
  double src_sat = 0, sat_hap = 0, hap_dst = 0;  // bps
};

struct HopRates {
  double src_sat = 0, sat_hap = 0, hap_dst = 0;  // bps
};

struct BufferState {
  double sat_bits = 0, hap_bits = 0;  // backlog, bits; always >= 0
};

double link_distance(const Vec3& p, const Vec3& q);  // Euclidean, m

// bandwidth * log2(1 + reference_snr / d^alpha). d == 0 is rejected (the
// path-loss model is singular there). The snr < 1 branch goes through
// log1p so relative accuracy holds for arbitrarily weak links.
double link_capacity(double d, const RadioParams& rp);

// Bufferless decode-and-forward: the chain delivers min of the three hops.
double e2e_rate(double c1, double c2, double c3);

// Causality-limited rates: each relay forwards at most its buffered backlog
// (expressed as a rate over one slot of dt seconds) plus what arrives in the
// same slot. With empty buffers this collapses to the running min; dt = 1
// makes bits and bps interchangeable.
HopRates buffered_hop_rates(const HopCapacities& caps, const BufferState& buf, double dt = 1.0);

// Per-slot bookkeeping: backlog' = max(0, backlog + (inflow - outflow)*dt).
BufferState update_buffers(const BufferState& buf, const HopRates& r, double dt = 1.0);

}  // namespace ntn
