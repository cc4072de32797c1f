#include "ntn/env.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ntn/baselines.hpp"

namespace ntn {

DecodedAction decode_action(int idx, int candidate_count, int accel_levels, double a_max) {
  if (candidate_count < 1 || accel_levels < 2 || !(a_max > 0) || !std::isfinite(a_max)) {
    throw std::invalid_argument("decode_action: bad action-space shape");
  }
  const int per_sat = accel_levels * accel_levels;
  const int total = candidate_count * per_sat;
  if (idx < 0 || idx >= total) {
    throw std::out_of_range("decode_action: index " + std::to_string(idx) +
                            " outside [0, " + std::to_string(total) + ")");
  }
  DecodedAction out;
  out.sat_choice = idx / per_sat;
  const int rem = idx % per_sat;
  const int ix = rem / accel_levels;
  const int iy = rem % accel_levels;
  const double span = 2.0 * a_max / (accel_levels - 1);
  Vec2 a{-a_max + span * ix, -a_max + span * iy};
  out.accel = project_acceleration(a, a_max);
  return out;
}

double reward_value(double rate, double mu, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("reward_value: sigma must be > 0");
  const double g = (rate - mu) / sigma;
  double f;
  if (g >= 0) {
    f = 1.0 / (1.0 + std::exp(-g));
  } else {
    const double e = std::exp(g);
    f = e / (1.0 + e);
  }
  // The logistic lives in (0,1) mathematically but saturates to 0/1 in
  // doubles for |g| > ~37; clamp to keep the open-interval contract.
  constexpr double kEdge = 1e-12;
  if (f < kEdge) f = kEdge;
  if (f > 1.0 - kEdge) f = 1.0 - kEdge;
  return f;
}

Env::Env(const ScenarioConfig& cfg)
    : cfg_(cfg), constellation_(cfg.make_constellation()), hap_(cfg.make_hap()) {
  validate(cfg_);
  if (!cfg_.reward_calibrated()) {
    throw std::invalid_argument(
        "env: reward_mu_bps/reward_sigma_bps unresolved; run calibrate_reward first");
  }
  direct_rate_ = link_capacity(link_distance(cfg_.src_pos, cfg_.dst_pos), cfg_.radio);
  reset();
}

std::vector<double> Env::reset() {
  constellation_ = cfg_.make_constellation();
  hap_ = cfg_.make_hap();
  buffers_ = BufferState{};
  slot_ = 0;
  done_ = false;
  window_ = window_candidates(constellation_, cfg_.kin, cfg_.src_pos);

  // Provisional association for the first observation: the lowest-wrapped
  // candidate at the initial geometry.
  const Candidate& c = window_.front();
  last_d_[0] = link_distance(cfg_.src_pos, c.position);
  last_d_[1] = link_distance(c.position, hap_.position);
  last_d_[2] = link_distance(hap_.position, cfg_.dst_pos);
  HopCapacities caps{link_capacity(last_d_[0], cfg_.radio), link_capacity(last_d_[1], cfg_.radio),
                     link_capacity(last_d_[2], cfg_.radio)};
  const HopRates r = buffered_hop_rates(caps, BufferState{}, cfg_.kin.dt);
  last_r_[0] = cfg_.use_buffers ? r.src_sat : caps.src_sat;
  last_r_[1] = cfg_.use_buffers ? r.sat_hap : caps.sat_hap;
  last_r_[2] = cfg_.use_buffers ? r.hap_dst : caps.hap_dst;
  return make_obs();
}

StepOutcome Env::step(int action_idx) {
  if (done_) throw std::runtime_error("step: episode already finished");
  const DecodedAction act =
      decode_action(action_idx, cfg_.kin.candidate_count, cfg_.accel_levels, cfg_.kin.a_max);

  StepOutcome out;
  out.info.window = window_;  // what the action indexed into
  const Candidate chosen_pre = window_[act.sat_choice];

  hap_ = step_hap(hap_, act.accel, cfg_.kin.dt);
  constellation_ = propagate(constellation_, cfg_.kin.dt);

  // The slot's rates realize at the post-move geometry, through the chosen
  // satellite's wrapped coordinate.
  Candidate chosen;
  chosen.sat_index = chosen_pre.sat_index;
  chosen.wrapped = wrap_coord(constellation_.coord(chosen.sat_index), cfg_.kin.window_length);
  chosen.position = constellation_.position_at(chosen.wrapped);

  const double d1 = link_distance(cfg_.src_pos, chosen.position);
  const double d2 = link_distance(chosen.position, hap_.position);
  const double d3 = link_distance(hap_.position, cfg_.dst_pos);
  const HopCapacities caps{link_capacity(d1, cfg_.radio), link_capacity(d2, cfg_.radio),
                           link_capacity(d3, cfg_.radio)};
  HopRates rates{caps.src_sat, caps.sat_hap, caps.hap_dst};
  double e2e;
  if (cfg_.use_buffers) {
    rates = buffered_hop_rates(caps, buffers_, cfg_.kin.dt);
    buffers_ = update_buffers(buffers_, rates, cfg_.kin.dt);
    e2e = rates.hap_dst;  // what the last hop delivers to Dst
  } else {
    e2e = e2e_rate(caps.src_sat, caps.sat_hap, caps.hap_dst);
  }

  slot_ += 1;
  done_ = (slot_ == cfg_.episode_slots);
  last_d_[0] = d1;
  last_d_[1] = d2;
  last_d_[2] = d3;
  last_r_[0] = rates.src_sat;
  last_r_[1] = rates.sat_hap;
  last_r_[2] = rates.hap_dst;
  window_ = window_candidates(constellation_, cfg_.kin, cfg_.src_pos);

  out.reward = reward_value(e2e, cfg_.reward_mu, cfg_.reward_sigma);
  out.done = done_;
  out.info.slot = slot_;
  out.info.sat_global_idx = chosen.sat_index;
  out.info.chosen = chosen;
  out.info.d1 = d1;
  out.info.d2 = d2;
  out.info.d3 = d3;
  out.info.caps = caps;
  out.info.rates = rates;
  out.info.e2e = e2e;
  out.info.hap = hap_;
  out.info.accel = act.accel;
  out.obs = make_obs();
  return out;
}

std::vector<double> Env::make_obs() const {
  // Feature scaling targets O(1) variation over the operating range, not
  // just O(1) magnitude. Rates pass through tanh(r/mu - 1): in units of raw
  // bandwidth they would all sit at ~1e-4 and the network would be blind to
  // the reward-bearing features, while any affine map that resolves the
  // mu-neighborhood blows past the observation bounds when a wandering HAP
  // shrinks one hop to tens of kilometers (hop capacity is unbounded in
  // 1/distance). The HAP position is centered on the Src-Dst midpoint at a
  // quarter of the window length so kilometer-scale displacements around
  // the useful corridor register while a runaway random-policy excursion
  // still stays within single digits. The HAP velocity is essential: the
  // platform is a double integrator, and with position alone the value of
  // an acceleration is aliased away, so drift can never be credited to the
  // action that caused it. One slot's strongest kick (a_max*dt) maps to
  // 1/8 so sustained drift registers well before the bound.
  const double inv_c = 1.0 / cfg_.kin.window_length;
  const double inv_h = 4.0 / cfg_.kin.window_length;
  const double inv_r = 1.0 / cfg_.reward_mu;
  const double inv_v = 1.0 / (8.0 * cfg_.kin.a_max * cfg_.kin.dt);
  const double mid_x = 0.5 * (cfg_.src_pos.x + cfg_.dst_pos.x);
  const double mid_y = 0.5 * (cfg_.src_pos.y + cfg_.dst_pos.y);
  std::vector<double> obs;
  obs.reserve(cfg_.obs_dim());
  for (const Candidate& c : window_) {
    obs.push_back(c.position.x * inv_c);
    obs.push_back(c.position.y * inv_c);
    obs.push_back(c.position.z * inv_c);
  }
  obs.push_back((hap_.position.x - mid_x) * inv_h);
  obs.push_back((hap_.position.y - mid_y) * inv_h);
  obs.push_back(hap_.position.z * inv_c);
  obs.push_back(hap_.velocity.x * inv_v);
  obs.push_back(hap_.velocity.y * inv_v);
  for (double d : last_d_) obs.push_back(d * inv_c);
  for (double r : last_r_) obs.push_back(std::tanh(r * inv_r - 1.0));
  obs.push_back(std::tanh(direct_rate_ * inv_r - 1.0));
  return obs;
}

SlotRecord Env::record(const StepOutcome& out) const {
  SlotRecord r;
  r.n = out.info.slot;
  r.sat_global_idx = out.info.sat_global_idx;
  r.hap_x = out.info.hap.position.x;
  r.hap_y = out.info.hap.position.y;
  r.v_x = out.info.hap.velocity.x;
  r.v_y = out.info.hap.velocity.y;
  r.a_x = out.info.accel.x;
  r.a_y = out.info.accel.y;
  r.d1 = out.info.d1;
  r.d2 = out.info.d2;
  r.d3 = out.info.d3;
  r.c1 = out.info.caps.src_sat;
  r.c2 = out.info.caps.sat_hap;
  r.c3 = out.info.caps.hap_dst;
  r.e2e = out.info.e2e;
  r.reward = out.reward;
  return r;
}

std::pair<double, double> reward_calibration(const std::vector<double>& rates) {
  if (rates.empty()) throw std::invalid_argument("reward_calibration: empty trace");
  double sum = 0;
  for (double r : rates) sum += r;
  const double mu = sum / static_cast<double>(rates.size());
  double sigma = 0;
  for (double r : rates) sigma = std::max(sigma, std::abs(r - mu));
  if (sigma == 0) sigma = mu;  // constant trace: degenerate scale
  return {mu, sigma};
}

void calibrate_reward(ScenarioConfig& cfg) {
  if (cfg.reward_calibrated()) return;
  validate(cfg);
  const SweepResult sweep = fixed_relay_sweep(cfg, cfg.sweep_grid, cfg.hap_init.z);
  const auto [mu, sigma] = reward_calibration(sweep.best.rates);
  cfg.reward_mu = mu;
  cfg.reward_sigma = sigma;
}

}  // namespace ntn
