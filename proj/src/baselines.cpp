#include "ntn/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "ntn/agent.hpp"
#include "ntn/channel.hpp"
#include "ntn/env.hpp"

namespace ntn {

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void finish(SchemeResult& r, const ScenarioConfig& cfg) {
  r.mean_rate = mean_of(r.rates);
  r.spectral_efficiency = r.mean_rate / cfg.radio.bandwidth;
}

double trace_reward(double e2e, const ScenarioConfig& cfg) {
  if (!cfg.reward_calibrated()) return ScenarioConfig::nan_value();
  return reward_value(e2e, cfg.reward_mu, cfg.reward_sigma);
}

// Candidate windows plus the src->candidate capacities, which do not depend
// on the relay placement.
struct SlotWindow {
  std::vector<Candidate> cands;
  std::vector<double> c_src;
  std::vector<double> d_src;
};

std::vector<SlotWindow> annotated_schedule(const ScenarioConfig& cfg) {
  std::vector<SlotWindow> out(cfg.episode_slots);
  Constellation c = cfg.make_constellation();
  for (int n = 0; n < cfg.episode_slots; ++n) {
    c = propagate(c, cfg.kin.dt);
    SlotWindow& w = out[n];
    w.cands = window_candidates(c, cfg.kin, cfg.src_pos);
    w.c_src.resize(w.cands.size());
    w.d_src.resize(w.cands.size());
    for (std::size_t j = 0; j < w.cands.size(); ++j) {
      w.d_src[j] = link_distance(cfg.src_pos, w.cands[j].position);
      w.c_src[j] = link_capacity(w.d_src[j], cfg.radio);
    }
  }
  return out;
}

// Best three-hop bottleneck through any window candidate for one slot.
// Returns the rate; *chosen gets the index within the window.
double best_three_hop(const SlotWindow& w, const Vec3& relay, double c_relay_dst,
                      const ScenarioConfig& cfg, int* chosen) {
  double best = -1;
  int best_j = 0;
  for (std::size_t j = 0; j < w.cands.size(); ++j) {
    const double d2 = link_distance(w.cands[j].position, relay);
    const double r =
        e2e_rate(w.c_src[j], link_capacity(d2, cfg.radio), c_relay_dst);
    if (r > best) {
      best = r;
      best_j = static_cast<int>(j);
    }
  }
  *chosen = best_j;
  return best;
}

}  // namespace

std::vector<std::vector<Candidate>> candidate_schedule(const ScenarioConfig& cfg) {
  std::vector<std::vector<Candidate>> out;
  out.reserve(cfg.episode_slots);
  Constellation c = cfg.make_constellation();
  for (int n = 0; n < cfg.episode_slots; ++n) {
    c = propagate(c, cfg.kin.dt);
    out.push_back(window_candidates(c, cfg.kin, cfg.src_pos));
  }
  return out;
}

SchemeResult direct_rate(const ScenarioConfig& cfg) {
  validate(cfg);
  SchemeResult r;
  r.scheme = "direct";
  const double d = link_distance(cfg.src_pos, cfg.dst_pos);
  const double c = link_capacity(d, cfg.radio);
  r.rates.assign(cfg.episode_slots, c);
  finish(r, cfg);
  r.trace.resize(cfg.episode_slots);
  for (int n = 0; n < cfg.episode_slots; ++n) {
    SlotRecord& row = r.trace[n];
    row.n = n + 1;
    row.sat_global_idx = -1;
    row.d1 = d;
    row.c1 = c;
    row.e2e = c;
    row.reward = trace_reward(c, cfg);
  }
  return r;
}

SchemeResult sat_only(const ScenarioConfig& cfg) {
  validate(cfg);
  SchemeResult r;
  r.scheme = "sat_only";
  const auto sched = annotated_schedule(cfg);
  r.rates.resize(cfg.episode_slots);
  r.trace.resize(cfg.episode_slots);
  for (int n = 0; n < cfg.episode_slots; ++n) {
    const SlotWindow& w = sched[n];
    double best = -1;
    int best_j = 0;
    double best_d2 = 0, best_c2 = 0;
    for (std::size_t j = 0; j < w.cands.size(); ++j) {
      const double d2 = link_distance(w.cands[j].position, cfg.dst_pos);
      const double c2 = link_capacity(d2, cfg.radio);
      const double rate = std::min(w.c_src[j], c2);
      if (rate > best) {
        best = rate;
        best_j = static_cast<int>(j);
        best_d2 = d2;
        best_c2 = c2;
      }
    }
    r.rates[n] = best;
    SlotRecord& row = r.trace[n];
    row.n = n + 1;
    row.sat_global_idx = w.cands[best_j].sat_index;
    row.d1 = w.d_src[best_j];
    row.d2 = best_d2;
    row.c1 = w.c_src[best_j];
    row.c2 = best_c2;
    row.e2e = best;
    row.reward = trace_reward(best, cfg);
  }
  finish(r, cfg);
  return r;
}

SchemeResult fixed_relay_eval(const Vec3& position, const ScenarioConfig& cfg) {
  validate(cfg);
  if (position == cfg.src_pos || position == cfg.dst_pos) {
    throw std::invalid_argument("fixed_relay_eval: relay coincides with a terminal");
  }
  SchemeResult r;
  r.scheme = "fixed_relay";
  r.has_relay = true;
  r.relay = position;
  const auto sched = annotated_schedule(cfg);
  const double d3 = link_distance(position, cfg.dst_pos);
  const double c3 = link_capacity(d3, cfg.radio);
  r.rates.resize(cfg.episode_slots);
  r.trace.resize(cfg.episode_slots);
  for (int n = 0; n < cfg.episode_slots; ++n) {
    int j = 0;
    const double rate = best_three_hop(sched[n], position, c3, cfg, &j);
    r.rates[n] = rate;
    const Candidate& cand = sched[n].cands[j];
    SlotRecord& row = r.trace[n];
    row.n = n + 1;
    row.sat_global_idx = cand.sat_index;
    row.hap_x = position.x;
    row.hap_y = position.y;
    row.d1 = sched[n].d_src[j];
    row.d2 = link_distance(cand.position, position);
    row.d3 = d3;
    row.c1 = sched[n].c_src[j];
    row.c2 = link_capacity(row.d2, cfg.radio);
    row.c3 = c3;
    row.e2e = rate;
    row.reward = trace_reward(rate, cfg);
  }
  finish(r, cfg);
  return r;
}

SweepResult fixed_relay_sweep(const ScenarioConfig& cfg, double grid_step, double relay_altitude) {
  validate(cfg);
  if (!(grid_step > 0)) throw std::invalid_argument("fixed_relay_sweep: grid_step must be > 0");
  const double span = link_distance(cfg.src_pos, cfg.dst_pos);
  const int steps = static_cast<int>(std::floor(span / grid_step + 1e-9));
  const auto sched = annotated_schedule(cfg);

  double best_mean = -1;
  Vec3 best_pos;
  int evaluated = 0;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const Vec3 pos{i * grid_step, j * grid_step, relay_altitude};
      if (pos == cfg.src_pos || pos == cfg.dst_pos) continue;
      ++evaluated;
      const double c3 = link_capacity(link_distance(pos, cfg.dst_pos), cfg.radio);
      double sum = 0;
      int chosen = 0;
      for (int n = 0; n < cfg.episode_slots; ++n) {
        sum += best_three_hop(sched[n], pos, c3, cfg, &chosen);
      }
      const double mean = sum / static_cast<double>(cfg.episode_slots);
      if (mean > best_mean) {  // strict: lexicographically smallest argmax kept
        best_mean = mean;
        best_pos = pos;
      }
    }
  }
  if (evaluated == 0) throw std::invalid_argument("fixed_relay_sweep: empty grid");

  SweepResult out;
  out.grid_points = evaluated;
  out.best = fixed_relay_eval(best_pos, cfg);
  return out;
}

namespace {

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "scheme,mean_rate_bps,spectral_efficiency,relay_x_km,relay_y_km,relay_z_km\n";
  for (const ComparisonRow& r : rows) {
    out += r.scheme;
    out += ',';
    out += format_double(r.mean_rate);
    out += ',';
    out += format_double(r.spectral_efficiency);
    if (r.has_relay) {
      out += ',';
      out += format_double(r.relay.x / 1000.0);
      out += ',';
      out += format_double(r.relay.y / 1000.0);
      out += ',';
      out += format_double(r.relay.z / 1000.0);
    } else {
      out += ",,,";
    }
    out += '\n';
  }
  return out;
}

ComparisonRow to_row(const SchemeResult& r) {
  ComparisonRow row;
  row.scheme = r.scheme;
  row.mean_rate = r.mean_rate;
  row.spectral_efficiency = r.spectral_efficiency;
  row.has_relay = r.has_relay;
  row.relay = r.relay;
  return row;
}

}  // namespace

Comparison compare_schemes(const ScenarioConfig& cfg, const MlpParams* trained) {
  validate(cfg);
  Comparison out;
  out.results.push_back(direct_rate(cfg));
  out.results.push_back(sat_only(cfg));

  SweepResult ground = fixed_relay_sweep(cfg, cfg.sweep_grid, 0.0);
  ground.best.scheme = "fixed_ground";
  out.results.push_back(std::move(ground.best));

  SweepResult hap = fixed_relay_sweep(cfg, cfg.sweep_grid, cfg.hap_init.z);
  hap.best.scheme = "fixed_hap";
  out.results.push_back(std::move(hap.best));

  if (trained != nullptr) {
    ScenarioConfig run = cfg;
    calibrate_reward(run);
    const EvalResult ev = evaluate(*trained, run, 1);
    SchemeResult r;
    r.scheme = "dqn";
    r.trace = ev.trace;
    r.rates.reserve(ev.trace.size());
    for (const SlotRecord& row : ev.trace) r.rates.push_back(row.e2e);
    finish(r, cfg);
    out.results.push_back(std::move(r));
  }

  out.rows.reserve(out.results.size());
  for (const SchemeResult& r : out.results) out.rows.push_back(to_row(r));
  out.csv = comparison_csv(out.rows);
  return out;
}

}  // namespace ntn
