#include "ntn/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ntn/trace.hpp"

namespace ntn {

double ScenarioConfig::nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

bool ScenarioConfig::reward_calibrated() const {
  return std::isfinite(reward_mu) && std::isfinite(reward_sigma);
}

Constellation ScenarioConfig::make_constellation() const {
  return Constellation(sat_count, sat_phase, sat_speed, orbit_length, sat_altitude, orbit_axis,
                       track_origin);
}

HapState ScenarioConfig::make_hap() const { return HapState{hap_init, hap_init_vel, hap_init.z}; }

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config: " + field + " " + why);
}

void require(bool ok, const char* field, const char* why) {
  if (!ok) bad(field, why);
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(is_finite(c.src_pos), "src_km", "must be finite");
  require(is_finite(c.dst_pos), "dst_km", "must be finite");
  require(!(c.src_pos == c.dst_pos), "dst_km", "must differ from src_km");
  require(c.radio.bandwidth > 0, "bandwidth_hz", "must be > 0");
  require(c.radio.reference_snr > 0, "reference_snr", "must be > 0");
  require(c.radio.pathloss_exponent >= 1, "pathloss_exponent", "must be >= 1");
  require(c.kin.dt > 0, "slot_seconds", "must be > 0");
  require(c.kin.a_max > 0, "accel_max_m_s2", "must be > 0");
  require(c.sat_count >= 1, "sat_count", "must be >= 1");
  require(c.kin.candidate_count >= 1 && c.kin.candidate_count <= c.sat_count, "candidate_count",
          "must be in [1, sat_count]");
  require(c.orbit_length > 0, "orbit_length_km", "must be > 0");
  require(c.kin.window_length > 0 && c.kin.window_length <= c.orbit_length, "window_km",
          "must be in (0, orbit_length_km]");
  require(c.sat_speed > 0, "sat_speed_km_s", "must be > 0");
  require(c.sat_altitude >= 0, "sat_altitude_km", "must be >= 0");
  require(std::isfinite(c.sat_phase), "sat_phase_km", "must be finite");
  require(is_finite(c.orbit_axis) && norm(c.orbit_axis) > 0, "orbit_axis", "must be nonzero");
  require(c.orbit_axis.z == 0, "orbit_axis", "must be horizontal (z = 0)");
  require(is_finite(c.hap_init), "hap_init_km", "must be finite");
  require(c.hap_init.z >= 0, "hap_init_km", "altitude must be >= 0");
  require(is_finite(c.hap_init_vel), "hap_init_vel_m_s", "must be finite");
  require(c.episode_slots > 0, "episode_slots", "must be > 0");
  require(c.accel_levels >= 2, "accel_levels", "must be >= 2");
  if (std::isfinite(c.reward_mu) || std::isfinite(c.reward_sigma)) {
    require(std::isfinite(c.reward_mu), "reward_mu_bps", "must be finite when sigma is set");
    require(std::isfinite(c.reward_sigma) && c.reward_sigma > 0, "reward_sigma_bps",
            "must be > 0 when set");
  }
  require(c.sweep_grid > 0, "sweep_grid_km", "must be > 0");
}

void validate(const DqnConfig& d, const ScenarioConfig&) {
  require(!d.hidden_dims.empty(), "hidden_dims", "must be nonempty");
  for (int h : d.hidden_dims) require(h >= 1, "hidden_dims", "entries must be >= 1");
  require(d.lr > 0, "learning_rate", "must be > 0");
  require(d.gamma >= 0 && d.gamma <= 1, "discount", "must be in [0, 1]");
  require(d.batch >= 1, "batch_size", "must be >= 1");
  require(d.replay_capacity >= d.batch, "replay_capacity", "must be >= batch_size");
  require(d.target_sync >= 1, "target_sync", "must be >= 1");
  require(d.iterations >= 0, "iterations", "must be >= 0");
  require(d.eps_start >= 0 && d.eps_start <= 1, "epsilon_start", "must be in [0, 1]");
  require(d.eps_end >= 0 && d.eps_end <= 1, "epsilon_end", "must be in [0, 1]");
  require(d.eps_decay_frac >= 0 && d.eps_decay_frac <= 1, "epsilon_decay_frac",
          "must be in [0, 1]");
  require(d.steps_per_update >= 1, "steps_per_update", "must be >= 1");
  require(d.grad_clip >= 0, "grad_clip", "must be >= 0");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

double parse_num(const std::string& key, const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size()) bad(key, "has a malformed number: " + tok);
  return v;
}

long long parse_ll(const std::string& key, const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end != begin + tok.size()) bad(key, "has a malformed integer: " + tok);
  return v;
}

std::vector<double> parse_nums(const std::string& key, const std::string& value, std::size_t n) {
  const auto toks = tokens(value);
  if (toks.size() != n) bad(key, "expects " + std::to_string(n) + " values");
  std::vector<double> out;
  out.reserve(n);
  for (const auto& t : toks) out.push_back(parse_num(key, t));
  return out;
}

// bps field accepting the literal "auto" (NaN sentinel).
double parse_auto(const std::string& key, const std::string& value) {
  if (value == "auto") return ScenarioConfig::nan_value();
  return parse_num(key, value);
}

constexpr double kKm = 1000.0;

}  // namespace

FileConfig parse_config(const std::string& text) {
  FileConfig cfg;
  ScenarioConfig& s = cfg.scenario;
  DqnConfig& d = cfg.dqn;

  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " has no '='");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is incomplete");
    }

    if (key == "src_km") {
      auto v = parse_nums(key, value, 3);
      s.src_pos = {v[0] * kKm, v[1] * kKm, v[2] * kKm};
    } else if (key == "dst_km") {
      auto v = parse_nums(key, value, 3);
      s.dst_pos = {v[0] * kKm, v[1] * kKm, v[2] * kKm};
    } else if (key == "bandwidth_hz") {
      s.radio.bandwidth = parse_num(key, value);
    } else if (key == "reference_snr") {
      s.radio.reference_snr = parse_num(key, value);
    } else if (key == "pathloss_exponent") {
      s.radio.pathloss_exponent = parse_num(key, value);
    } else if (key == "slot_seconds") {
      s.kin.dt = parse_num(key, value);
    } else if (key == "accel_max_m_s2") {
      s.kin.a_max = parse_num(key, value);
    } else if (key == "window_km") {
      s.kin.window_length = parse_num(key, value) * kKm;
    } else if (key == "candidate_count") {
      s.kin.candidate_count = static_cast<int>(parse_ll(key, value));
    } else if (key == "sat_count") {
      s.sat_count = static_cast<int>(parse_ll(key, value));
    } else if (key == "sat_speed_km_s") {
      s.sat_speed = parse_num(key, value) * kKm;
    } else if (key == "sat_altitude_km") {
      s.sat_altitude = parse_num(key, value) * kKm;
    } else if (key == "orbit_length_km") {
      s.orbit_length = parse_num(key, value) * kKm;
    } else if (key == "sat_phase_km") {
      s.sat_phase = parse_num(key, value) * kKm;
    } else if (key == "orbit_axis") {
      auto v = parse_nums(key, value, 3);
      s.orbit_axis = {v[0], v[1], v[2]};
    } else if (key == "track_origin_km") {
      auto v = parse_nums(key, value, 2);
      s.track_origin = {v[0] * kKm, v[1] * kKm};
    } else if (key == "hap_init_km") {
      auto v = parse_nums(key, value, 3);
      s.hap_init = {v[0] * kKm, v[1] * kKm, v[2] * kKm};
    } else if (key == "hap_init_vel_m_s") {
      auto v = parse_nums(key, value, 2);
      s.hap_init_vel = {v[0], v[1]};
    } else if (key == "episode_slots") {
      s.episode_slots = static_cast<int>(parse_ll(key, value));
    } else if (key == "accel_levels") {
      s.accel_levels = static_cast<int>(parse_ll(key, value));
    } else if (key == "reward_mu_bps") {
      s.reward_mu = parse_auto(key, value);
    } else if (key == "reward_sigma_bps") {
      s.reward_sigma = parse_auto(key, value);
    } else if (key == "use_buffers") {
      s.use_buffers = parse_ll(key, value) != 0;
    } else if (key == "sweep_grid_km") {
      s.sweep_grid = parse_num(key, value) * kKm;
    } else if (key == "hidden_dims") {
      d.hidden_dims.clear();
      for (const auto& t : tokens(value)) d.hidden_dims.push_back(static_cast<int>(parse_ll(key, t)));
    } else if (key == "learning_rate") {
      d.lr = parse_num(key, value);
    } else if (key == "discount") {
      d.gamma = parse_num(key, value);
    } else if (key == "batch_size") {
      d.batch = static_cast<int>(parse_ll(key, value));
    } else if (key == "target_sync") {
      d.target_sync = static_cast<int>(parse_ll(key, value));
    } else if (key == "iterations") {
      d.iterations = parse_ll(key, value);
    } else if (key == "epsilon_start") {
      d.eps_start = parse_num(key, value);
    } else if (key == "epsilon_end") {
      d.eps_end = parse_num(key, value);
    } else if (key == "epsilon_decay_frac") {
      d.eps_decay_frac = parse_num(key, value);
    } else if (key == "replay_capacity") {
      d.replay_capacity = static_cast<int>(parse_ll(key, value));
    } else if (key == "steps_per_update") {
      d.steps_per_update = static_cast<int>(parse_ll(key, value));
    } else if (key == "grad_clip") {
      d.grad_clip = parse_num(key, value);
    } else if (key == "loss_reduction") {
      if (value == "sum") {
        d.mean_loss = false;
      } else if (value == "mean") {
        d.mean_loss = true;
      } else {
        bad(key, "must be 'sum' or 'mean'");
      }
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "' on line " +
                                  std::to_string(lineno));
    }
  }
  validate(cfg.scenario);
  validate(cfg.dqn, cfg.scenario);
  return cfg;
}

FileConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: cannot read file: " + path);
  }
  return parse_config(text);
}

namespace {

std::string fmt_km(double meters) { return format_double(meters / kKm); }

std::string fmt_bps_or_auto(double v) { return std::isfinite(v) ? format_double(v) : "auto"; }

}  // namespace

std::string render_config(const FileConfig& cfg) {
  const ScenarioConfig& s = cfg.scenario;
  const DqnConfig& d = cfg.dqn;
  std::ostringstream o;
  o << "src_km = " << fmt_km(s.src_pos.x) << ' ' << fmt_km(s.src_pos.y) << ' '
    << fmt_km(s.src_pos.z) << '\n';
  o << "dst_km = " << fmt_km(s.dst_pos.x) << ' ' << fmt_km(s.dst_pos.y) << ' '
    << fmt_km(s.dst_pos.z) << '\n';
  o << "bandwidth_hz = " << format_double(s.radio.bandwidth) << '\n';
  o << "reference_snr = " << format_double(s.radio.reference_snr) << '\n';
  o << "pathloss_exponent = " << format_double(s.radio.pathloss_exponent) << '\n';
  o << "slot_seconds = " << format_double(s.kin.dt) << '\n';
  o << "accel_max_m_s2 = " << format_double(s.kin.a_max) << '\n';
  o << "window_km = " << fmt_km(s.kin.window_length) << '\n';
  o << "candidate_count = " << s.kin.candidate_count << '\n';
  o << "sat_count = " << s.sat_count << '\n';
  o << "sat_speed_km_s = " << fmt_km(s.sat_speed) << '\n';
  o << "sat_altitude_km = " << fmt_km(s.sat_altitude) << '\n';
  o << "orbit_length_km = " << fmt_km(s.orbit_length) << '\n';
  o << "sat_phase_km = " << fmt_km(s.sat_phase) << '\n';
  o << "orbit_axis = " << format_double(s.orbit_axis.x) << ' ' << format_double(s.orbit_axis.y)
    << ' ' << format_double(s.orbit_axis.z) << '\n';
  o << "track_origin_km = " << fmt_km(s.track_origin.x) << ' ' << fmt_km(s.track_origin.y) << '\n';
  o << "hap_init_km = " << fmt_km(s.hap_init.x) << ' ' << fmt_km(s.hap_init.y) << ' '
    << fmt_km(s.hap_init.z) << '\n';
  o << "hap_init_vel_m_s = " << format_double(s.hap_init_vel.x) << ' '
    << format_double(s.hap_init_vel.y) << '\n';
  o << "episode_slots = " << s.episode_slots << '\n';
  o << "accel_levels = " << s.accel_levels << '\n';
  o << "reward_mu_bps = " << fmt_bps_or_auto(s.reward_mu) << '\n';
  o << "reward_sigma_bps = " << fmt_bps_or_auto(s.reward_sigma) << '\n';
  o << "use_buffers = " << (s.use_buffers ? 1 : 0) << '\n';
  o << "sweep_grid_km = " << fmt_km(s.sweep_grid) << '\n';
  o << "hidden_dims =";
  for (int h : d.hidden_dims) o << ' ' << h;
  o << '\n';
  o << "learning_rate = " << format_double(d.lr) << '\n';
  o << "discount = " << format_double(d.gamma) << '\n';
  o << "batch_size = " << d.batch << '\n';
  o << "target_sync = " << d.target_sync << '\n';
  o << "iterations = " << d.iterations << '\n';
  o << "epsilon_start = " << format_double(d.eps_start) << '\n';
  o << "epsilon_end = " << format_double(d.eps_end) << '\n';
  o << "epsilon_decay_frac = " << format_double(d.eps_decay_frac) << '\n';
  o << "replay_capacity = " << d.replay_capacity << '\n';
  o << "steps_per_update = " << d.steps_per_update << '\n';
  o << "grad_clip = " << format_double(d.grad_clip) << '\n';
  o << "loss_reduction = " << (d.mean_loss ? "mean" : "sum") << '\n';
  return o.str();
}

}  // namespace ntn
