// ntn: train, evaluate, and compare relaying schemes for the slotted
// Src -> satellite -> HAP -> Dst simulator.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ntn/agent.hpp"
#include "ntn/baselines.hpp"
#include "ntn/config.hpp"
#include "ntn/env.hpp"
#include "ntn/trace.hpp"
#include "ntn/version.hpp"

namespace {

using namespace ntn;

namespace fs = std::filesystem;

long long unix_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

struct Manifest {
  std::string command;
  std::uint64_t seed = 0;
  bool has_seed = false;
  long long started = 0;
  double elapsed = -1;  // seconds; < 0 while the run is in flight
  std::vector<std::string> outputs;
  std::string config_snapshot;
};

std::string manifest_text(const Manifest& m) {
  std::ostringstream o;
  o << "ntn-run-manifest\n";
  o << "version " << kVersion << '\n';
  o << "command " << m.command << '\n';
  if (m.has_seed) o << "seed " << m.seed << '\n';
  o << "started_unix " << m.started << '\n';
  if (m.elapsed >= 0) o << "elapsed_seconds " << format_double(m.elapsed) << '\n';
  o << "outputs\n";
  for (const auto& p : m.outputs) o << "  " << p << '\n';
  o << "config-snapshot\n";
  o << m.config_snapshot;
  o << "end\n";
  return o.str();
}

// The manifest lands (atomically) before any result file, and is rewritten
// with the elapsed time once every listed output exists.
struct RunDir {
  fs::path dir;
  Manifest manifest;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  RunDir(const std::string& out_dir, std::string command, const FileConfig& cfg) {
    dir = out_dir;
    fs::create_directories(dir);
    manifest.command = std::move(command);
    manifest.started = unix_now();
    manifest.config_snapshot = render_config(cfg);
  }
  void set_seed(std::uint64_t s) {
    manifest.seed = s;
    manifest.has_seed = true;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  void begin() { write_text_file(path("manifest.txt"), manifest_text(manifest)); }
  void finish() {
    manifest.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text_file(path("manifest.txt"), manifest_text(manifest));
  }
};

int cmd_train(const std::string& config_path, std::uint64_t seed, const std::string& out_dir,
              long long iterations_override, const std::string& resume_path) {
  FileConfig cfg = load_config(config_path);
  if (iterations_override >= 0) cfg.dqn.iterations = iterations_override;
  calibrate_reward(cfg.scenario);

  RunDir run(out_dir, "train", cfg);
  run.set_seed(seed);
  run.manifest.outputs = {"checkpoint.txt", "training_log.csv"};
  run.begin();

  TrainResult result;
  if (resume_path.empty()) {
    result = train(cfg.scenario, cfg.dqn, seed);
  } else {
    result = train_from(load_checkpoint(resume_path), cfg.scenario, cfg.dqn, seed);
  }
  save_checkpoint(result.params, run.path("checkpoint.txt"));
  write_text_file(run.path("training_log.csv"), result.log_csv);
  run.finish();
  std::printf("trained %lld iterations (%lld updates, %zu episodes); outputs in %s\n",
              result.iterations, result.updates, result.episode_mean_rewards.size(),
              run.dir.string().c_str());
  return 0;
}

int cmd_evaluate(const std::string& checkpoint_path, const std::string& config_path,
                 const std::string& out_dir, int episodes) {
  FileConfig cfg = load_config(config_path);
  calibrate_reward(cfg.scenario);
  const MlpParams params = load_checkpoint(checkpoint_path);

  RunDir run(out_dir, "evaluate", cfg);
  run.manifest.outputs = {"trace.csv", "summary.txt"};
  run.begin();

  const EvalResult ev = evaluate(params, cfg.scenario, episodes);
  write_text_file(run.path("trace.csv"), trace_csv(ev.trace));
  std::ostringstream s;
  s << "episodes " << episodes << '\n';
  s << "slots " << ev.trace.size() << '\n';
  s << "mean_rate_bps " << format_double(ev.mean_rate) << '\n';
  s << "spectral_efficiency " << format_double(ev.mean_se) << '\n';
  s << "mean_reward " << format_double(ev.mean_reward) << '\n';
  write_text_file(run.path("summary.txt"), s.str());
  run.finish();
  std::printf("mean rate %s bps, spectral efficiency %s, mean reward %s\n",
              format_double(ev.mean_rate).c_str(), format_double(ev.mean_se).c_str(),
              format_double(ev.mean_reward).c_str());
  return 0;
}

int cmd_baselines(const std::string& config_path, const std::string& out_dir,
                  const std::string& scheme, double grid_step_km,
                  const std::string& checkpoint_path) {
  FileConfig cfg = load_config(config_path);
  calibrate_reward(cfg.scenario);
  const ScenarioConfig& sc = cfg.scenario;
  const double grid_step = grid_step_km > 0 ? grid_step_km * 1000.0 : sc.sweep_grid;

  RunDir run(out_dir, "baselines", cfg);

  std::vector<SchemeResult> results;
  if (scheme == "all") {
    ScenarioConfig swept = sc;
    swept.sweep_grid = grid_step;
    MlpParams params;
    const bool with_dqn = !checkpoint_path.empty();
    if (with_dqn) params = load_checkpoint(checkpoint_path);
    Comparison cmp = compare_schemes(swept, with_dqn ? &params : nullptr);
    results = std::move(cmp.results);
  } else if (scheme == "direct") {
    results.push_back(direct_rate(sc));
  } else if (scheme == "sat-only") {
    results.push_back(sat_only(sc));
  } else if (scheme == "fixed-ground" || scheme == "fixed-hap") {
    const double alt = scheme == "fixed-hap" ? sc.hap_init.z : 0.0;
    SweepResult sw = fixed_relay_sweep(sc, grid_step, alt);
    sw.best.scheme = scheme == "fixed-hap" ? "fixed_hap" : "fixed_ground";
    results.push_back(std::move(sw.best));
  } else {
    std::fprintf(stderr,
                 "unknown scheme '%s'; valid: direct, sat-only, fixed-ground, fixed-hap, all\n",
                 scheme.c_str());
    return 1;
  }

  std::vector<ComparisonRow> rows;
  run.manifest.outputs = {"comparison.csv"};
  for (const SchemeResult& r : results) {
    ComparisonRow row;
    row.scheme = r.scheme;
    row.mean_rate = r.mean_rate;
    row.spectral_efficiency = r.spectral_efficiency;
    row.has_relay = r.has_relay;
    row.relay = r.relay;
    rows.push_back(row);
    run.manifest.outputs.push_back("trace_" + r.scheme + ".csv");
  }
  run.begin();

  std::string csv = "scheme,mean_rate_bps,spectral_efficiency,relay_x_km,relay_y_km,relay_z_km\n";
  for (const ComparisonRow& r : rows) {
    csv += r.scheme + ',' + format_double(r.mean_rate) + ',' +
           format_double(r.spectral_efficiency);
    if (r.has_relay) {
      csv += ',' + format_double(r.relay.x / 1000.0) + ',' + format_double(r.relay.y / 1000.0) +
             ',' + format_double(r.relay.z / 1000.0);
    } else {
      csv += ",,,";
    }
    csv += '\n';
  }
  write_text_file(run.path("comparison.csv"), csv);
  for (const SchemeResult& r : results) {
    write_text_file(run.path("trace_" + r.scheme + ".csv"), trace_csv(r.trace));
  }
  run.finish();
  std::fputs(csv.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slotted Src->SAT->HAP->Dst relay simulator and DQN trainer"};
  app.require_subcommand(1);

  std::string config_path, out_dir, checkpoint_path, resume_path;
  std::string scheme = "all";
  std::uint64_t seed = 1;
  long long iterations_override = -1;
  int episodes = 1;
  double grid_step_km = -1;

  CLI::App* t = app.add_subcommand("train", "train a DQN policy");
  t->add_option("--config", config_path, "scenario/training config file")->required();
  t->add_option("--seed", seed, "training seed");
  t->add_option("--out", out_dir, "output directory")->required();
  t->add_option("--iterations", iterations_override, "override config iterations");
  t->add_option("--resume", resume_path, "checkpoint to continue from");

  CLI::App* e = app.add_subcommand("evaluate", "greedy rollout of a checkpoint");
  e->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
  e->add_option("--config", config_path, "scenario config file")->required();
  e->add_option("--out", out_dir, "output directory")->required();
  e->add_option("--episodes", episodes, "episodes to roll out");

  CLI::App* b = app.add_subcommand("baselines", "run comparison schemes");
  b->add_option("--config", config_path, "scenario config file")->required();
  b->add_option("--out", out_dir, "output directory")->required();
  b->add_option("--scheme", scheme, "direct|sat-only|fixed-ground|fixed-hap|all");
  b->add_option("--grid-step", grid_step_km, "placement grid step in km");
  b->add_option("--checkpoint", checkpoint_path, "add a trained-policy row");

  CLI11_PARSE(app, argc, argv);

  try {
    if (t->parsed()) {
      return cmd_train(config_path, seed, out_dir, iterations_override, resume_path);
    }
    if (e->parsed()) return cmd_evaluate(checkpoint_path, config_path, out_dir, episodes);
    if (b->parsed()) {
      return cmd_baselines(config_path, out_dir, scheme, grid_step_km, checkpoint_path);
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 1;
}
