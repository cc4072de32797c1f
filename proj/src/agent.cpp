#include "ntn/agent.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ntn {

ReplayBuffer::ReplayBuffer(int capacity) : cap_(capacity) {
  if (capacity < 1) throw std::invalid_argument("replay: capacity must be >= 1");
  store_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (!full_ && static_cast<int>(store_.size()) < cap_) {
    store_.push_back(std::move(t));
    next_ = static_cast<int>(store_.size()) % cap_;
    full_ = static_cast<int>(store_.size()) == cap_ && next_ == 0;
    return;
  }
  store_[next_] = std::move(t);
  next_ = (next_ + 1) % cap_;
}

const Transition& ReplayBuffer::sample(Rng& rng) const {
  if (size() == 0) throw std::runtime_error("replay: sampling from an empty buffer");
  return store_[uniform_int(rng, size())];
}

int select_action(const MlpParams& p, const std::vector<double>& obs, double eps, Rng& rng) {
  const int n = p.dims.back();
  const double u = uniform01(rng);
  if (u < eps) return uniform_int(rng, n);
  const std::vector<double> q = forward(p, obs);
  return argmax_index(q.data(), n);
}

double epsilon_at(long long step, const DqnConfig& cfg) {
  const long long horizon =
      static_cast<long long>(std::floor(cfg.eps_decay_frac * static_cast<double>(cfg.iterations)));
  if (horizon <= 0 || step >= horizon) return cfg.eps_end;
  return cfg.eps_start +
         (cfg.eps_end - cfg.eps_start) * (static_cast<double>(step) / static_cast<double>(horizon));
}

namespace {

std::vector<int> full_dims(const ScenarioConfig& scenario, const DqnConfig& cfg) {
  std::vector<int> dims;
  dims.push_back(scenario.obs_dim());
  dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
  dims.push_back(scenario.action_count());
  return dims;
}

TrainResult run_training(MlpParams params, const ScenarioConfig& scenario, const DqnConfig& cfg,
                         std::uint64_t seed) {
  Env env(scenario);
  MlpParams target = params;
  AdamState adam = make_adam(params, cfg.lr);
  MlpParams grad = zeros_like(params);
  MlpScratch scratch;
  ReplayBuffer replay(cfg.replay_capacity);
  // The acting/sampling stream is decoupled from the init stream so that
  // resuming from a checkpoint reproduces the same exploration.
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);

  TrainResult out;
  out.log_csv = "iteration,loss,epsilon,episode,episode_mean_reward\n";

  std::vector<const Transition*> batch(cfg.batch);
  std::vector<TdSample> samples(cfg.batch);

  std::vector<double> obs = env.reset();
  double ep_sum = 0;
  long long ep_len = 0;
  long long episodes_done = 0;
  double last_ep_mean = ScenarioConfig::nan_value();

  for (long long step = 1; step <= cfg.iterations; ++step) {
    const double eps = epsilon_at(step - 1, cfg);
    const int a = select_action(params, obs, eps, rng);
    StepOutcome o = env.step(a);
    ep_sum += o.reward;
    ep_len += 1;
    Transition tr;
    tr.s = std::move(obs);
    tr.a = a;
    tr.r = o.reward;
    tr.s_next = o.obs;
    tr.done = o.done;
    replay.push(std::move(tr));
    if (o.done) {
      episodes_done += 1;
      last_ep_mean = ep_sum / static_cast<double>(ep_len);
      out.episode_mean_rewards.push_back(last_ep_mean);
      ep_sum = 0;
      ep_len = 0;
      obs = env.reset();
    } else {
      obs = std::move(o.obs);
    }

    if (replay.size() >= cfg.batch && step % cfg.steps_per_update == 0) {
      for (int k = 0; k < cfg.batch; ++k) batch[k] = &replay.sample(rng);
      const std::vector<double> y = td_targets(batch, target, cfg.gamma, scratch);
      for (int k = 0; k < cfg.batch; ++k) {
        samples[k].s = &batch[k]->s;
        samples[k].a = batch[k]->a;
        samples[k].y = y[k];
      }
      const double loss = loss_and_grad(params, samples, grad, cfg.mean_loss, scratch);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("training diverged: non-finite loss at iteration " +
                                 std::to_string(step));
      }
      if (cfg.grad_clip > 0) clip_grad(grad, cfg.grad_clip);
      adam_step(params, grad, adam);
      out.updates += 1;
      out.losses.push_back(loss);
      out.loss_iterations.push_back(step);
      out.log_csv += std::to_string(step);
      out.log_csv += ',';
      out.log_csv += format_double(loss);
      out.log_csv += ',';
      out.log_csv += format_double(eps);
      out.log_csv += ',';
      out.log_csv += std::to_string(episodes_done);
      out.log_csv += ',';
      out.log_csv += format_double(last_ep_mean);
      out.log_csv += '\n';
      if (out.updates % cfg.target_sync == 0) target = params;
    }
  }
  out.params = std::move(params);
  out.iterations = cfg.iterations;
  return out;
}

}  // namespace

TrainResult train(const ScenarioConfig& scenario, const DqnConfig& cfg, std::uint64_t seed) {
  validate(scenario);
  validate(cfg, scenario);
  MlpParams params = init_params(full_dims(scenario, cfg), seed);
  return run_training(std::move(params), scenario, cfg, seed);
}

TrainResult train_from(MlpParams start, const ScenarioConfig& scenario, const DqnConfig& cfg,
                       std::uint64_t seed) {
  validate(scenario);
  validate(cfg, scenario);
  if (start.dims != full_dims(scenario, cfg)) {
    throw std::invalid_argument("train_from: checkpoint dimensions do not match the config");
  }
  return run_training(std::move(start), scenario, cfg, seed);
}

EvalResult evaluate(const MlpParams& p, const ScenarioConfig& scenario, int episodes) {
  if (episodes < 1) throw std::invalid_argument("evaluate: episodes must be >= 1");
  Env env(scenario);
  if (p.dims.front() != env.obs_dim() || p.dims.back() != env.action_dim()) {
    throw std::invalid_argument("evaluate: parameter dimensions do not match the environment");
  }
  EvalResult out;
  MlpScratch scratch;
  double rate_sum = 0, reward_sum = 0;
  long long slots = 0;
  for (int e = 0; e < episodes; ++e) {
    std::vector<double> obs = env.reset();
    while (!env.done()) {
      forward(p, obs.data(), scratch);
      const int a = argmax_index(scratch.acts.back().data(), env.action_dim());
      StepOutcome o = env.step(a);
      out.trace.push_back(env.record(o));
      rate_sum += o.info.e2e;
      reward_sum += o.reward;
      slots += 1;
      obs = std::move(o.obs);
    }
  }
  out.mean_rate = rate_sum / static_cast<double>(slots);
  out.mean_se = out.mean_rate / scenario.radio.bandwidth;
  out.mean_reward = reward_sum / static_cast<double>(slots);
  return out;
}

}  // namespace ntn
