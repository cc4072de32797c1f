#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ntn/config.hpp"
#include "ntn/env.hpp"
#include "ntn/neural.hpp"
#include "ntn/rng.hpp"
#include "ntn/trace.hpp"
#include "ntn/transition.hpp"

// The DQN loop: epsilon-greedy acting, uniform replay, periodic target
// sync, Adam on the squared TD error, and greedy evaluation. Fully
// deterministic for a given (config, seed).

namespace ntn {

class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity);
  void push(Transition t);  // overwrites the oldest entry once full
  int size() const { return full_ ? cap_ : next_; }
  int capacity() const { return cap_; }
  const Transition& at(int i) const { return store_[i]; }  // storage order
  const Transition& sample(Rng& rng) const;  // uniform over occupied slots

 private:
  std::vector<Transition> store_;
  int cap_ = 0;
  int next_ = 0;
  bool full_ = false;
};

// With probability eps a uniform action, otherwise the greedy argmax of the
// q-values (ties to the lowest index). Draws uniform01 once, then one
// bounded draw only on the explore branch.
int select_action(const MlpParams& p, const std::vector<double>& obs, double eps, Rng& rng);

// Linear decay from eps_start to eps_end over the first eps_decay_frac of
// cfg.iterations (0-based step index), constant afterwards.
double epsilon_at(long long step, const DqnConfig& cfg);

struct TrainResult {
  MlpParams params;
  std::vector<double> losses;               // one entry per gradient update
  std::vector<long long> loss_iterations;   // env step of each update
  std::vector<double> episode_mean_rewards; // one entry per completed episode
  std::string log_csv;  // iteration,loss,epsilon,episode,episode_mean_reward
  long long iterations = 0;
  long long updates = 0;
};

TrainResult train(const ScenarioConfig& scenario, const DqnConfig& cfg, std::uint64_t seed);

// Same loop but starting from existing parameters (checkpoint resume).
TrainResult train_from(MlpParams start, const ScenarioConfig& scenario, const DqnConfig& cfg,
                       std::uint64_t seed);

struct EvalResult {
  double mean_rate = 0;    // bps, over all slots of all episodes
  double mean_se = 0;      // mean_rate / bandwidth
  double mean_reward = 0;
  std::vector<SlotRecord> trace;  // episodes concatenated, n restarts at 1
};

// Greedy (eps = 0) rollouts; deterministic, no randomness consumed.
EvalResult evaluate(const MlpParams& p, const ScenarioConfig& scenario, int episodes);

}  // namespace ntn
