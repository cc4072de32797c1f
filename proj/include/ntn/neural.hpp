#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Minimal fully-connected Q-network: tanh hidden layers, affine output,
// exact reverse-mode gradients of the squared TD error, Adam, and a
// plain-text checkpoint format with bit-exact round-trip.

namespace ntn {

struct Transition;  // ntn/transition.hpp

struct MlpParams {
  std::vector<int> dims;  // layer widths, input first
  std::vector<std::vector<double>> weights;  // weights[l]: dims[l+1] x dims[l], row-major
  std::vector<std::vector<double>> biases;   // biases[l]: dims[l+1]

  int layer_count() const { return static_cast<int>(weights.size()); }
  std::size_t param_count() const;
};

// Xavier-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases; the
// draw order (layer by layer, row-major) is part of the determinism
// contract. dims needs at least an input and an output width.
MlpParams init_params(const std::vector<int>& dims, std::uint64_t seed);

MlpParams zeros_like(const MlpParams& p);

double max_abs_diff(const MlpParams& a, const MlpParams& b);

// Reusable forward/backward buffers; resized on demand.
struct MlpScratch {
  std::vector<std::vector<double>> acts;  // acts[l]: output of layer l
  std::vector<double> delta, delta_prev;
};

// Fills scratch.acts; the last entry holds the q-values.
void forward(const MlpParams& p, const double* x, MlpScratch& scratch);
std::vector<double> forward(const MlpParams& p, const std::vector<double>& x);

int argmax_index(const double* v, int n);  // ties to the lowest index
double max_value(const double* v, int n);

struct TdSample {
  const std::vector<double>* s = nullptr;  // observation
  int a = 0;                               // action whose q-value is fitted
  double y = 0;                            // precomputed TD target
};

// Summed (default) or mean squared TD error over the batch and its exact
// gradient; only the chosen action's output unit receives error signal.
// grad is overwritten.
double loss_and_grad(const MlpParams& p, const std::vector<TdSample>& batch, MlpParams& grad,
                     bool mean_reduction, MlpScratch& scratch);
double loss_and_grad(const MlpParams& p, const std::vector<TdSample>& batch, MlpParams& grad,
                     bool mean_reduction = false);

// y = r + gamma * max_a' Q(s', a'; target) for non-terminal transitions,
// y = r at the episode boundary. Never reads the online parameters.
std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const MlpParams& target, double gamma, MlpScratch& scratch);
std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const MlpParams& target, double gamma);

struct AdamState {
  std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
  long long t = 0;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

AdamState make_adam(const MlpParams& p, double lr);

// Standard bias-corrected Adam update, in place.
void adam_step(MlpParams& p, const MlpParams& grad, AdamState& st);

// Scales grad so its global L2 norm is at most max_norm (no-op otherwise).
void clip_grad(MlpParams& grad, double max_norm);

// Checkpoint text: "mlp-checkpoint" / "format 1" / dims / per-layer w and b
// lines / "end", numbers as shortest round-trip decimals.
std::string checkpoint_text(const MlpParams& p);
MlpParams parse_checkpoint(const std::string& text);
void save_checkpoint(const MlpParams& p, const std::string& path);
MlpParams load_checkpoint(const std::string& path);

}  // namespace ntn
