#include "ntn/neural.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ntn/rng.hpp"
#include "ntn/trace.hpp"
#include "ntn/transition.hpp"

namespace ntn {

std::size_t MlpParams::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

namespace {

void check_dims(const std::vector<int>& dims) {
  if (dims.size() < 2) throw std::invalid_argument("mlp: need at least input and output widths");
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("mlp: layer widths must be >= 1");
  }
}

void check_same_shape(const MlpParams& a, const MlpParams& b, const char* what) {
  if (a.dims != b.dims) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

}  // namespace

MlpParams init_params(const std::vector<int>& dims, std::uint64_t seed) {
  check_dims(dims);
  MlpParams p;
  p.dims = dims;
  Rng rng(seed);
  const int layers = static_cast<int>(dims.size()) - 1;
  p.weights.resize(layers);
  p.biases.resize(layers);
  for (int l = 0; l < layers; ++l) {
    const int fan_in = dims[l], fan_out = dims[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    p.weights[l].resize(static_cast<std::size_t>(fan_out) * fan_in);
    for (double& w : p.weights[l]) w = uniform(rng, -limit, limit);
    p.biases[l].assign(fan_out, 0.0);
  }
  return p;
}

MlpParams zeros_like(const MlpParams& p) {
  MlpParams z;
  z.dims = p.dims;
  z.weights.resize(p.weights.size());
  z.biases.resize(p.biases.size());
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    z.weights[l].assign(p.weights[l].size(), 0.0);
    z.biases[l].assign(p.biases[l].size(), 0.0);
  }
  return z;
}

double max_abs_diff(const MlpParams& a, const MlpParams& b) {
  check_same_shape(a, b, "max_abs_diff");
  double m = 0;
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    for (std::size_t i = 0; i < a.weights[l].size(); ++i)
      m = std::max(m, std::abs(a.weights[l][i] - b.weights[l][i]));
    for (std::size_t i = 0; i < a.biases[l].size(); ++i)
      m = std::max(m, std::abs(a.biases[l][i] - b.biases[l][i]));
  }
  return m;
}

namespace {

void ensure_scratch(const MlpParams& p, MlpScratch& s) {
  const std::size_t layers = p.weights.size();
  if (s.acts.size() != layers) s.acts.resize(layers);
  int widest = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    s.acts[l].resize(p.dims[l + 1]);
    widest = std::max(widest, p.dims[l + 1]);
  }
  s.delta.resize(widest);
  s.delta_prev.resize(widest);
}

}  // namespace

void forward(const MlpParams& p, const double* x, MlpScratch& scratch) {
  ensure_scratch(p, scratch);
  const int layers = p.layer_count();
  const double* in = x;
  for (int l = 0; l < layers; ++l) {
    const int n_in = p.dims[l], n_out = p.dims[l + 1];
    const double* w = p.weights[l].data();
    const double* b = p.biases[l].data();
    double* out = scratch.acts[l].data();
    const bool hidden = l + 1 < layers;
    for (int j = 0; j < n_out; ++j) {
      const double* row = w + static_cast<std::size_t>(j) * n_in;
      double acc = b[j];
      for (int i = 0; i < n_in; ++i) acc += row[i] * in[i];
      out[j] = hidden ? std::tanh(acc) : acc;
    }
    in = out;
  }
}

std::vector<double> forward(const MlpParams& p, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != p.dims.front()) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  MlpScratch scratch;
  forward(p, x.data(), scratch);
  return scratch.acts.back();
}

int argmax_index(const double* v, int n) {
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

double max_value(const double* v, int n) { return v[argmax_index(v, n)]; }

double loss_and_grad(const MlpParams& p, const std::vector<TdSample>& batch, MlpParams& grad,
                     bool mean_reduction, MlpScratch& scratch) {
  if (batch.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
  if (grad.dims != p.dims) grad = zeros_like(p);
  for (auto& g : grad.weights) g.assign(g.size(), 0.0);
  for (auto& g : grad.biases) g.assign(g.size(), 0.0);

  const int layers = p.layer_count();
  const int in_dim = p.dims.front();
  const int out_dim = p.dims.back();
  const double scale = mean_reduction ? 1.0 / static_cast<double>(batch.size()) : 1.0;
  double loss = 0;

  for (const TdSample& smp : batch) {
    const std::vector<double>& x = *smp.s;
    if (static_cast<int>(x.size()) != in_dim) {
      throw std::invalid_argument("loss_and_grad: input dimension mismatch");
    }
    if (smp.a < 0 || smp.a >= out_dim) {
      throw std::invalid_argument("loss_and_grad: action index out of range");
    }
    forward(p, x.data(), scratch);
    const double q = scratch.acts[layers - 1][smp.a];
    const double resid = q - smp.y;
    loss += resid * resid;

    // Output layer: only unit smp.a carries error. dL/dq_a = 2 (q_a - y).
    const double dq = 2.0 * resid * scale;
    {
      const int l = layers - 1;
      const int n_in = p.dims[l];
      const double* in = (l == 0) ? x.data() : scratch.acts[l - 1].data();
      double* gw_row = grad.weights[l].data() + static_cast<std::size_t>(smp.a) * n_in;
      for (int i = 0; i < n_in; ++i) gw_row[i] += dq * in[i];
      grad.biases[l][smp.a] += dq;
      if (l > 0) {
        const double* w_row = p.weights[l].data() + static_cast<std::size_t>(smp.a) * n_in;
        for (int i = 0; i < n_in; ++i) scratch.delta_prev[i] = dq * w_row[i];
      }
    }
    // Hidden layers, back to front.
    for (int l = layers - 2; l >= 0; --l) {
      const int n_out = p.dims[l + 1];
      const int n_in = p.dims[l];
      const double* h = scratch.acts[l].data();
      for (int j = 0; j < n_out; ++j) {
        scratch.delta[j] = scratch.delta_prev[j] * (1.0 - h[j] * h[j]);  // tanh'
      }
      const double* in = (l == 0) ? x.data() : scratch.acts[l - 1].data();
      double* gw = grad.weights[l].data();
      double* gb = grad.biases[l].data();
      for (int j = 0; j < n_out; ++j) {
        const double d = scratch.delta[j];
        double* gw_row = gw + static_cast<std::size_t>(j) * n_in;
        for (int i = 0; i < n_in; ++i) gw_row[i] += d * in[i];
        gb[j] += d;
      }
      if (l > 0) {
        const double* w = p.weights[l].data();
        for (int i = 0; i < n_in; ++i) scratch.delta_prev[i] = 0.0;
        for (int j = 0; j < n_out; ++j) {
          const double d = scratch.delta[j];
          const double* w_row = w + static_cast<std::size_t>(j) * n_in;
          for (int i = 0; i < n_in; ++i) scratch.delta_prev[i] += d * w_row[i];
        }
      }
    }
  }
  return mean_reduction ? loss / static_cast<double>(batch.size()) : loss;
}

double loss_and_grad(const MlpParams& p, const std::vector<TdSample>& batch, MlpParams& grad,
                     bool mean_reduction) {
  MlpScratch scratch;
  return loss_and_grad(p, batch, grad, mean_reduction, scratch);
}

std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const MlpParams& target, double gamma, MlpScratch& scratch) {
  if (gamma < 0 || gamma > 1) throw std::invalid_argument("td_targets: gamma must be in [0, 1]");
  std::vector<double> y(batch.size());
  const int out_dim = target.dims.back();
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const Transition& tr = *batch[k];
    if (tr.done) {
      y[k] = tr.r;
    } else {
      forward(target, tr.s_next.data(), scratch);
      y[k] = tr.r + gamma * max_value(scratch.acts.back().data(), out_dim);
    }
  }
  return y;
}

std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const MlpParams& target, double gamma) {
  MlpScratch scratch;
  return td_targets(batch, target, gamma, scratch);
}

AdamState make_adam(const MlpParams& p, double lr) {
  AdamState st;
  st.lr = lr;
  st.m_w.resize(p.weights.size());
  st.v_w.resize(p.weights.size());
  st.m_b.resize(p.biases.size());
  st.v_b.resize(p.biases.size());
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    st.m_w[l].assign(p.weights[l].size(), 0.0);
    st.v_w[l].assign(p.weights[l].size(), 0.0);
    st.m_b[l].assign(p.biases[l].size(), 0.0);
    st.v_b[l].assign(p.biases[l].size(), 0.0);
  }
  return st;
}

namespace {

void adam_update(double* p, const double* g, double* m, double* v, std::size_t n,
                 const AdamState& st, double bc1, double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = st.beta1 * m[i] + (1.0 - st.beta1) * g[i];
    v[i] = st.beta2 * v[i] + (1.0 - st.beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= st.lr * mhat / (std::sqrt(vhat) + st.eps);
  }
}

}  // namespace

void adam_step(MlpParams& p, const MlpParams& grad, AdamState& st) {
  check_same_shape(p, grad, "adam_step");
  st.t += 1;
  const double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.t));
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    adam_update(p.weights[l].data(), grad.weights[l].data(), st.m_w[l].data(), st.v_w[l].data(),
                p.weights[l].size(), st, bc1, bc2);
    adam_update(p.biases[l].data(), grad.biases[l].data(), st.m_b[l].data(), st.v_b[l].data(),
                p.biases[l].size(), st, bc1, bc2);
  }
}

void clip_grad(MlpParams& grad, double max_norm) {
  if (!(max_norm > 0)) return;
  double sq = 0;
  for (const auto& g : grad.weights)
    for (double v : g) sq += v * v;
  for (const auto& g : grad.biases)
    for (double v : g) sq += v * v;
  const double n = std::sqrt(sq);
  if (n <= max_norm) return;
  const double s = max_norm / n;
  for (auto& g : grad.weights)
    for (double& v : g) v *= s;
  for (auto& g : grad.biases)
    for (double& v : g) v *= s;
}

std::string checkpoint_text(const MlpParams& p) {
  std::ostringstream o;
  o << "mlp-checkpoint\nformat 1\ndims " << p.dims.size();
  for (int d : p.dims) o << ' ' << d;
  o << '\n';
  for (int l = 0; l < p.layer_count(); ++l) {
    o << "layer " << l << "\nw";
    for (double v : p.weights[l]) o << ' ' << format_double(v);
    o << "\nb";
    for (double v : p.biases[l]) o << ' ' << format_double(v);
    o << '\n';
  }
  o << "end\n";
  return o.str();
}

namespace {

[[noreturn]] void bad_checkpoint(const std::string& why) {
  throw std::runtime_error("checkpoint: " + why);
}

}  // namespace

MlpParams parse_checkpoint(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  if (!(in >> tok) || tok != "mlp-checkpoint") bad_checkpoint("missing magic line");
  int version = 0;
  if (!(in >> tok >> version) || tok != "format" || version != 1) {
    bad_checkpoint("unsupported format");
  }
  std::size_t ndims = 0;
  if (!(in >> tok >> ndims) || tok != "dims" || ndims < 2) bad_checkpoint("malformed dims");
  std::vector<int> dims(ndims);
  for (auto& d : dims) {
    if (!(in >> d) || d < 1) bad_checkpoint("malformed dims");
  }
  MlpParams p;
  p.dims = dims;
  const int layers = static_cast<int>(ndims) - 1;
  p.weights.resize(layers);
  p.biases.resize(layers);
  for (int l = 0; l < layers; ++l) {
    int idx = -1;
    if (!(in >> tok >> idx) || tok != "layer" || idx != l) bad_checkpoint("layer order");
    if (!(in >> tok) || tok != "w") bad_checkpoint("missing weights");
    p.weights[l].resize(static_cast<std::size_t>(dims[l + 1]) * dims[l]);
    for (double& v : p.weights[l]) {
      if (!(in >> v)) bad_checkpoint("truncated weights");
    }
    if (!(in >> tok) || tok != "b") bad_checkpoint("missing biases");
    p.biases[l].resize(dims[l + 1]);
    for (double& v : p.biases[l]) {
      if (!(in >> v)) bad_checkpoint("truncated biases");
    }
  }
  if (!(in >> tok) || tok != "end") bad_checkpoint("missing end marker");
  return p;
}

void save_checkpoint(const MlpParams& p, const std::string& path) {
  write_text_file(path, checkpoint_text(p));
}

MlpParams load_checkpoint(const std::string& path) {
  return parse_checkpoint(read_text_file(path));
}

}  // namespace ntn
