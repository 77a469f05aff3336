#include "mamc/nn.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mamc {

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " has non-finite entries");
  }
}

void resize_matrix(std::vector<double>& m, std::size_t n) {
  if (m.size() != n) m.resize(n);
}

}  // namespace

std::size_t MlpSpec::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    n += static_cast<std::size_t>(widths[l] + 1) * static_cast<std::size_t>(widths[l + 1]);
  }
  return n;
}

void MlpSpec::validate() const {
  if (widths.size() < 2) throw std::invalid_argument("MlpSpec needs input and output widths");
  for (int w : widths) {
    if (w <= 0) throw std::invalid_argument("MlpSpec widths must be positive");
  }
  if (head == OutputHead::Bounded) {
    if (bounds.size() != static_cast<std::size_t>(widths.back())) {
      throw std::invalid_argument("bounded head needs one bound per output dim");
    }
    for (double b : bounds) {
      if (!(b > 0.0)) throw std::invalid_argument("action bounds must be positive");
    }
  } else if (!bounds.empty()) {
    throw std::invalid_argument("linear head takes no bounds");
  }
}

ParamVector init_params(const MlpSpec& spec, RandomStream& rng) {
  spec.validate();
  ParamVector p;
  p.reserve(spec.param_count());
  for (std::size_t l = 0; l + 1 < spec.widths.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(spec.widths[l]));
    const std::size_t n = static_cast<std::size_t>(spec.widths[l] + 1) *
                          static_cast<std::size_t>(spec.widths[l + 1]);
    for (std::size_t k = 0; k < n; ++k) p.push_back(rng.uniform(-bound, bound));
  }
  return p;
}

void forward(const MlpSpec& spec, const ParamVector& params, std::span<const double> in,
             int batch, std::vector<double>& out, Trace* trace) {
  spec.validate();
  if (batch <= 0) throw std::invalid_argument("batch must be positive");
  const std::size_t b = static_cast<std::size_t>(batch);
  if (in.size() != b * static_cast<std::size_t>(spec.input_width())) {
    throw std::invalid_argument("input size does not match batch x input_width");
  }
  if (params.size() != spec.param_count()) {
    throw std::invalid_argument("parameter vector length mismatch");
  }

  const int layers = spec.layer_count();
  Trace local;
  Trace& tr = trace ? *trace : local;
  tr.batch = batch;
  tr.act.resize(static_cast<std::size_t>(layers) + 1);
  tr.pre.resize(static_cast<std::size_t>(layers));

  resize_matrix(tr.act[0], in.size());
  std::copy(in.begin(), in.end(), tr.act[0].begin());

  std::size_t off = 0;
  for (int l = 0; l < layers; ++l) {
    const std::size_t nin = static_cast<std::size_t>(spec.widths[l]);
    const std::size_t nout = static_cast<std::size_t>(spec.widths[l + 1]);
    const double* W = params.data() + off;
    const double* bias = W + nin * nout;
    off += (nin + 1) * nout;

    resize_matrix(tr.pre[l], b * nout);
    resize_matrix(tr.act[l + 1], b * nout);
    const double* src = tr.act[l].data();
    double* z = tr.pre[l].data();
    double* a = tr.act[l + 1].data();

    for (std::size_t row = 0; row < b; ++row) {
      const double* x = src + row * nin;
      double* zr = z + row * nout;
      for (std::size_t j = 0; j < nout; ++j) {
        const double* w = W + j * nin;
        double acc = bias[j];
        for (std::size_t i = 0; i < nin; ++i) acc += w[i] * x[i];
        zr[j] = acc;
      }
    }

    const bool last = (l == layers - 1);
    if (!last) {
      for (std::size_t k = 0; k < b * nout; ++k) a[k] = z[k] > 0.0 ? z[k] : 0.0;
    } else if (spec.head == OutputHead::Linear) {
      for (std::size_t k = 0; k < b * nout; ++k) a[k] = z[k];
    } else {
      for (std::size_t row = 0; row < b; ++row) {
        for (std::size_t j = 0; j < nout; ++j) {
          a[row * nout + j] = spec.bounds[j] * std::tanh(z[row * nout + j]);
        }
      }
    }
  }

  out.assign(tr.act[layers].begin(), tr.act[layers].end());
}

std::vector<double> forward_one(const MlpSpec& spec, const ParamVector& params,
                                std::span<const double> in) {
  std::vector<double> out;
  forward(spec, params, in, 1, out);
  return out;
}

void backward(const MlpSpec& spec, const ParamVector& params, const Trace& trace,
              std::span<const double> dout, ParamVector* param_grad,
              std::vector<double>* input_grad) {
  const int layers = spec.layer_count();
  const std::size_t b = static_cast<std::size_t>(trace.batch);
  if (dout.size() != b * static_cast<std::size_t>(spec.output_width())) {
    throw std::invalid_argument("dout size does not match batch x output_width");
  }
  if (param_grad) param_grad->assign(params.size(), 0.0);

  // dz for the layer currently being processed.
  std::vector<double> dz(dout.begin(), dout.end());
  if (spec.head == OutputHead::Bounded) {
    const std::size_t nout = static_cast<std::size_t>(spec.output_width());
    const std::vector<double>& z = trace.pre[static_cast<std::size_t>(layers) - 1];
    for (std::size_t row = 0; row < b; ++row) {
      for (std::size_t j = 0; j < nout; ++j) {
        const double t = std::tanh(z[row * nout + j]);
        dz[row * nout + j] *= spec.bounds[j] * (1.0 - t * t);
      }
    }
  }

  // Offsets of each layer's block in the flat parameter vector.
  std::vector<std::size_t> offsets(static_cast<std::size_t>(layers));
  {
    std::size_t off = 0;
    for (int l = 0; l < layers; ++l) {
      offsets[static_cast<std::size_t>(l)] = off;
      off += static_cast<std::size_t>(spec.widths[l] + 1) *
             static_cast<std::size_t>(spec.widths[l + 1]);
    }
  }

  std::vector<double> da;
  for (int l = layers - 1; l >= 0; --l) {
    const std::size_t nin = static_cast<std::size_t>(spec.widths[l]);
    const std::size_t nout = static_cast<std::size_t>(spec.widths[l + 1]);
    const double* W = params.data() + offsets[static_cast<std::size_t>(l)];
    const std::vector<double>& a_in = trace.act[static_cast<std::size_t>(l)];

    if (param_grad) {
      double* dW = param_grad->data() + offsets[static_cast<std::size_t>(l)];
      double* db = dW + nin * nout;
      for (std::size_t row = 0; row < b; ++row) {
        const double* x = a_in.data() + row * nin;
        const double* dzr = dz.data() + row * nout;
        for (std::size_t j = 0; j < nout; ++j) {
          const double g = dzr[j];
          if (g == 0.0) continue;
          double* w = dW + j * nin;
          for (std::size_t i = 0; i < nin; ++i) w[i] += g * x[i];
          db[j] += g;
        }
      }
    }

    const bool need_da = (l > 0) || (input_grad != nullptr);
    if (!need_da) break;

    da.assign(b * nin, 0.0);
    for (std::size_t row = 0; row < b; ++row) {
      const double* dzr = dz.data() + row * nout;
      double* dar = da.data() + row * nin;
      for (std::size_t j = 0; j < nout; ++j) {
        const double g = dzr[j];
        if (g == 0.0) continue;
        const double* w = W + j * nin;
        for (std::size_t i = 0; i < nin; ++i) dar[i] += g * w[i];
      }
    }

    if (l > 0) {
      // Gate through the ReLU of the previous layer.
      const std::vector<double>& zprev = trace.pre[static_cast<std::size_t>(l) - 1];
      dz.resize(b * nin);
      for (std::size_t k = 0; k < b * nin; ++k) dz[k] = zprev[k] > 0.0 ? da[k] : 0.0;
    } else {
      *input_grad = da;
    }
  }
}

LossGrad critic_loss_grad(const MlpSpec& critic_spec, const ParamVector& critic,
                          std::span<const double> inputs, int batch,
                          std::span<const double> targets) {
  if (critic_spec.output_width() != 1) {
    throw std::invalid_argument("critic network must have scalar output");
  }
  if (targets.size() != static_cast<std::size_t>(batch)) {
    throw std::invalid_argument("one target per batch row required");
  }
  Trace tr;
  std::vector<double> out;
  forward(critic_spec, critic, inputs, batch, out, &tr);

  const double inv_b = 1.0 / static_cast<double>(batch);
  double loss = 0.0;
  std::vector<double> dout(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double r = out[k] - targets[k];
    loss += r * r;
    dout[k] = 2.0 * r * inv_b;
  }
  loss *= inv_b;

  LossGrad lg;
  lg.value = loss;
  backward(critic_spec, critic, tr, dout, &lg.grad, nullptr);
  return lg;
}

LossGrad actor_objective_grad(const MlpSpec& actor_spec, const ParamVector& actor,
                              const MlpSpec& critic_spec, const ParamVector& critic,
                              std::span<const double> states, int batch) {
  const int sdim = actor_spec.input_width();
  const int adim = actor_spec.output_width();
  if (critic_spec.input_width() != sdim + adim) {
    throw std::invalid_argument("critic input width must equal state dim + action dim");
  }
  if (critic_spec.output_width() != 1) {
    throw std::invalid_argument("critic network must have scalar output");
  }

  const std::size_t b = static_cast<std::size_t>(batch);
  Trace actor_tr, critic_tr;
  std::vector<double> actions;
  forward(actor_spec, actor, states, batch, actions, &actor_tr);

  std::vector<double> sa(b * static_cast<std::size_t>(sdim + adim));
  for (std::size_t row = 0; row < b; ++row) {
    double* dst = sa.data() + row * static_cast<std::size_t>(sdim + adim);
    const double* s = states.data() + row * static_cast<std::size_t>(sdim);
    const double* a = actions.data() + row * static_cast<std::size_t>(adim);
    for (int i = 0; i < sdim; ++i) dst[i] = s[i];
    for (int i = 0; i < adim; ++i) dst[sdim + i] = a[i];
  }

  std::vector<double> q;
  forward(critic_spec, critic, sa, batch, q, &critic_tr);

  const double inv_b = 1.0 / static_cast<double>(batch);
  double objective = 0.0;
  for (double v : q) objective += v;
  objective *= inv_b;

  std::vector<double> dq(b, inv_b);
  std::vector<double> dsa;
  backward(critic_spec, critic, critic_tr, dq, nullptr, &dsa);

  std::vector<double> dactions(b * static_cast<std::size_t>(adim));
  for (std::size_t row = 0; row < b; ++row) {
    const double* src = dsa.data() + row * static_cast<std::size_t>(sdim + adim) + sdim;
    double* dst = dactions.data() + row * static_cast<std::size_t>(adim);
    for (int i = 0; i < adim; ++i) dst[i] = src[i];
  }

  LossGrad lg;
  lg.value = objective;
  backward(actor_spec, actor, actor_tr, dactions, &lg.grad, nullptr);
  return lg;
}

void adam_step(ParamVector& params, const ParamVector& grad, AdamState& state) {
  if (grad.size() != params.size()) throw std::invalid_argument("gradient length mismatch");
  check_finite(grad, "gradient");
  if (state.m.size() != params.size()) state.m.assign(params.size(), 0.0);
  if (state.v.size() != params.size()) state.v.assign(params.size(), 0.0);

  state.t += 1;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grad[k];
    state.m[k] = state.beta1 * state.m[k] + (1.0 - state.beta1) * g;
    state.v[k] = state.beta2 * state.v[k] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[k] / c1;
    const double vhat = state.v[k] / c2;
    params[k] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

void soft_update(ParamVector& target, const ParamVector& online, double tau) {
  if (target.size() != online.size()) throw std::invalid_argument("parameter length mismatch");
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("tau must lie in [0, 1]");
  for (std::size_t k = 0; k < target.size(); ++k) {
    target[k] = tau * online[k] + (1.0 - tau) * target[k];
  }
}

ParamVector finite_difference_grad(const ParamVector& params,
                                   const std::function<double(const ParamVector&)>& f,
                                   double h) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  ParamVector g(params.size());
  ParamVector p = params;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double saved = p[k];
    p[k] = saved + h;
    const double up = f(p);
    p[k] = saved - h;
    const double dn = f(p);
    p[k] = saved;
    g[k] = (up - dn) / (2.0 * h);
  }
  return g;
}

}  // namespace mamc
