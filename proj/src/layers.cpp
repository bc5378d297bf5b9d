#include "bd/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bd::nn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

// --------------------------------------------------------------------------
// embedding
// --------------------------------------------------------------------------

Tensor embedding_forward(const std::vector<std::uint32_t>& ids, const EmbeddingTable& table) {
  Tensor out({ids.size(), table.dim});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= table.rows())
      throw std::out_of_range("embedding_forward: id " + std::to_string(ids[i]) + " >= table size " +
                              std::to_string(table.rows()));
    const double* row = table.row(ids[i]);
    std::copy(row, row + table.dim, out.data.begin() + static_cast<std::ptrdiff_t>(i * table.dim));
  }
  require_finite(out, "embedding_forward");
  return out;
}

void embedding_backward(const std::vector<std::uint32_t>& ids, const Tensor& grad_out,
                        Tensor& grad_table) {
  const std::size_t dim = grad_table.dim(1);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == 0) continue;  // PAD gets no gradient
    double* dst = grad_table.data.data() + ids[i] * dim;
    const double* src = grad_out.data.data() + i * dim;
    for (std::size_t d = 0; d < dim; ++d) dst[d] += src[d];
  }
}

// --------------------------------------------------------------------------
// conv1d
// --------------------------------------------------------------------------

Tensor conv1d_forward(const Tensor& x, const Tensor& kernels, const Tensor& bias) {
  const std::size_t len = x.dim(0);
  const std::size_t d_in = x.dim(1);
  const std::size_t k = kernels.dim(0);
  const std::size_t filters = kernels.dim(2);
  if (kernels.dim(1) != d_in) throw std::invalid_argument("conv1d: kernel depth mismatch");
  if (len < k)
    throw std::invalid_argument("conv1d: input length " + std::to_string(len) + " shorter than kernel " +
                                std::to_string(k));

  Tensor out({len - k + 1, filters});
  for (std::size_t t = 0; t < out.dim(0); ++t) {
    double* out_row = out.data.data() + t * filters;
    for (std::size_t f = 0; f < filters; ++f) out_row[f] = bias.at(f);
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double* x_row = x.data.data() + (t + kk) * d_in;
      const double* k_slab = kernels.data.data() + kk * d_in * filters;
      for (std::size_t d = 0; d < d_in; ++d) {
        const double xv = x_row[d];
        if (xv == 0.0) continue;
        const double* k_row = k_slab + d * filters;
        for (std::size_t f = 0; f < filters; ++f) out_row[f] += xv * k_row[f];
      }
    }
  }
  require_finite(out, "conv1d_forward");
  return out;
}

void conv1d_backward(const Tensor& x, const Tensor& kernels, const Tensor& grad_out, Tensor& grad_x,
                     Tensor& grad_kernels, Tensor& grad_bias) {
  const std::size_t d_in = x.dim(1);
  const std::size_t k = kernels.dim(0);
  const std::size_t filters = kernels.dim(2);

  for (std::size_t t = 0; t < grad_out.dim(0); ++t) {
    const double* go_row = grad_out.data.data() + t * filters;
    for (std::size_t f = 0; f < filters; ++f) grad_bias.at(f) += go_row[f];
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double* x_row = x.data.data() + (t + kk) * d_in;
      double* gx_row = grad_x.data.data() + (t + kk) * d_in;
      const double* k_slab = kernels.data.data() + kk * d_in * filters;
      double* gk_slab = grad_kernels.data.data() + kk * d_in * filters;
      for (std::size_t d = 0; d < d_in; ++d) {
        const double* k_row = k_slab + d * filters;
        double* gk_row = gk_slab + d * filters;
        const double xv = x_row[d];
        double gx = 0.0;
        for (std::size_t f = 0; f < filters; ++f) {
          gx += go_row[f] * k_row[f];
          gk_row[f] += go_row[f] * xv;
        }
        gx_row[d] += gx;
      }
    }
  }
}

// --------------------------------------------------------------------------
// max pooling
// --------------------------------------------------------------------------

MaxPool maxpool1d_forward(const Tensor& x, std::size_t pool) {
  if (pool < 1) throw std::invalid_argument("maxpool1d: pool must be >= 1");
  const std::size_t len = x.dim(0);
  const std::size_t f_dim = x.dim(1);
  const std::size_t out_len = len / pool;

  MaxPool result;
  result.out = Tensor({out_len, f_dim});
  result.argmax.assign(out_len * f_dim, 0);
  for (std::size_t t = 0; t < out_len; ++t) {
    for (std::size_t f = 0; f < f_dim; ++f) {
      std::size_t best = t * pool;
      double best_v = x.at(best, f);
      for (std::size_t p = 1; p < pool; ++p) {
        const double v = x.at(t * pool + p, f);
        if (v > best_v) {  // strict: ties keep the earliest index
          best_v = v;
          best = t * pool + p;
        }
      }
      result.out.at(t, f) = best_v;
      result.argmax[t * f_dim + f] = best * f_dim + f;
    }
  }
  return result;
}

Tensor maxpool1d_backward(const Tensor& x, const MaxPool& cache, const Tensor& grad_out) {
  Tensor grad_x(x.shape);
  for (std::size_t i = 0; i < cache.argmax.size(); ++i)
    grad_x.data[cache.argmax[i]] += grad_out.data[i];
  return grad_x;
}

GlobalMaxPool global_maxpool_forward(const Tensor& x) {
  const std::size_t len = x.dim(0);
  const std::size_t f_dim = x.dim(1);
  if (len == 0) throw std::invalid_argument("global_maxpool: empty input");

  GlobalMaxPool result;
  result.out = Tensor({f_dim});
  result.argmax.assign(f_dim, 0);
  for (std::size_t f = 0; f < f_dim; ++f) {
    std::size_t best = 0;
    double best_v = x.at(std::size_t{0}, f);
    for (std::size_t t = 1; t < len; ++t) {
      if (x.at(t, f) > best_v) {
        best_v = x.at(t, f);
        best = t;
      }
    }
    result.out.at(f) = best_v;
    result.argmax[f] = best;
  }
  return result;
}

Tensor global_maxpool_backward(const Tensor& x, const GlobalMaxPool& cache, const Tensor& grad_out) {
  Tensor grad_x(x.shape);
  for (std::size_t f = 0; f < cache.argmax.size(); ++f)
    grad_x.at(cache.argmax[f], f) += grad_out.at(f);
  return grad_x;
}

// --------------------------------------------------------------------------
// LSTM
// --------------------------------------------------------------------------

LstmParams make_lstm_params(std::size_t input_dim, std::size_t units) {
  LstmParams p;
  p.w_x = Tensor({4 * units, input_dim});
  p.w_h = Tensor({4 * units, units});
  p.bias = Tensor({4 * units});
  return p;
}

Tensor lstm_forward(const Tensor& x, const LstmParams& params, LstmCache* cache,
                    const std::vector<double>* input_mask, const std::vector<double>* recurrent_mask) {
  const std::size_t steps = x.dim(0);
  const std::size_t d = x.dim(1);
  const std::size_t u = params.units();
  if (steps == 0) throw std::invalid_argument("lstm_forward: empty sequence");

  Tensor x_eff = x;
  if (input_mask) {
    for (std::size_t t = 0; t < steps; ++t)
      for (std::size_t i = 0; i < d; ++i) x_eff.at(t, i) *= (*input_mask)[i];
  }

  if (cache) {
    cache->x_eff = x_eff;
    cache->gates.clear();
    cache->cells.clear();
    cache->hidden.clear();
    cache->input_mask = input_mask ? *input_mask : std::vector<double>{};
    cache->recurrent_mask = recurrent_mask ? *recurrent_mask : std::vector<double>{};
  }

  std::vector<double> h(u, 0.0);
  std::vector<double> c(u, 0.0);
  std::vector<double> h_eff(u, 0.0);
  Tensor pre({4 * u});

  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t i = 0; i < u; ++i)
      h_eff[i] = recurrent_mask ? h[i] * (*recurrent_mask)[i] : h[i];

    for (std::size_t r = 0; r < 4 * u; ++r) {
      double acc = params.bias.at(r);
      const double* wx_row = params.w_x.data.data() + r * d;
      const double* xt = x_eff.data.data() + t * d;
      for (std::size_t i = 0; i < d; ++i) acc += wx_row[i] * xt[i];
      const double* wh_row = params.w_h.data.data() + r * u;
      for (std::size_t i = 0; i < u; ++i) acc += wh_row[i] * h_eff[i];
      pre.at(r) = acc;
    }

    Tensor gates({4 * u});
    for (std::size_t i = 0; i < u; ++i) {
      const double gi = sigmoid(pre.at(i));
      const double gf = sigmoid(pre.at(u + i));
      const double gg = std::tanh(pre.at(2 * u + i));
      const double go = sigmoid(pre.at(3 * u + i));
      gates.at(i) = gi;
      gates.at(u + i) = gf;
      gates.at(2 * u + i) = gg;
      gates.at(3 * u + i) = go;
      c[i] = gf * c[i] + gi * gg;
      h[i] = go * std::tanh(c[i]);
    }

    if (cache) {
      cache->gates.push_back(std::move(gates));
      Tensor ct({u}), ht({u});
      std::copy(c.begin(), c.end(), ct.data.begin());
      std::copy(h.begin(), h.end(), ht.data.begin());
      cache->cells.push_back(std::move(ct));
      cache->hidden.push_back(std::move(ht));
    }
  }

  Tensor out({u});
  std::copy(h.begin(), h.end(), out.data.begin());
  require_finite(out, "lstm_forward");
  return out;
}

Tensor lstm_backward(const Tensor& x, const LstmParams& params, const LstmCache& cache,
                     const Tensor& grad_h, LstmGrads& grads) {
  const std::size_t steps = x.dim(0);
  const std::size_t d = x.dim(1);
  const std::size_t u = params.units();
  const bool has_imask = !cache.input_mask.empty();
  const bool has_rmask = !cache.recurrent_mask.empty();

  Tensor grad_x(x.shape);
  std::vector<double> dh(grad_h.data.begin(), grad_h.data.end());
  std::vector<double> dc(u, 0.0);
  std::vector<double> dpre(4 * u, 0.0);

  for (std::size_t t = steps; t-- > 0;) {
    const Tensor& gates = cache.gates[t];
    const Tensor& c_t = cache.cells[t];
    const double* c_prev = t > 0 ? cache.cells[t - 1].data.data() : nullptr;
    const double* h_prev = t > 0 ? cache.hidden[t - 1].data.data() : nullptr;

    for (std::size_t i = 0; i < u; ++i) {
      const double gi = gates.at(i);
      const double gf = gates.at(u + i);
      const double gg = gates.at(2 * u + i);
      const double go = gates.at(3 * u + i);
      const double tc = std::tanh(c_t.at(i));
      const double cp = c_prev ? c_prev[i] : 0.0;

      const double dct = dh[i] * go * (1.0 - tc * tc) + dc[i];
      dpre[i] = dct * gg * gi * (1.0 - gi);                 // input gate
      dpre[u + i] = dct * cp * gf * (1.0 - gf);             // forget gate
      dpre[2 * u + i] = dct * gi * (1.0 - gg * gg);         // cell candidate
      dpre[3 * u + i] = dh[i] * tc * go * (1.0 - go);       // output gate
      dc[i] = dct * gf;
    }

    // Parameter grads and upstream grads from the preactivations.
    const double* xt = cache.x_eff.data.data() + t * d;
    std::vector<double> h_eff(u, 0.0);
    if (t > 0)
      for (std::size_t i = 0; i < u; ++i)
        h_eff[i] = has_rmask ? h_prev[i] * cache.recurrent_mask[i] : h_prev[i];

    std::fill(dh.begin(), dh.end(), 0.0);
    double* gx_row = grad_x.data.data() + t * d;
    for (std::size_t r = 0; r < 4 * u; ++r) {
      const double dp = dpre[r];
      if (dp == 0.0) continue;
      double* gwx_row = grads.w_x.data.data() + r * d;
      const double* wx_row = params.w_x.data.data() + r * d;
      for (std::size_t i = 0; i < d; ++i) {
        gwx_row[i] += dp * xt[i];
        gx_row[i] += dp * wx_row[i];
      }
      double* gwh_row = grads.w_h.data.data() + r * u;
      const double* wh_row = params.w_h.data.data() + r * u;
      for (std::size_t i = 0; i < u; ++i) {
        gwh_row[i] += dp * h_eff[i];
        dh[i] += dp * wh_row[i];
      }
      grads.bias.at(r) += dp;
    }
    if (has_rmask)
      for (std::size_t i = 0; i < u; ++i) dh[i] *= cache.recurrent_mask[i];
  }

  if (has_imask) {
    for (std::size_t t = 0; t < steps; ++t)
      for (std::size_t i = 0; i < d; ++i) grad_x.at(t, i) *= cache.input_mask[i];
  }
  return grad_x;
}

// --------------------------------------------------------------------------
// dense + softmax + cross-entropy
// --------------------------------------------------------------------------

std::vector<double> softmax(const std::vector<double>& logits) {
  double max_logit = logits[0];
  for (double v : logits) max_logit = std::max(max_logit, v);
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

SoftmaxXent dense_softmax_xent_forward(const Tensor& h, const Tensor& w, const Tensor& bias, int label) {
  const std::size_t classes = w.dim(0);
  const std::size_t width = w.dim(1);
  if (label < 0 || static_cast<std::size_t>(label) >= classes)
    throw std::out_of_range("dense_softmax_xent: label " + std::to_string(label) + " >= " +
                            std::to_string(classes));

  std::vector<double> logits(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    double acc = bias.at(c);
    const double* w_row = w.data.data() + c * width;
    for (std::size_t i = 0; i < width; ++i) acc += w_row[i] * h.at(i);
    logits[c] = acc;
  }

  SoftmaxXent result;
  result.probs = softmax(logits);
  result.loss = -std::log(std::max(result.probs[static_cast<std::size_t>(label)], 1e-300));
  return result;
}

Tensor dense_softmax_xent_backward(const Tensor& h, const Tensor& w, const SoftmaxXent& cache,
                                   int label, Tensor& grad_w, Tensor& grad_bias) {
  const std::size_t classes = w.dim(0);
  const std::size_t width = w.dim(1);
  Tensor grad_h({width});
  for (std::size_t c = 0; c < classes; ++c) {
    const double dlogit = cache.probs[c] - (static_cast<int>(c) == label ? 1.0 : 0.0);
    grad_bias.at(c) += dlogit;
    double* gw_row = grad_w.data.data() + c * width;
    const double* w_row = w.data.data() + c * width;
    for (std::size_t i = 0; i < width; ++i) {
      gw_row[i] += dlogit * h.at(i);
      grad_h.at(i) += dlogit * w_row[i];
    }
  }
  return grad_h;
}

// --------------------------------------------------------------------------
// dropout / relu
// --------------------------------------------------------------------------

std::vector<double> dropout_mask(std::size_t n, double rate, Rng& rng) {
  std::vector<double> mask(n, 1.0);
  if (rate <= 0.0) return mask;
  const double scale = 1.0 / (1.0 - rate);
  for (std::size_t i = 0; i < n; ++i) mask[i] = rng.uniform() < rate ? 0.0 : scale;
  return mask;
}

Tensor dropout_forward(const Tensor& x, double rate, Rng& rng, bool training,
                       std::vector<double>* mask_out) {
  if (!training || rate <= 0.0) {
    if (mask_out) mask_out->assign(x.size(), 1.0);
    return x;
  }
  std::vector<double> mask = dropout_mask(x.size(), rate, rng);
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= mask[i];
  if (mask_out) *mask_out = std::move(mask);
  return out;
}

Tensor relu_forward(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
  Tensor grad = grad_out;
  for (std::size_t i = 0; i < grad.size(); ++i)
    if (x.data[i] <= 0.0) grad.data[i] = 0.0;
  return grad;
}

}  // namespace bd::nn
