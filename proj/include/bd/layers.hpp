#pragma once

#include <cstdint>
#include <vector>

#include "bd/embedding.hpp"
#include "bd/rng.hpp"
#include "bd/tensor.hpp"

namespace bd::nn {

// ---------------------------------------------------------------------------
// Embedding lookup. PAD rows are zero and never receive gradient.
// ---------------------------------------------------------------------------

Tensor embedding_forward(const std::vector<std::uint32_t>& ids, const EmbeddingTable& table);

// Accumulates d(loss)/d(table rows) into grad_table ([rows, dim]).
void embedding_backward(const std::vector<std::uint32_t>& ids, const Tensor& grad_out,
                        Tensor& grad_table);

// ---------------------------------------------------------------------------
// 1-D convolution, valid (no padding) cross-correlation.
//   x [L, Din], kernels [K, Din, F], bias [F]  ->  out [L-K+1, F]
// ---------------------------------------------------------------------------

Tensor conv1d_forward(const Tensor& x, const Tensor& kernels, const Tensor& bias);

void conv1d_backward(const Tensor& x, const Tensor& kernels, const Tensor& grad_out, Tensor& grad_x,
                     Tensor& grad_kernels, Tensor& grad_bias);

// ---------------------------------------------------------------------------
// Max pooling over non-overlapping windows; trailing remainder positions are
// dropped; ties break toward the earliest index.
// ---------------------------------------------------------------------------

struct MaxPool {
  Tensor out;                       // [L/pool, F]
  std::vector<std::size_t> argmax;  // flat index into x per output element
};

MaxPool maxpool1d_forward(const Tensor& x, std::size_t pool);
Tensor maxpool1d_backward(const Tensor& x, const MaxPool& cache, const Tensor& grad_out);

struct GlobalMaxPool {
  Tensor out;                       // [F]
  std::vector<std::size_t> argmax;  // row index per column
};

GlobalMaxPool global_maxpool_forward(const Tensor& x);
Tensor global_maxpool_backward(const Tensor& x, const GlobalMaxPool& cache, const Tensor& grad_out);

// ---------------------------------------------------------------------------
// LSTM returning the final hidden state. Gate order in the stacked weights
// is input, forget, cell, output; zero initial state.
//   w_x [4U, D], w_h [4U, U], bias [4U]
// Optional variational dropout masks (already inverse-scaled) multiply the
// input and the recurrent hidden state at every timestep.
// ---------------------------------------------------------------------------

struct LstmParams {
  Tensor w_x;
  Tensor w_h;
  Tensor bias;

  std::size_t units() const { return w_h.shape.empty() ? 0 : w_h.dim(1); }
};

LstmParams make_lstm_params(std::size_t input_dim, std::size_t units);

struct LstmCache {
  Tensor x_eff;                     // [L, D] masked inputs
  std::vector<Tensor> gates;       // per step [4U] post-activation (i, f, g, o)
  std::vector<Tensor> cells;       // per step [U]
  std::vector<Tensor> hidden;      // per step [U]
  std::vector<double> input_mask;   // empty when unused
  std::vector<double> recurrent_mask;
};

struct LstmGrads {
  Tensor w_x;
  Tensor w_h;
  Tensor bias;
};

// Returns h_L ([units]); fills cache when non-null (required for backward).
Tensor lstm_forward(const Tensor& x, const LstmParams& params, LstmCache* cache,
                    const std::vector<double>* input_mask = nullptr,
                    const std::vector<double>* recurrent_mask = nullptr);

// grad_h is d(loss)/d(h_L); accumulates parameter grads, returns grad wrt x.
Tensor lstm_backward(const Tensor& x, const LstmParams& params, const LstmCache& cache,
                     const Tensor& grad_h, LstmGrads& grads);

// ---------------------------------------------------------------------------
// Dense + softmax + cross-entropy head, max-subtracted for stability.
//   h [H], w [C, H], bias [C]
// ---------------------------------------------------------------------------

struct SoftmaxXent {
  double loss = 0.0;
  std::vector<double> probs;
};

SoftmaxXent dense_softmax_xent_forward(const Tensor& h, const Tensor& w, const Tensor& bias, int label);

// grad of logits is probs - onehot(label); accumulates grad_w/grad_b,
// returns grad wrt h.
Tensor dense_softmax_xent_backward(const Tensor& h, const Tensor& w, const SoftmaxXent& cache,
                                   int label, Tensor& grad_w, Tensor& grad_bias);

std::vector<double> softmax(const std::vector<double>& logits);

// ---------------------------------------------------------------------------
// Inverted dropout: zero with probability rate, scale survivors by
// 1/(1-rate); identity at inference. mask_out (if non-null) receives the
// per-element multiplier for the backward pass.
// ---------------------------------------------------------------------------

Tensor dropout_forward(const Tensor& x, double rate, Rng& rng, bool training,
                       std::vector<double>* mask_out = nullptr);

// Draws a standalone inverse-scaled mask (for variational LSTM dropout).
std::vector<double> dropout_mask(std::size_t n, double rate, Rng& rng);

// ---------------------------------------------------------------------------
// ReLU
// ---------------------------------------------------------------------------

Tensor relu_forward(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);

}  // namespace bd::nn
