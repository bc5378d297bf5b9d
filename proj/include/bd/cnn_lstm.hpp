#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bd/adam.hpp"
#include "bd/checkpoint.hpp"
#include "bd/encoder.hpp"
#include "bd/layers.hpp"

namespace bd {

// Architecture: the feature-token sequence runs through
//   embed -> conv1 -> maxpool -> dropout -> conv2 -> global maxpool,
// the before window through a forward LSTM, the reversed after window
// through a backward LSTM; the three vectors concatenate (conv2_filters +
// 2 * lstm_units wide), pass an elementwise ReLU, and feed the softmax
// head. Both LSTMs end adjacent to the mention.
struct CnnLstmConfig {
  std::size_t word_dim = 200;
  std::size_t feat_dim = 200;
  std::size_t conv1_filters = 200;
  std::size_t conv1_kernel = 5;
  std::size_t pool = 5;
  double conv_dropout = 0.2;
  std::size_t conv2_filters = 1000;
  std::size_t conv2_kernel = 5;
  std::size_t lstm_units = 128;
  double lstm_dropout = 0.2;
  double lstm_recurrent_dropout = 0.2;
  std::size_t concat_units = 1256;  // must equal conv2_filters + 2 * lstm_units
  std::size_t num_classes = kNumConceptTypes;
  std::size_t l_ctx = 21;
  std::size_t l_feat = 30;

  nlohmann::json to_json() const;
  static CnnLstmConfig from_json(const nlohmann::json& j);
};

struct CnnLstmModel {
  CnnLstmConfig cfg;
  EmbeddingTable word_emb;  // trainable, initialized from loaded embeddings
  EmbeddingTable feat_emb;  // trainable, uniform [-0.05, 0.05]
  nn::Tensor conv1_kernels, conv1_bias;
  nn::Tensor conv2_kernels, conv2_bias;
  nn::LstmParams lstm_fwd, lstm_bwd;
  nn::Tensor dense_w, dense_b;
  std::uint64_t word_vocab_hash = 0;
  std::uint64_t feature_vocab_hash = 0;
};

// Flat named views over all trainable blocks, in a fixed order shared by
// the optimizer, the gradient container, and the checkpoint writer.
struct ParamRef {
  std::string name;
  std::vector<double>* data;
  std::vector<std::size_t> shape;
};
std::vector<ParamRef> cnnlstm_params(CnnLstmModel& model);

// Same shapes as the parameters, zero-initialized.
struct CnnLstmGrads {
  nn::Tensor word_emb, feat_emb;
  nn::Tensor conv1_kernels, conv1_bias, conv2_kernels, conv2_bias;
  nn::LstmGrads lstm_fwd, lstm_bwd;
  nn::Tensor dense_w, dense_b;

  void zero();
};
CnnLstmGrads make_grads(const CnnLstmModel& model);
std::vector<std::pair<std::string, std::vector<double>*>> grad_refs(CnnLstmGrads& grads);

// Deterministic initialization: fan-in scaled uniform for conv/dense/LSTM
// weights, +1 forget-gate bias, uniform [-0.05, 0.05] feature embeddings;
// identical seed gives identical parameter bytes. Throws when concat_units
// disagrees with conv2_filters + 2 * lstm_units or the word table's width.
CnnLstmModel cnnlstm_build(const CnnLstmConfig& cfg, const Vocab& vocab, EmbeddingTable word_embeddings,
                           std::uint64_t seed);

// Closed-form trainable parameter count for a config and vocab sizes.
std::size_t cnnlstm_param_count(const CnnLstmConfig& cfg, std::size_t word_vocab,
                                std::size_t feature_vocab);
std::size_t cnnlstm_param_count(const CnnLstmModel& model);

// Training-time stochastic state: one mask per dropout site per example.
struct DropoutPlan {
  std::vector<double> conv_mask;
  std::vector<double> fwd_input_mask, fwd_recurrent_mask;
  std::vector<double> bwd_input_mask, bwd_recurrent_mask;
};
DropoutPlan draw_dropout_plan(const CnnLstmModel& model, Rng& rng);

// Loss (and probabilities) for one example; fills grads when non-null.
// The inference path (plan == nullptr) applies no dropout.
double cnnlstm_loss_and_grads(const CnnLstmModel& model, const EncodedExample& example,
                              CnnLstmGrads* grads, const DropoutPlan* plan = nullptr,
                              std::array<double, kNumConceptTypes>* probs_out = nullptr);

struct CnnLstmPrediction {
  ConceptType type = ConceptType::Gene;
  std::array<double, kNumConceptTypes> probs{};
};

// Softmax argmax; when `candidates` is non-null the argmax is restricted to
// those classes (ties break toward the earliest canonical index).
CnnLstmPrediction cnnlstm_predict(const CnnLstmModel& model, const EncodedExample& example,
                                  const std::vector<ConceptType>* candidates = nullptr);

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  std::uint64_t seed = 42;
  double val_fraction = 0.1;
  int patience = 3;  // epochs without validation micro-F1 improvement
  int oversample_factor = 10;
  nn::AdamHyper adam;
};

struct TrainExample {
  EncodedExample enc;
  std::vector<ConceptType> candidates;
};

struct EpochStats {
  double train_loss = 0.0;
  double val_micro_f1 = 0.0;
  std::size_t stream_size = 0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;   // index into epochs
  bool early_stopped = false;
};

// The per-epoch training stream: every index once, Mutation and CellLine
// indices oversample_factor times. Shuffling happens in the trainer.
std::vector<std::size_t> build_epoch_stream(const std::vector<int>& labels, int oversample_factor);

// Oversampled, seeded mini-batch Adam training with a held-out validation
// slice (never oversampled) and best-checkpoint early stopping. Identical
// seed and data give bitwise-identical parameters and history.
TrainHistory cnnlstm_train(CnnLstmModel& model, const std::vector<TrainExample>& train,
                           const TrainConfig& config);

Checkpoint cnnlstm_to_checkpoint(const CnnLstmModel& model);
CnnLstmModel cnnlstm_from_checkpoint(const Checkpoint& ckpt, const Vocab& vocab);

}  // namespace bd
