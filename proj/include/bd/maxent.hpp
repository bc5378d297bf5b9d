#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bd/checkpoint.hpp"
#include "bd/features.hpp"
#include "bd/vocab.hpp"

namespace bd {

// A multinomial logistic-regression example: sorted unique indicator
// indices over the combined word+feature space.
struct SparseExample {
  std::vector<std::uint32_t> features;
  int label = 0;
  std::vector<ConceptType> candidates;
};

// Binary bag-of-words over both context windows plus all feature tokens.
// Word tokens map through word_id, feature tokens through feature_id offset
// by word_size(); PAD never appears, unknown tokens collapse to UNK.
std::vector<std::uint32_t> maxent_sparse_features(const ContextWindows& windows,
                                                  const FeatureBundle& bundle, const Vocab& vocab);

struct MaxEntConfig {
  double l2 = 1e-4;
  double lr = 0.5;
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
};

struct MaxEntModel {
  std::size_t n_classes = kNumConceptTypes;
  std::size_t n_features = 0;
  std::vector<double> weights;  // n_classes * n_features
  std::vector<double> bias;     // n_classes
  double l2 = 0.0;
};

// Mini-batch gradient descent on the L2-regularized multinomial negative
// log-likelihood. Throws if the loss goes non-finite.
MaxEntModel maxent_train(const std::vector<SparseExample>& examples, std::size_t n_features,
                         const MaxEntConfig& config);

struct MaxEntPrediction {
  int label = 0;
  std::array<double, kNumConceptTypes> probs{};
};

// Argmax over class probabilities; when `candidates` is given, the argmax
// is restricted to those classes.
MaxEntPrediction maxent_predict(const MaxEntModel& model, const std::vector<std::uint32_t>& features,
                                const std::vector<ConceptType>* candidates = nullptr);

// Mean regularized NLL over a fixed set; used to watch training progress.
double maxent_full_loss(const MaxEntModel& model, const std::vector<SparseExample>& examples);

// Mean data NLL gradient plus the L2 term, for gradient verification.
void maxent_loss_and_grad(const MaxEntModel& model, const std::vector<SparseExample>& examples,
                          double& loss, std::vector<double>& grad_w, std::vector<double>& grad_b);

Checkpoint maxent_to_checkpoint(const MaxEntModel& model, const Vocab& vocab);
MaxEntModel maxent_from_checkpoint(const Checkpoint& ckpt, const Vocab& vocab);

}  // namespace bd
