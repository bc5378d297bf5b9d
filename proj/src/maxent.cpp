#include "bd/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "bd/layers.hpp"
#include "bd/rng.hpp"

namespace bd {

std::vector<std::uint32_t> maxent_sparse_features(const ContextWindows& windows,
                                                  const FeatureBundle& bundle, const Vocab& vocab) {
  std::set<std::uint32_t> indices;
  auto add_word = [&](const std::string& token) {
    const std::uint32_t id = vocab.word_id(token);
    if (id != Vocab::kPadId) indices.insert(id);
  };
  for (const auto& t : windows.before) add_word(t);
  for (const auto& t : windows.after) add_word(t);

  const auto offset = static_cast<std::uint32_t>(vocab.word_size());
  for (const auto& t : bundle.all()) {
    const std::uint32_t id = vocab.feature_id(t);
    if (id != Vocab::kPadId) indices.insert(offset + id);
  }
  return {indices.begin(), indices.end()};
}

namespace {

std::array<double, kNumConceptTypes> class_probs(const MaxEntModel& model,
                                                 const std::vector<std::uint32_t>& features) {
  std::vector<double> logits(model.n_classes);
  for (std::size_t c = 0; c < model.n_classes; ++c) {
    double acc = model.bias[c];
    const double* w_row = model.weights.data() + c * model.n_features;
    for (std::uint32_t f : features) acc += w_row[f];
    logits[c] = acc;
  }
  const auto probs = nn::softmax(logits);
  std::array<double, kNumConceptTypes> out{};
  for (std::size_t c = 0; c < model.n_classes; ++c) out[c] = probs[c];
  return out;
}

}  // namespace

void maxent_loss_and_grad(const MaxEntModel& model, const std::vector<SparseExample>& examples,
                          double& loss, std::vector<double>& grad_w, std::vector<double>& grad_b) {
  grad_w.assign(model.weights.size(), 0.0);
  grad_b.assign(model.bias.size(), 0.0);
  loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(examples.size());

  for (const auto& ex : examples) {
    const auto probs = class_probs(model, ex.features);
    loss += -std::log(std::max(probs[static_cast<std::size_t>(ex.label)], 1e-300)) * inv_n;
    for (std::size_t c = 0; c < model.n_classes; ++c) {
      const double dlogit = (probs[c] - (static_cast<int>(c) == ex.label ? 1.0 : 0.0)) * inv_n;
      grad_b[c] += dlogit;
      double* gw_row = grad_w.data() + c * model.n_features;
      for (std::uint32_t f : ex.features) gw_row[f] += dlogit;
    }
  }
  // L2 covers every parameter, bias included, so the large-lambda limit is
  // exactly uniform.
  double reg = 0.0;
  for (double w : model.weights) reg += w * w;
  for (double b : model.bias) reg += b * b;
  loss += 0.5 * model.l2 * reg;
  for (std::size_t i = 0; i < model.weights.size(); ++i) grad_w[i] += model.l2 * model.weights[i];
  for (std::size_t i = 0; i < model.bias.size(); ++i) grad_b[i] += model.l2 * model.bias[i];
}

double maxent_full_loss(const MaxEntModel& model, const std::vector<SparseExample>& examples) {
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(examples.size());
  for (const auto& ex : examples) {
    const auto probs = class_probs(model, ex.features);
    loss += -std::log(std::max(probs[static_cast<std::size_t>(ex.label)], 1e-300)) * inv_n;
  }
  double reg = 0.0;
  for (double w : model.weights) reg += w * w;
  for (double b : model.bias) reg += b * b;
  return loss + 0.5 * model.l2 * reg;
}

MaxEntModel maxent_train(const std::vector<SparseExample>& examples, std::size_t n_features,
                         const MaxEntConfig& config) {
  if (examples.empty()) throw std::invalid_argument("maxent_train: no examples");

  MaxEntModel model;
  model.n_features = n_features;
  model.l2 = config.l2;
  model.weights.assign(model.n_classes * n_features, 0.0);
  model.bias.assign(model.n_classes, 0.0);

  Rng rng(config.seed);
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end - begin);

      // Sparse data gradient, merged per index, then one dense L2 decay.
      std::vector<double> grad_b(model.n_classes, 0.0);
      std::vector<std::pair<std::size_t, double>> grad_w_sparse;
      for (std::size_t i = begin; i < end; ++i) {
        const auto& ex = examples[order[i]];
        const auto probs = class_probs(model, ex.features);
        for (std::size_t c = 0; c < model.n_classes; ++c) {
          const double dlogit = (probs[c] - (static_cast<int>(c) == ex.label ? 1.0 : 0.0)) * inv_b;
          grad_b[c] += dlogit;
          for (std::uint32_t f : ex.features)
            grad_w_sparse.emplace_back(c * model.n_features + f, dlogit);
        }
      }
      std::sort(grad_w_sparse.begin(), grad_w_sparse.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [idx, g] : grad_w_sparse) {
        model.weights[idx] -= config.lr * g;
        if (!std::isfinite(model.weights[idx]))
          throw std::runtime_error("maxent_train: non-finite weight; lower the learning rate");
      }
      for (std::size_t c = 0; c < model.n_classes; ++c) model.bias[c] -= config.lr * grad_b[c];
      if (config.l2 > 0.0) {
        const double decay = 1.0 - config.lr * config.l2;
        if (decay <= 0.0)
          throw std::runtime_error("maxent_train: lr * l2 >= 1 diverges; lower one of them");
        for (double& w : model.weights) w *= decay;
        for (double& b : model.bias) b *= decay;
      }
    }
  }
  return model;
}

MaxEntPrediction maxent_predict(const MaxEntModel& model, const std::vector<std::uint32_t>& features,
                                const std::vector<ConceptType>* candidates) {
  MaxEntPrediction pred;
  pred.probs = class_probs(model, features);

  int best = -1;
  if (candidates && !candidates->empty()) {
    for (ConceptType t : *candidates) {
      const int c = class_index(t);
      if (best < 0 || pred.probs[static_cast<std::size_t>(c)] > pred.probs[static_cast<std::size_t>(best)])
        best = c;
    }
  } else {
    best = 0;
    for (int c = 1; c < static_cast<int>(model.n_classes); ++c)
      if (pred.probs[static_cast<std::size_t>(c)] > pred.probs[static_cast<std::size_t>(best)]) best = c;
  }
  pred.label = best;
  return pred;
}

Checkpoint maxent_to_checkpoint(const MaxEntModel& model, const Vocab& vocab) {
  Checkpoint ckpt;
  ckpt.kind = "maxent";
  ckpt.config = {{"n_classes", model.n_classes}, {"n_features", model.n_features}, {"l2", model.l2}};
  ckpt.word_vocab_hash = vocab.word_hash();
  ckpt.feature_vocab_hash = vocab.feature_hash();

  nn::Tensor w({model.n_classes, model.n_features});
  w.data = model.weights;
  nn::Tensor b({model.n_classes});
  b.data = model.bias;
  ckpt.tensors.emplace_back("weights", std::move(w));
  ckpt.tensors.emplace_back("bias", std::move(b));
  return ckpt;
}

MaxEntModel maxent_from_checkpoint(const Checkpoint& ckpt, const Vocab& vocab) {
  if (ckpt.kind != "maxent") throw std::runtime_error("checkpoint kind is not maxent");
  if (ckpt.word_vocab_hash != vocab.word_hash() || ckpt.feature_vocab_hash != vocab.feature_hash())
    throw std::runtime_error("checkpoint vocab hash does not match the supplied vocabulary");

  MaxEntModel model;
  model.n_classes = ckpt.config.at("n_classes").get<std::size_t>();
  model.n_features = ckpt.config.at("n_features").get<std::size_t>();
  model.l2 = ckpt.config.at("l2").get<double>();
  model.weights = ckpt.tensor("weights").data;
  model.bias = ckpt.tensor("bias").data;
  if (model.weights.size() != model.n_classes * model.n_features)
    throw std::runtime_error("maxent checkpoint: weight shape mismatch");
  return model;
}

}  // namespace bd
