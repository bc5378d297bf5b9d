#include "bd/cnn_lstm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bd {

using nn::Tensor;

nlohmann::json CnnLstmConfig::to_json() const {
  return {
      {"word_dim", word_dim},
      {"feat_dim", feat_dim},
      {"conv1_filters", conv1_filters},
      {"conv1_kernel", conv1_kernel},
      {"pool", pool},
      {"conv_dropout", conv_dropout},
      {"conv2_filters", conv2_filters},
      {"conv2_kernel", conv2_kernel},
      {"lstm_units", lstm_units},
      {"lstm_dropout", lstm_dropout},
      {"lstm_recurrent_dropout", lstm_recurrent_dropout},
      {"concat_units", concat_units},
      {"num_classes", num_classes},
      {"l_ctx", l_ctx},
      {"l_feat", l_feat},
  };
}

CnnLstmConfig CnnLstmConfig::from_json(const nlohmann::json& j) {
  CnnLstmConfig c;
  c.word_dim = j.at("word_dim").get<std::size_t>();
  c.feat_dim = j.at("feat_dim").get<std::size_t>();
  c.conv1_filters = j.at("conv1_filters").get<std::size_t>();
  c.conv1_kernel = j.at("conv1_kernel").get<std::size_t>();
  c.pool = j.at("pool").get<std::size_t>();
  c.conv_dropout = j.at("conv_dropout").get<double>();
  c.conv2_filters = j.at("conv2_filters").get<std::size_t>();
  c.conv2_kernel = j.at("conv2_kernel").get<std::size_t>();
  c.lstm_units = j.at("lstm_units").get<std::size_t>();
  c.lstm_dropout = j.at("lstm_dropout").get<double>();
  c.lstm_recurrent_dropout = j.at("lstm_recurrent_dropout").get<double>();
  c.concat_units = j.at("concat_units").get<std::size_t>();
  c.num_classes = j.at("num_classes").get<std::size_t>();
  c.l_ctx = j.at("l_ctx").get<std::size_t>();
  c.l_feat = j.at("l_feat").get<std::size_t>();
  return c;
}

namespace {

// Pooled length of the feature branch after conv1 + maxpool.
std::size_t pooled_len(const CnnLstmConfig& cfg) {
  return (cfg.l_feat - cfg.conv1_kernel + 1) / cfg.pool;
}

void validate_config(const CnnLstmConfig& cfg) {
  if (cfg.concat_units != cfg.conv2_filters + 2 * cfg.lstm_units)
    throw std::invalid_argument("cnnlstm: concat_units " + std::to_string(cfg.concat_units) +
                                " != conv2_filters + 2 * lstm_units = " +
                                std::to_string(cfg.conv2_filters + 2 * cfg.lstm_units));
  if (cfg.l_feat < cfg.conv1_kernel)
    throw std::invalid_argument("cnnlstm: l_feat shorter than conv1 kernel");
  if (pooled_len(cfg) < cfg.conv2_kernel)
    throw std::invalid_argument("cnnlstm: pooled feature length " + std::to_string(pooled_len(cfg)) +
                                " shorter than conv2 kernel " + std::to_string(cfg.conv2_kernel));
  if (cfg.num_classes == 0 || cfg.lstm_units == 0) throw std::invalid_argument("cnnlstm: zero-width layer");
}

void fill_uniform(std::vector<double>& data, double lo, double hi, Rng& rng) {
  for (double& v : data) v = rng.uniform(lo, hi);
}

void fill_fan_in(Tensor& t, std::size_t fan_in, Rng& rng) {
  const double limit = std::sqrt(1.0 / static_cast<double>(fan_in));
  fill_uniform(t.data, -limit, limit, rng);
}

}  // namespace

std::vector<ParamRef> cnnlstm_params(CnnLstmModel& m) {
  return {
      {"word_emb", &m.word_emb.data, {m.word_emb.rows(), m.word_emb.dim}},
      {"feat_emb", &m.feat_emb.data, {m.feat_emb.rows(), m.feat_emb.dim}},
      {"conv1_kernels", &m.conv1_kernels.data, m.conv1_kernels.shape},
      {"conv1_bias", &m.conv1_bias.data, m.conv1_bias.shape},
      {"conv2_kernels", &m.conv2_kernels.data, m.conv2_kernels.shape},
      {"conv2_bias", &m.conv2_bias.data, m.conv2_bias.shape},
      {"lstm_fwd_w_x", &m.lstm_fwd.w_x.data, m.lstm_fwd.w_x.shape},
      {"lstm_fwd_w_h", &m.lstm_fwd.w_h.data, m.lstm_fwd.w_h.shape},
      {"lstm_fwd_bias", &m.lstm_fwd.bias.data, m.lstm_fwd.bias.shape},
      {"lstm_bwd_w_x", &m.lstm_bwd.w_x.data, m.lstm_bwd.w_x.shape},
      {"lstm_bwd_w_h", &m.lstm_bwd.w_h.data, m.lstm_bwd.w_h.shape},
      {"lstm_bwd_bias", &m.lstm_bwd.bias.data, m.lstm_bwd.bias.shape},
      {"dense_w", &m.dense_w.data, m.dense_w.shape},
      {"dense_b", &m.dense_b.data, m.dense_b.shape},
  };
}

void CnnLstmGrads::zero() {
  word_emb.fill(0.0);
  feat_emb.fill(0.0);
  conv1_kernels.fill(0.0);
  conv1_bias.fill(0.0);
  conv2_kernels.fill(0.0);
  conv2_bias.fill(0.0);
  lstm_fwd.w_x.fill(0.0);
  lstm_fwd.w_h.fill(0.0);
  lstm_fwd.bias.fill(0.0);
  lstm_bwd.w_x.fill(0.0);
  lstm_bwd.w_h.fill(0.0);
  lstm_bwd.bias.fill(0.0);
  dense_w.fill(0.0);
  dense_b.fill(0.0);
}

CnnLstmGrads make_grads(const CnnLstmModel& m) {
  CnnLstmGrads g;
  g.word_emb = Tensor({m.word_emb.rows(), m.word_emb.dim});
  g.feat_emb = Tensor({m.feat_emb.rows(), m.feat_emb.dim});
  g.conv1_kernels = Tensor(m.conv1_kernels.shape);
  g.conv1_bias = Tensor(m.conv1_bias.shape);
  g.conv2_kernels = Tensor(m.conv2_kernels.shape);
  g.conv2_bias = Tensor(m.conv2_bias.shape);
  g.lstm_fwd.w_x = Tensor(m.lstm_fwd.w_x.shape);
  g.lstm_fwd.w_h = Tensor(m.lstm_fwd.w_h.shape);
  g.lstm_fwd.bias = Tensor(m.lstm_fwd.bias.shape);
  g.lstm_bwd.w_x = Tensor(m.lstm_bwd.w_x.shape);
  g.lstm_bwd.w_h = Tensor(m.lstm_bwd.w_h.shape);
  g.lstm_bwd.bias = Tensor(m.lstm_bwd.bias.shape);
  g.dense_w = Tensor(m.dense_w.shape);
  g.dense_b = Tensor(m.dense_b.shape);
  return g;
}

std::vector<std::pair<std::string, std::vector<double>*>> grad_refs(CnnLstmGrads& g) {
  return {
      {"word_emb", &g.word_emb.data},
      {"feat_emb", &g.feat_emb.data},
      {"conv1_kernels", &g.conv1_kernels.data},
      {"conv1_bias", &g.conv1_bias.data},
      {"conv2_kernels", &g.conv2_kernels.data},
      {"conv2_bias", &g.conv2_bias.data},
      {"lstm_fwd_w_x", &g.lstm_fwd.w_x.data},
      {"lstm_fwd_w_h", &g.lstm_fwd.w_h.data},
      {"lstm_fwd_bias", &g.lstm_fwd.bias.data},
      {"lstm_bwd_w_x", &g.lstm_bwd.w_x.data},
      {"lstm_bwd_w_h", &g.lstm_bwd.w_h.data},
      {"lstm_bwd_bias", &g.lstm_bwd.bias.data},
      {"dense_w", &g.dense_w.data},
      {"dense_b", &g.dense_b.data},
  };
}

CnnLstmModel cnnlstm_build(const CnnLstmConfig& cfg, const Vocab& vocab, EmbeddingTable word_embeddings,
                           std::uint64_t seed) {
  validate_config(cfg);
  if (word_embeddings.dim != cfg.word_dim)
    throw std::invalid_argument("cnnlstm_build: word embedding width " +
                                std::to_string(word_embeddings.dim) + " != config word_dim");
  if (word_embeddings.rows() != vocab.word_size())
    throw std::invalid_argument("cnnlstm_build: word embedding rows do not cover the vocabulary");

  CnnLstmModel m;
  m.cfg = cfg;
  m.word_emb = std::move(word_embeddings);
  m.word_emb.trainable = true;
  m.word_vocab_hash = vocab.word_hash();
  m.feature_vocab_hash = vocab.feature_hash();

  Rng rng(seed);

  m.feat_emb.dim = cfg.feat_dim;
  m.feat_emb.trainable = true;
  m.feat_emb.data.assign(vocab.feature_size() * cfg.feat_dim, 0.0);
  for (std::size_t r = 1; r < vocab.feature_size(); ++r)  // PAD row stays zero
    for (std::size_t d = 0; d < cfg.feat_dim; ++d) m.feat_emb.row(r)[d] = rng.uniform(-0.05, 0.05);

  m.conv1_kernels = Tensor({cfg.conv1_kernel, cfg.feat_dim, cfg.conv1_filters});
  fill_fan_in(m.conv1_kernels, cfg.conv1_kernel * cfg.feat_dim, rng);
  m.conv1_bias = Tensor({cfg.conv1_filters});

  m.conv2_kernels = Tensor({cfg.conv2_kernel, cfg.conv1_filters, cfg.conv2_filters});
  fill_fan_in(m.conv2_kernels, cfg.conv2_kernel * cfg.conv1_filters, rng);
  m.conv2_bias = Tensor({cfg.conv2_filters});

  for (nn::LstmParams* lstm : {&m.lstm_fwd, &m.lstm_bwd}) {
    *lstm = nn::make_lstm_params(cfg.word_dim, cfg.lstm_units);
    fill_fan_in(lstm->w_x, cfg.word_dim, rng);
    fill_fan_in(lstm->w_h, cfg.lstm_units, rng);
    // Forget-gate bias +1 so early training does not flush the cell state.
    for (std::size_t i = 0; i < cfg.lstm_units; ++i) lstm->bias.at(cfg.lstm_units + i) = 1.0;
  }

  m.dense_w = Tensor({cfg.num_classes, cfg.concat_units});
  fill_fan_in(m.dense_w, cfg.concat_units, rng);
  m.dense_b = Tensor({cfg.num_classes});
  return m;
}

std::size_t cnnlstm_param_count(const CnnLstmConfig& cfg, std::size_t word_vocab,
                                std::size_t feature_vocab) {
  const std::size_t lstm = 4 * cfg.lstm_units * (cfg.word_dim + cfg.lstm_units + 1);
  return word_vocab * cfg.word_dim + feature_vocab * cfg.feat_dim +
         cfg.conv1_kernel * cfg.feat_dim * cfg.conv1_filters + cfg.conv1_filters +
         cfg.conv2_kernel * cfg.conv1_filters * cfg.conv2_filters + cfg.conv2_filters + 2 * lstm +
         cfg.num_classes * cfg.concat_units + cfg.num_classes;
}

std::size_t cnnlstm_param_count(const CnnLstmModel& model) {
  std::size_t total = 0;
  for (const auto& p : cnnlstm_params(const_cast<CnnLstmModel&>(model))) total += p.data->size();
  return total;
}

DropoutPlan draw_dropout_plan(const CnnLstmModel& m, Rng& rng) {
  DropoutPlan plan;
  const std::size_t conv_elems = pooled_len(m.cfg) * m.cfg.conv1_filters;
  plan.conv_mask = nn::dropout_mask(conv_elems, m.cfg.conv_dropout, rng);
  plan.fwd_input_mask = nn::dropout_mask(m.cfg.word_dim, m.cfg.lstm_dropout, rng);
  plan.fwd_recurrent_mask = nn::dropout_mask(m.cfg.lstm_units, m.cfg.lstm_recurrent_dropout, rng);
  plan.bwd_input_mask = nn::dropout_mask(m.cfg.word_dim, m.cfg.lstm_dropout, rng);
  plan.bwd_recurrent_mask = nn::dropout_mask(m.cfg.lstm_units, m.cfg.lstm_recurrent_dropout, rng);
  return plan;
}

double cnnlstm_loss_and_grads(const CnnLstmModel& m, const EncodedExample& ex, CnnLstmGrads* grads,
                              const DropoutPlan* plan, std::array<double, kNumConceptTypes>* probs_out) {
  const CnnLstmConfig& cfg = m.cfg;
  if (ex.before_ids.size() != cfg.l_ctx || ex.after_ids.size() != cfg.l_ctx ||
      ex.feature_ids.size() != cfg.l_feat)
    throw std::invalid_argument("cnnlstm: encoded lengths do not match the config");

  // ---- feature branch ----
  const Tensor feat_embedded = nn::embedding_forward(ex.feature_ids, m.feat_emb);
  const Tensor conv1_out = nn::conv1d_forward(feat_embedded, m.conv1_kernels, m.conv1_bias);
  const nn::MaxPool pool = nn::maxpool1d_forward(conv1_out, cfg.pool);

  Tensor pooled = pool.out;
  if (plan)
    for (std::size_t i = 0; i < pooled.size(); ++i) pooled.data[i] *= plan->conv_mask[i];

  const Tensor conv2_out = nn::conv1d_forward(pooled, m.conv2_kernels, m.conv2_bias);
  const nn::GlobalMaxPool gmp = nn::global_maxpool_forward(conv2_out);

  // ---- context branches ----
  const Tensor before_embedded = nn::embedding_forward(ex.before_ids, m.word_emb);
  std::vector<std::uint32_t> after_rev(ex.after_ids.rbegin(), ex.after_ids.rend());
  const Tensor after_embedded = nn::embedding_forward(after_rev, m.word_emb);

  nn::LstmCache fwd_cache, bwd_cache;
  const Tensor h_fwd =
      nn::lstm_forward(before_embedded, m.lstm_fwd, grads ? &fwd_cache : nullptr,
                       plan ? &plan->fwd_input_mask : nullptr, plan ? &plan->fwd_recurrent_mask : nullptr);
  const Tensor h_bwd =
      nn::lstm_forward(after_embedded, m.lstm_bwd, grads ? &bwd_cache : nullptr,
                       plan ? &plan->bwd_input_mask : nullptr, plan ? &plan->bwd_recurrent_mask : nullptr);

  // ---- concatenate -> relu -> softmax head ----
  Tensor concat({cfg.concat_units});
  std::copy(gmp.out.data.begin(), gmp.out.data.end(), concat.data.begin());
  std::copy(h_fwd.data.begin(), h_fwd.data.end(),
            concat.data.begin() + static_cast<std::ptrdiff_t>(cfg.conv2_filters));
  std::copy(h_bwd.data.begin(), h_bwd.data.end(),
            concat.data.begin() + static_cast<std::ptrdiff_t>(cfg.conv2_filters + cfg.lstm_units));

  const Tensor hidden = nn::relu_forward(concat);
  const nn::SoftmaxXent head = nn::dense_softmax_xent_forward(hidden, m.dense_w, m.dense_b, ex.label);

  if (probs_out) {
    probs_out->fill(0.0);
    for (std::size_t c = 0; c < head.probs.size() && c < probs_out->size(); ++c)
      (*probs_out)[c] = head.probs[c];
  }
  if (!grads) return head.loss;

  // ---- backward ----
  const Tensor grad_hidden =
      nn::dense_softmax_xent_backward(hidden, m.dense_w, head, ex.label, grads->dense_w, grads->dense_b);
  const Tensor grad_concat = nn::relu_backward(concat, grad_hidden);

  Tensor grad_gmp({cfg.conv2_filters});
  std::copy(grad_concat.data.begin(),
            grad_concat.data.begin() + static_cast<std::ptrdiff_t>(cfg.conv2_filters),
            grad_gmp.data.begin());
  Tensor grad_h_fwd({cfg.lstm_units});
  Tensor grad_h_bwd({cfg.lstm_units});
  for (std::size_t i = 0; i < cfg.lstm_units; ++i) {
    grad_h_fwd.at(i) = grad_concat.at(cfg.conv2_filters + i);
    grad_h_bwd.at(i) = grad_concat.at(cfg.conv2_filters + cfg.lstm_units + i);
  }

  // feature branch backward
  const Tensor grad_conv2_out = nn::global_maxpool_backward(conv2_out, gmp, grad_gmp);
  Tensor grad_pooled(pooled.shape);
  nn::conv1d_backward(pooled, m.conv2_kernels, grad_conv2_out, grad_pooled, grads->conv2_kernels,
                      grads->conv2_bias);
  if (plan)
    for (std::size_t i = 0; i < grad_pooled.size(); ++i) grad_pooled.data[i] *= plan->conv_mask[i];
  const Tensor grad_conv1_out = nn::maxpool1d_backward(conv1_out, pool, grad_pooled);
  Tensor grad_feat_embedded(feat_embedded.shape);
  nn::conv1d_backward(feat_embedded, m.conv1_kernels, grad_conv1_out, grad_feat_embedded,
                      grads->conv1_kernels, grads->conv1_bias);
  nn::embedding_backward(ex.feature_ids, grad_feat_embedded, grads->feat_emb);

  // context branch backward
  const Tensor grad_before = nn::lstm_backward(before_embedded, m.lstm_fwd, fwd_cache, grad_h_fwd,
                                               grads->lstm_fwd);
  const Tensor grad_after = nn::lstm_backward(after_embedded, m.lstm_bwd, bwd_cache, grad_h_bwd,
                                              grads->lstm_bwd);
  nn::embedding_backward(ex.before_ids, grad_before, grads->word_emb);
  nn::embedding_backward(after_rev, grad_after, grads->word_emb);

  return head.loss;
}

CnnLstmPrediction cnnlstm_predict(const CnnLstmModel& m, const EncodedExample& ex,
                                  const std::vector<ConceptType>* candidates) {
  CnnLstmPrediction pred;
  EncodedExample probe = ex;
  probe.label = 0;  // loss value unused; any valid label works
  cnnlstm_loss_and_grads(m, probe, nullptr, nullptr, &pred.probs);

  int best = -1;
  if (candidates && !candidates->empty()) {
    // Candidates ascend by class index, so strict comparison keeps the
    // earliest canonical index on ties.
    for (ConceptType t : *candidates) {
      const int c = class_index(t);
      if (best < 0 || pred.probs[static_cast<std::size_t>(c)] > pred.probs[static_cast<std::size_t>(best)])
        best = c;
    }
  } else {
    best = 0;
    for (int c = 1; c < static_cast<int>(m.cfg.num_classes); ++c)
      if (pred.probs[static_cast<std::size_t>(c)] > pred.probs[static_cast<std::size_t>(best)]) best = c;
  }
  pred.type = concept_type_from_index(best);
  return pred;
}

std::vector<std::size_t> build_epoch_stream(const std::vector<int>& labels, int oversample_factor) {
  std::vector<std::size_t> stream;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool rare = labels[i] == class_index(ConceptType::Mutation) ||
                      labels[i] == class_index(ConceptType::CellLine);
    const int copies = rare ? oversample_factor : 1;
    for (int c = 0; c < copies; ++c) stream.push_back(i);
  }
  return stream;
}

TrainHistory cnnlstm_train(CnnLstmModel& model, const std::vector<TrainExample>& train,
                           const TrainConfig& config) {
  if (train.empty()) throw std::invalid_argument("cnnlstm_train: empty training split");

  // Validation slice from the original (not oversampled) distribution.
  std::uint64_t seed_state = config.seed;
  Rng split_rng(splitmix64(seed_state));
  Rng train_rng(splitmix64(seed_state));

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  split_rng.shuffle(order);
  const auto val_n = static_cast<std::size_t>(config.val_fraction * static_cast<double>(train.size()));
  std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(val_n));
  std::vector<std::size_t> core_idx(order.begin() + static_cast<std::ptrdiff_t>(val_n), order.end());
  if (core_idx.empty()) throw std::invalid_argument("cnnlstm_train: validation fraction leaves no training data");

  std::vector<int> core_labels(core_idx.size());
  for (std::size_t i = 0; i < core_idx.size(); ++i) core_labels[i] = train[core_idx[i]].enc.label;

  auto params = cnnlstm_params(model);
  CnnLstmGrads grads = make_grads(model);
  auto grad_list = grad_refs(grads);
  std::vector<nn::AdamState> adam_states(params.size());
  std::size_t adam_step_count = 0;

  auto validate = [&]() -> double {
    if (val_idx.empty()) return 0.0;
    std::size_t correct = 0;
    for (std::size_t idx : val_idx) {
      const auto& ex = train[idx];
      const auto pred = cnnlstm_predict(model, ex.enc, ex.candidates.empty() ? nullptr : &ex.candidates);
      if (class_index(pred.type) == ex.enc.label) ++correct;
    }
    // Single-label micro-F1 equals accuracy.
    return static_cast<double>(correct) / static_cast<double>(val_idx.size());
  };

  TrainHistory history;
  std::vector<std::vector<double>> best_params;
  double best_f1 = -1.0;
  int stale = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> stream = build_epoch_stream(core_labels, config.oversample_factor);
    train_rng.shuffle(stream);

    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < stream.size(); begin += config.batch_size) {
      const std::size_t end = std::min(stream.size(), begin + config.batch_size);
      grads.zero();
      for (std::size_t i = begin; i < end; ++i) {
        const auto& ex = train[core_idx[stream[i]]];
        const DropoutPlan plan = draw_dropout_plan(model, train_rng);
        loss_sum += cnnlstm_loss_and_grads(model, ex.enc, &grads, &plan);
      }
      const double inv_b = 1.0 / static_cast<double>(end - begin);
      for (auto& [name, g] : grad_list)
        for (double& v : *g) v *= inv_b;

      ++adam_step_count;
      for (std::size_t p = 0; p < params.size(); ++p) {
        if (params[p].name == "word_emb" && !model.word_emb.trainable) continue;
        nn::adam_step(*params[p].data, *grad_list[p].second, adam_states[p], adam_step_count, config.adam);
      }
    }

    EpochStats stats;
    stats.stream_size = stream.size();
    stats.train_loss = loss_sum / static_cast<double>(stream.size());
    stats.val_micro_f1 = validate();
    history.epochs.push_back(stats);

    if (!val_idx.empty()) {
      if (stats.val_micro_f1 > best_f1) {
        best_f1 = stats.val_micro_f1;
        history.best_epoch = epoch;
        stale = 0;
        best_params.clear();
        for (const auto& p : params) best_params.push_back(*p.data);
      } else if (++stale >= config.patience) {
        history.early_stopped = true;
        break;
      }
    } else {
      history.best_epoch = epoch;
    }
  }

  if (!best_params.empty())
    for (std::size_t p = 0; p < params.size(); ++p) *params[p].data = best_params[p];
  return history;
}

Checkpoint cnnlstm_to_checkpoint(const CnnLstmModel& model) {
  Checkpoint ckpt;
  ckpt.kind = "cnnlstm";
  ckpt.config = model.cfg.to_json();
  ckpt.word_vocab_hash = model.word_vocab_hash;
  ckpt.feature_vocab_hash = model.feature_vocab_hash;
  for (const auto& p : cnnlstm_params(const_cast<CnnLstmModel&>(model))) {
    Tensor t(p.shape);
    t.data = *p.data;
    ckpt.tensors.emplace_back(p.name, std::move(t));
  }
  return ckpt;
}

CnnLstmModel cnnlstm_from_checkpoint(const Checkpoint& ckpt, const Vocab& vocab) {
  if (ckpt.kind != "cnnlstm") throw std::runtime_error("checkpoint kind is not cnnlstm");
  if (ckpt.word_vocab_hash != vocab.word_hash() || ckpt.feature_vocab_hash != vocab.feature_hash())
    throw std::runtime_error("checkpoint vocab hash does not match the supplied vocabulary");

  const CnnLstmConfig cfg = CnnLstmConfig::from_json(ckpt.config);
  validate_config(cfg);

  CnnLstmModel m;
  m.cfg = cfg;
  m.word_vocab_hash = ckpt.word_vocab_hash;
  m.feature_vocab_hash = ckpt.feature_vocab_hash;
  m.word_emb.dim = cfg.word_dim;
  m.feat_emb.dim = cfg.feat_dim;
  m.lstm_fwd = nn::make_lstm_params(cfg.word_dim, cfg.lstm_units);
  m.lstm_bwd = nn::make_lstm_params(cfg.word_dim, cfg.lstm_units);
  m.conv1_kernels = Tensor({cfg.conv1_kernel, cfg.feat_dim, cfg.conv1_filters});
  m.conv1_bias = Tensor({cfg.conv1_filters});
  m.conv2_kernels = Tensor({cfg.conv2_kernel, cfg.conv1_filters, cfg.conv2_filters});
  m.conv2_bias = Tensor({cfg.conv2_filters});
  m.dense_w = Tensor({cfg.num_classes, cfg.concat_units});
  m.dense_b = Tensor({cfg.num_classes});
  m.word_emb.data.assign(vocab.word_size() * cfg.word_dim, 0.0);
  m.feat_emb.data.assign(vocab.feature_size() * cfg.feat_dim, 0.0);

  for (auto& p : cnnlstm_params(m)) {
    const Tensor& stored = ckpt.tensor(p.name);
    if (stored.shape != p.shape)
      throw std::runtime_error("checkpoint tensor \"" + p.name + "\" has unexpected shape");
    *p.data = stored.data;
  }
  return m;
}

}  // namespace bd
