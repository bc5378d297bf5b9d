#include "bd/commands.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "bd/corpus.hpp"
#include "bd/corpus_io.hpp"
#include "bd/encoder.hpp"
#include "bd/gradcheck.hpp"
#include "bd/metrics.hpp"
#include "bd/pipeline.hpp"
#include "bd/pubtator.hpp"
#include "bd/records.hpp"
#include "bd/rule_model.hpp"

namespace bd {

namespace {

namespace fs = std::filesystem;

std::ifstream open_input(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string(what) + ": cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path, const char* what) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error(std::string(what) + ": cannot open " + path + " for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path, const char* what) {
  out.flush();
  if (!out) throw std::runtime_error(std::string(what) + ": write failed for " + path);
}

void announce(const char* cmd, const RunConfig& config) {
  std::printf("[%s] config_hash=%016" PRIx64 "\n", cmd, config.hash());
}

PubTatorCorpus load_documents(const RunConfig& config, const char* what) {
  if (config.documents.empty()) throw std::runtime_error(std::string(what) + ": --documents is required");
  auto in = open_input(config.documents, what);
  return parse_pubtator(in);
}

// Windows + bundles + encodings for a corpus file, sharing one vocabulary.
struct Dataset {
  std::vector<LabeledMention> mentions;
  std::vector<PreparedExample> prepared;
};

Dataset load_dataset(const std::string& corpus_file, const PubTatorCorpus& docs, const RunConfig& config,
                     const char* what) {
  Dataset ds;
  auto in = open_input(corpus_file, what);
  ds.mentions = read_labeled_corpus(in);
  PipelineCounters counters;
  ds.prepared = prepare_examples(ds.mentions, docs.documents, docs.spans, config.window, &counters);
  if (counters.misaligned_mentions > 0)
    std::printf("[%s] %zu mention(s) widened to token boundaries\n", what, counters.misaligned_mentions);
  return ds;
}

}  // namespace

void cmd_build_corpus(const RunConfig& config) {
  announce("build-corpus", config);
  if (config.records.empty()) throw std::runtime_error("build-corpus: --records is required");

  const PubTatorCorpus docs = load_documents(config, "build-corpus");
  auto records_in = open_input(config.records, "build-corpus");
  const auto records = parse_repository_records(records_in);

  CorpusStats stats;
  stats.documents = docs.documents.size();
  stats.spans = docs.spans.size();
  stats.unknown_type_annotations = docs.unknown_type_skipped;
  for (const auto& r : records) ++stats.records_total[static_cast<std::size_t>(class_index(r.concept_type))];

  const JoinResult joined = join_records_with_spans(records, docs.spans);
  stats.unmatched_records = joined.unmatched_records;
  for (const auto& m : joined.matched)
    ++stats.records_matched[static_cast<std::size_t>(class_index(m.record.concept_type))];

  const auto exploded = explode_to_individual_spans(joined.matched);
  for (const auto& m : exploded)
    ++stats.mentions_individual[static_cast<std::size_t>(class_index(m.gold_type))];

  auto ambiguous = filter_ambiguous(exploded, docs.spans);
  std::size_t dropped = 0;
  ambiguous = dedupe_by_identity(ambiguous, &dropped);
  stats.duplicate_mentions_dropped = dropped;
  sort_by_identity(ambiguous);
  for (const auto& m : ambiguous)
    ++stats.mentions_ambiguous[static_cast<std::size_t>(class_index(m.gold_type))];

  // The slice invariant must survive every transform.
  {
    std::unordered_map<std::int64_t, const Document*> doc_index;
    for (const auto& d : docs.documents) doc_index[d.pmid] = &d;
    for (const auto& m : ambiguous) {
      const Document& doc = *doc_index.at(m.pmid);
      if (doc.full_text.compare(m.start, m.end - m.start, m.surface) != 0)
        throw std::logic_error("build-corpus: surface invariant broken for pmid " +
                               std::to_string(m.pmid));
    }
  }

  {
    auto out = open_output(config.corpus_path(), "build-corpus");
    write_labeled_corpus(out, ambiguous);
    finish_output(out, config.corpus_path(), "build-corpus");
  }

  // Text summary, one row per type.
  {
    auto out = open_output(config.stats_text_path(), "build-corpus");
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s %10s %10s %12s %11s\n", "Bioconcept", "Records",
                  "Matched", "Individual", "Ambiguous");
    out << line;
    std::uint64_t tot_r = 0, tot_m = 0, tot_i = 0, tot_a = 0;
    for (int c = 0; c < kNumConceptTypes; ++c) {
      const auto i = static_cast<std::size_t>(c);
      std::snprintf(line, sizeof(line), "%-10s %10llu %10llu %12llu %11llu\n",
                    std::string(to_string(concept_type_from_index(c))).c_str(),
                    static_cast<unsigned long long>(stats.records_total[i]),
                    static_cast<unsigned long long>(stats.records_matched[i]),
                    static_cast<unsigned long long>(stats.mentions_individual[i]),
                    static_cast<unsigned long long>(stats.mentions_ambiguous[i]));
      out << line;
      tot_r += stats.records_total[i];
      tot_m += stats.records_matched[i];
      tot_i += stats.mentions_individual[i];
      tot_a += stats.mentions_ambiguous[i];
    }
    std::snprintf(line, sizeof(line), "%-10s %10llu %10llu %12llu %11llu\n", "Total",
                  static_cast<unsigned long long>(tot_r), static_cast<unsigned long long>(tot_m),
                  static_cast<unsigned long long>(tot_i), static_cast<unsigned long long>(tot_a));
    out << line;
    out << "Documents: " << stats.documents << "  Spans: " << stats.spans
        << "  Unmatched records: " << stats.unmatched_records
        << "  Unknown-type annotations: " << stats.unknown_type_annotations
        << "  Duplicates dropped: " << stats.duplicate_mentions_dropped << "\n";
    finish_output(out, config.stats_text_path(), "build-corpus");
  }

  {
    nlohmann::json per_type = nlohmann::json::object();
    for (int c = 0; c < kNumConceptTypes; ++c) {
      const auto i = static_cast<std::size_t>(c);
      per_type[std::string(to_string(concept_type_from_index(c)))] = {
          {"records", stats.records_total[i]},
          {"matched", stats.records_matched[i]},
          {"individual_mentions", stats.mentions_individual[i]},
          {"ambiguous_mentions", stats.mentions_ambiguous[i]},
      };
    }
    nlohmann::json j = {
        {"per_type", per_type},
        {"documents", stats.documents},
        {"spans", stats.spans},
        {"unmatched_records", stats.unmatched_records},
        {"unknown_type_annotations", stats.unknown_type_annotations},
        {"duplicate_mentions_dropped", stats.duplicate_mentions_dropped},
        {"ambiguous_total", stats.ambiguous_total()},
        {"config", config.to_json()},
    };
    auto out = open_output(config.stats_json_path(), "build-corpus");
    out << j.dump(2) << "\n";
    finish_output(out, config.stats_json_path(), "build-corpus");
  }

  std::printf("[build-corpus] %zu document(s), %zu span(s), %zu ambiguous mention(s) -> %s\n",
              docs.documents.size(), docs.spans.size(), static_cast<std::size_t>(stats.ambiguous_total()),
              config.corpus_path().c_str());
}

void cmd_split(const RunConfig& config) {
  announce("split", config);
  auto strategy = parse_split_strategy(config.strategy);
  if (!strategy) throw std::runtime_error("split: unknown strategy \"" + config.strategy + "\"");

  auto in = open_input(config.corpus_path(), "split");
  const auto mentions = read_labeled_corpus(in);
  const CorpusSplit split = split_corpus(mentions, *strategy, config.test_fraction, config.seed);

  {
    auto out = open_output(config.train_path(), "split");
    write_labeled_corpus(out, split.train);
    finish_output(out, config.train_path(), "split");
  }
  {
    auto out = open_output(config.test_path(), "split");
    write_labeled_corpus(out, split.test);
    finish_output(out, config.test_path(), "split");
  }
  std::printf("[split] strategy=%s seed=%llu train=%zu test=%zu\n",
              std::string(to_string(split.strategy)).c_str(),
              static_cast<unsigned long long>(config.seed), split.train.size(), split.test.size());
}

void cmd_train(const RunConfig& config) {
  announce("train", config);

  if (config.model == "rule") {
    std::printf("[train] the rule baseline has no trainable parameters; nothing to do\n");
    return;
  }

  const PubTatorCorpus docs = load_documents(config, "train");
  const Dataset train_ds = load_dataset(config.train_path(), docs, config, "train");
  if (train_ds.mentions.empty()) throw std::runtime_error("train: empty training corpus");

  std::vector<ContextWindows> windows;
  std::vector<FeatureBundle> bundles;
  for (const auto& ex : train_ds.prepared) {
    windows.push_back(ex.windows);
    bundles.push_back(ex.features);
  }
  const Vocab vocab = build_vocab(windows, bundles, config.min_count);
  {
    auto out = open_output(config.vocab_path(), "train");
    vocab.save(out);
    finish_output(out, config.vocab_path(), "train");
  }
  std::printf("[train] vocab: %zu word(s), %zu feature(s)\n", vocab.word_size(), vocab.feature_size());

  if (config.model == "maxent") {
    std::vector<SparseExample> examples;
    for (const auto& ex : train_ds.prepared) {
      SparseExample se;
      se.features = maxent_sparse_features(ex.windows, ex.features, vocab);
      se.label = class_index(ex.mention.gold_type);
      se.candidates = ex.mention.candidate_types;
      examples.push_back(std::move(se));
    }
    const std::size_t n_features = vocab.word_size() + vocab.feature_size();
    const MaxEntModel model = maxent_train(examples, n_features, config.maxent_config());
    std::printf("[train] maxent full-corpus loss %.6f\n", maxent_full_loss(model, examples));
    save_checkpoint(config.checkpoint_path(), maxent_to_checkpoint(model, vocab));
    std::printf("[train] wrote %s\n", config.checkpoint_path().c_str());
    return;
  }
  if (config.model != "cnnlstm")
    throw std::runtime_error("train: unknown model \"" + config.model + "\"");

  EmbeddingTable word_embeddings;
  if (config.embeddings.empty()) {
    word_embeddings = synthesize_embeddings(vocab, config.word_dim);
  } else {
    auto in = open_input(config.embeddings, "train");
    word_embeddings = load_embeddings(in, vocab, config.word_dim);
  }

  CnnLstmModel model = cnnlstm_build(config.cnnlstm_config(), vocab, std::move(word_embeddings),
                                     config.seed);
  std::printf("[train] cnn+lstm with %zu parameter(s)\n", cnnlstm_param_count(model));

  std::vector<TrainExample> examples;
  for (const auto& ex : train_ds.prepared) {
    TrainExample te;
    te.enc = encode(ex.mention, ex.windows, ex.features, vocab, config.l_ctx, config.l_feat);
    te.candidates = ex.mention.candidate_types;
    examples.push_back(std::move(te));
  }

  if (!config.encoded_cache.empty()) {
    std::vector<EncodedExample> encoded;
    for (const auto& te : examples) encoded.push_back(te.enc);
    auto out = open_output(config.encoded_cache, "train");
    write_encoded_cache(out, encoded);
    finish_output(out, config.encoded_cache, "train");
    std::printf("[train] cached %zu encoded example(s) -> %s\n", encoded.size(),
                config.encoded_cache.c_str());
  }

  const TrainHistory history = cnnlstm_train(model, examples, config.train_config());
  for (std::size_t e = 0; e < history.epochs.size(); ++e) {
    const auto& s = history.epochs[e];
    std::printf("[train] epoch %zu/%zu stream=%zu loss=%.6f val_micro_f1=%.4f%s\n", e + 1,
                config.epochs, s.stream_size, s.train_loss, s.val_micro_f1,
                e == history.best_epoch ? " *" : "");
  }
  if (history.early_stopped) std::printf("[train] early stop after epoch %zu\n", history.epochs.size());

  save_checkpoint(config.checkpoint_path(), cnnlstm_to_checkpoint(model));
  std::printf("[train] wrote %s\n", config.checkpoint_path().c_str());
}

void cmd_predict(const RunConfig& config) {
  announce("predict", config);

  const PubTatorCorpus docs = load_documents(config, "predict");
  const Dataset test_ds = load_dataset(config.test_path(), docs, config, "predict");

  std::vector<PredictionRecord> predictions;
  predictions.reserve(test_ds.mentions.size());

  auto base_record = [](const LabeledMention& m) {
    PredictionRecord p;
    p.pmid = m.pmid;
    p.start = m.start;
    p.end = m.end;
    p.surface = m.surface;
    p.gold_type = m.gold_type;
    return p;
  };

  if (config.model == "rule") {
    const auto order = PriorityOrder::pubtator_default();
    for (const auto& ex : test_ds.prepared) {
      PredictionRecord p = base_record(ex.mention);
      p.predicted_type = rule_predict(ex.mention.candidate_types, order);
      p.probs[static_cast<std::size_t>(class_index(p.predicted_type))] = 1.0;
      predictions.push_back(std::move(p));
    }
  } else if (config.model == "maxent") {
    auto vocab_in = open_input(config.vocab_path(), "predict");
    const Vocab vocab = Vocab::load(vocab_in);
    const MaxEntModel model = maxent_from_checkpoint(load_checkpoint(config.checkpoint_path()), vocab);
    for (const auto& ex : test_ds.prepared) {
      PredictionRecord p = base_record(ex.mention);
      const auto features = maxent_sparse_features(ex.windows, ex.features, vocab);
      const auto pred = maxent_predict(model, features,
                                       config.restrict_candidates ? &ex.mention.candidate_types : nullptr);
      p.predicted_type = concept_type_from_index(pred.label);
      p.probs = pred.probs;
      predictions.push_back(std::move(p));
    }
  } else if (config.model == "cnnlstm") {
    auto vocab_in = open_input(config.vocab_path(), "predict");
    const Vocab vocab = Vocab::load(vocab_in);
    const CnnLstmModel model = cnnlstm_from_checkpoint(load_checkpoint(config.checkpoint_path()), vocab);
    for (const auto& ex : test_ds.prepared) {
      PredictionRecord p = base_record(ex.mention);
      const EncodedExample enc =
          encode(ex.mention, ex.windows, ex.features, vocab, model.cfg.l_ctx, model.cfg.l_feat);
      const auto pred = cnnlstm_predict(model, enc,
                                        config.restrict_candidates ? &ex.mention.candidate_types : nullptr);
      p.predicted_type = pred.type;
      p.probs = pred.probs;
      predictions.push_back(std::move(p));
    }
  } else {
    throw std::runtime_error("predict: unknown model \"" + config.model + "\"");
  }

  auto out = open_output(config.predictions_path(), "predict");
  write_predictions(out, predictions);
  finish_output(out, config.predictions_path(), "predict");
  std::printf("[predict] model=%s wrote %zu prediction(s) -> %s\n", config.model.c_str(),
              predictions.size(), config.predictions_path().c_str());
}

void cmd_evaluate(const RunConfig& config) {
  announce("evaluate", config);

  auto gold_in = open_input(config.test_path(), "evaluate");
  const auto gold_mentions = read_labeled_corpus(gold_in);
  auto pred_in = open_input(config.predictions_path(), "evaluate");
  const auto prediction_rows = read_predictions(pred_in);

  if (gold_mentions.size() != prediction_rows.size())
    throw std::runtime_error("evaluate: " + std::to_string(gold_mentions.size()) + " gold mention(s) vs " +
                             std::to_string(prediction_rows.size()) + " prediction(s)");

  // Align predictions with the gold corpus by mention identity.
  std::map<std::tuple<std::int64_t, std::size_t, std::size_t, int>, std::size_t> by_identity;
  for (std::size_t i = 0; i < prediction_rows.size(); ++i) {
    const auto& p = prediction_rows[i];
    const auto key = std::make_tuple(p.pmid, p.start, p.end, class_index(p.gold_type));
    if (!by_identity.emplace(key, i).second)
      throw std::runtime_error("evaluate: duplicate prediction for pmid " + std::to_string(p.pmid));
  }

  std::vector<ConceptType> gold, pred;
  std::vector<PredictionRecord> aligned;
  for (const auto& m : gold_mentions) {
    auto it = by_identity.find(mention_identity(m));
    if (it == by_identity.end())
      throw std::runtime_error("evaluate: missing prediction for pmid " + std::to_string(m.pmid) +
                               " [" + std::to_string(m.start) + ", " + std::to_string(m.end) + ")");
    gold.push_back(m.gold_type);
    pred.push_back(prediction_rows[it->second].predicted_type);
    aligned.push_back(prediction_rows[it->second]);
  }

  const EvalSummary summary = evaluate(gold, pred, config.restrict_candidates);
  const std::string table = render_report(summary);

  {
    auto out = open_output(config.report_text_path(), "evaluate");
    out << table;
    finish_output(out, config.report_text_path(), "evaluate");
  }
  {
    nlohmann::json j = summary_to_json(summary);
    j["config"] = config.to_json();
    auto out = open_output(config.report_json_path(), "evaluate");
    out << j.dump(2) << "\n";
    finish_output(out, config.report_json_path(), "evaluate");
  }
  std::fputs(table.c_str(), stdout);

  // Misclassification export needs context windows, hence the documents.
  if (!config.documents.empty()) {
    const PubTatorCorpus docs = load_documents(config, "evaluate");
    std::unordered_map<std::int64_t, const Document*> doc_index;
    for (const auto& d : docs.documents) doc_index[d.pmid] = &d;
    std::vector<ContextWindows> windows;
    for (const auto& m : gold_mentions) {
      auto it = doc_index.find(m.pmid);
      if (it == doc_index.end())
        throw std::runtime_error("evaluate: no document for pmid " + std::to_string(m.pmid));
      windows.push_back(extract_context(*it->second, m, config.window));
    }
    auto out = open_output(config.errors_path(), "evaluate");
    const std::size_t written = export_errors(aligned, windows, out);
    finish_output(out, config.errors_path(), "evaluate");
    std::printf("[evaluate] exported %zu misclassified example(s) -> %s\n", written,
                config.errors_path().c_str());
  }
}

// ---------------------------------------------------------------------------
// gradient suite
// ---------------------------------------------------------------------------

namespace {

using nn::GradCheckBlock;
using nn::Tensor;

void fill_random(Tensor& t, Rng& rng, double lo = -1.0, double hi = 1.0) {
  for (double& v : t.data) v = rng.uniform(lo, hi);
}

// Scalar loss "sum(coefficients * output)" turns any layer into a
// checkable function with a nontrivial output gradient.
Tensor coefficients(const std::vector<std::size_t>& shape, Rng& rng) {
  Tensor c(shape);
  fill_random(c, rng);
  return c;
}

double weighted_sum(const Tensor& out, const Tensor& coeff) {
  double loss = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) loss += out.data[i] * coeff.data[i];
  return loss;
}

GradSuiteEntry check_linear_conv() {
  Rng rng(101);
  Tensor x({5, 2}), kernels({1, 2, 3}), bias({3});
  fill_random(x, rng);
  fill_random(kernels, rng);
  fill_random(bias, rng);
  const Tensor coeff = coefficients({5, 3}, rng);

  Tensor gx(x.shape), gk(kernels.shape), gb(bias.shape);
  nn::conv1d_backward(x, kernels, coeff, gx, gk, gb);

  std::vector<GradCheckBlock> blocks = {
      {"x", x.data.data(), gx.data.data(), x.size()},
      {"kernels", kernels.data.data(), gk.data.data(), kernels.size()},
      {"bias", bias.data.data(), gb.data.data(), bias.size()},
  };
  auto loss = [&]() { return weighted_sum(nn::conv1d_forward(x, kernels, bias), coeff); };
  const auto report = nn::gradient_check(loss, blocks);
  return {"linear conv1d (exact)", report.max_rel_error, 1e-9};
}

GradSuiteEntry check_embedding() {
  Rng rng(102);
  EmbeddingTable table;
  table.dim = 4;
  table.data.assign(5 * 4, 0.0);
  for (std::size_t r = 1; r < 5; ++r)
    for (std::size_t d = 0; d < 4; ++d) table.row(r)[d] = rng.uniform(-1.0, 1.0);
  const std::vector<std::uint32_t> ids = {2, 3, 1, 2};
  const Tensor coeff = coefficients({ids.size(), 4}, rng);

  Tensor grad_table({5, 4});
  nn::embedding_backward(ids, coeff, grad_table);

  // PAD row is pinned; check the trainable rows only.
  std::vector<GradCheckBlock> blocks = {
      {"rows", table.data.data() + 4, grad_table.data.data() + 4, 4 * 4},
  };
  auto loss = [&]() { return weighted_sum(nn::embedding_forward(ids, table), coeff); };
  const auto report = nn::gradient_check(loss, blocks);
  return {"embedding", report.max_rel_error, 1e-5};
}

GradSuiteEntry check_conv1d() {
  Rng rng(103);
  Tensor x({8, 3}), kernels({5, 3, 4}), bias({4});
  fill_random(x, rng);
  fill_random(kernels, rng);
  fill_random(bias, rng);
  const Tensor coeff = coefficients({4, 4}, rng);

  Tensor gx(x.shape), gk(kernels.shape), gb(bias.shape);
  nn::conv1d_backward(x, kernels, coeff, gx, gk, gb);

  std::vector<GradCheckBlock> blocks = {
      {"x", x.data.data(), gx.data.data(), x.size()},
      {"kernels", kernels.data.data(), gk.data.data(), kernels.size()},
      {"bias", bias.data.data(), gb.data.data(), bias.size()},
  };
  auto loss = [&]() { return weighted_sum(nn::conv1d_forward(x, kernels, bias), coeff); };
  const auto report = nn::gradient_check(loss, blocks);
  return {"conv1d", report.max_rel_error, 1e-5};
}

GradSuiteEntry check_maxpool() {
  Rng rng(104);
  Tensor x({7, 3});
  fill_random(x, rng);
  const Tensor coeff = coefficients({3, 3}, rng);

  const auto fwd = nn::maxpool1d_forward(x, 2);
  const Tensor gx = nn::maxpool1d_backward(x, fwd, coeff);

  std::vector<GradCheckBlock> blocks = {{"x", x.data.data(), gx.data.data(), x.size()}};
  auto loss = [&]() { return weighted_sum(nn::maxpool1d_forward(x, 2).out, coeff); };
  const auto report = nn::gradient_check(loss, blocks);
  return {"maxpool1d", report.max_rel_error, 1e-5};
}

GradSuiteEntry check_global_maxpool() {
  Rng rng(105);
  Tensor x({7, 4});
  fill_random(x, rng);
  const Tensor coeff = coefficients({4}, rng);

  const auto fwd = nn::global_maxpool_forward(x);
  const Tensor gx = nn::global_maxpool_backward(x, fwd, coeff);

  std::vector<GradCheckBlock> blocks = {{"x", x.data.data(), gx.data.data(), x.size()}};
  auto loss = [&]() { return weighted_sum(nn::global_maxpool_forward(x).out, coeff); };
  const auto report = nn::gradient_check(loss, blocks);
  return {"global maxpool", report.max_rel_error, 1e-5};
}

GradSuiteEntry check_lstm() {
  Rng rng(106);
  Tensor x({6, 4});
  fill_random(x, rng);
  auto params = nn::make_lstm_params(4, 3);
  fill_random(params.w_x, rng, -0.5, 0.5);
  fill_random(params.w_h, rng, -0.5, 0.5);
  fill_random(params.bias, rng, -0.5, 0.5);
  const Tensor coeff = coefficients({3}, rng);

  nn::LstmCache cache;
  nn::lstm_forward(x, params, &cache);
  nn::LstmGrads grads;
  grads.w_x = Tensor(params.w_x.shape);
  grads.w_h = Tensor(params.w_h.shape);
  grads.bias = Tensor(params.bias.shape);
  const Tensor gx = nn::lstm_backward(x, params, cache, coeff, grads);

  std::vector<GradCheckBlock> blocks = {
      {"w_x", params.w_x.data.data(), grads.w_x.data.data(), params.w_x.size()},
      {"w_h", params.w_h.data.data(), grads.w_h.data.data(), params.w_h.size()},
      {"bias", params.bias.data.data(), grads.bias.data.data(), params.bias.size()},
      {"x", x.data.data(), gx.data.data(), x.size()},
  };
  auto loss = [&]() { return weighted_sum(nn::lstm_forward(x, params, nullptr), coeff); };
  const auto report = nn::gradient_check(loss, blocks);
  return {"lstm", report.max_rel_error, 1e-5};
}

GradSuiteEntry check_dense_softmax() {
  Rng rng(107);
  Tensor h({10}), w({6, 10}), b({6});
  fill_random(h, rng);
  fill_random(w, rng);
  fill_random(b, rng);
  const int label = 2;

  const auto fwd = nn::dense_softmax_xent_forward(h, w, b, label);
  Tensor gw(w.shape), gb(b.shape);
  const Tensor gh = nn::dense_softmax_xent_backward(h, w, fwd, label, gw, gb);

  std::vector<GradCheckBlock> blocks = {
      {"w", w.data.data(), gw.data.data(), w.size()},
      {"b", b.data.data(), gb.data.data(), b.size()},
      {"h", h.data.data(), gh.data.data(), h.size()},
  };
  auto loss = [&]() { return nn::dense_softmax_xent_forward(h, w, b, label).loss; };
  const auto report = nn::gradient_check(loss, blocks);
  return {"dense softmax xent", report.max_rel_error, 1e-5};
}

GradSuiteEntry check_full_network() {
  CnnLstmConfig tiny;
  tiny.word_dim = 4;
  tiny.feat_dim = 8;
  tiny.conv1_filters = 4;
  tiny.conv1_kernel = 2;
  tiny.pool = 2;
  tiny.conv_dropout = 0.0;
  tiny.conv2_filters = 6;
  tiny.conv2_kernel = 2;
  tiny.lstm_units = 3;
  tiny.lstm_dropout = 0.0;
  tiny.lstm_recurrent_dropout = 0.0;
  tiny.concat_units = 6 + 2 * 3;
  tiny.l_ctx = 8;
  tiny.l_feat = 6;

  // A small vocabulary with enough ids to exercise both tables.
  std::vector<std::string> words = {Vocab::kPadToken, Vocab::kUnkToken, "alpha", "beta", "gamma", "delta"};
  std::vector<std::string> feats = {Vocab::kPadToken, Vocab::kUnkToken, "TYPE=Gene", "TYPE=Disease",
                                    "ID=x1", "PRE1=a"};
  const Vocab vocab = Vocab::from_token_lists(words, feats);

  CnnLstmModel model = cnnlstm_build(tiny, vocab, synthesize_embeddings(vocab, tiny.word_dim), 9);

  EncodedExample ex;
  ex.before_ids = {0, 0, 2, 3, 4, 5, 2, 3};
  ex.after_ids = {3, 2, 5, 4, 2, 0, 0, 0};
  ex.feature_ids = {2, 3, 4, 5, 0, 0};
  ex.label = 3;

  CnnLstmGrads grads = make_grads(model);
  cnnlstm_loss_and_grads(model, ex, &grads);

  auto params = cnnlstm_params(model);
  auto grad_list = grad_refs(grads);
  std::vector<GradCheckBlock> blocks;
  for (std::size_t p = 0; p < params.size(); ++p) {
    double* values = params[p].data->data();
    const double* g = grad_list[p].second->data();
    std::size_t count = params[p].data->size();
    if (params[p].name == "word_emb" || params[p].name == "feat_emb") {
      // Skip the pinned PAD row.
      const std::size_t dim = params[p].shape[1];
      values += dim;
      g += dim;
      count -= dim;
    }
    blocks.push_back({params[p].name, values, g, count});
  }
  auto loss = [&]() { return cnnlstm_loss_and_grads(model, ex, nullptr); };
  // h = 1e-5: the deep composition leaves ~1e-10 of fp64 roundoff in each
  // central difference, which h = 1e-6 would amplify past the tolerance on
  // near-zero gradient elements.
  const auto report = nn::gradient_check(loss, blocks, 1e-5);
  return {"full cnn+lstm (tiny config)", report.max_rel_error, 1e-5};
}

}  // namespace

std::vector<GradSuiteEntry> run_gradient_suite() {
  return {
      check_linear_conv(),  check_embedding(),      check_conv1d(),        check_maxpool(),
      check_global_maxpool(), check_lstm(),         check_dense_softmax(), check_full_network(),
  };
}

void cmd_gradcheck(const RunConfig& config) {
  announce("gradcheck", config);
  bool all_passed = true;
  for (const auto& entry : run_gradient_suite()) {
    std::printf("[gradcheck] %-28s max_rel_error=%.3e tolerance=%.0e %s\n", entry.name.c_str(),
                entry.max_rel_error, entry.tolerance, entry.passed() ? "ok" : "FAILED");
    all_passed = all_passed && entry.passed();
  }
  if (!all_passed) throw std::runtime_error("gradcheck: at least one layer failed");
}

}  // namespace bd
