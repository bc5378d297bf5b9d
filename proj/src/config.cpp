#include "bd/config.hpp"

#include "bd/rng.hpp"

namespace bd {

namespace {

std::string under(const std::string& explicit_path, const std::string& work_dir, const char* name) {
  if (!explicit_path.empty()) return explicit_path;
  if (work_dir.empty() || work_dir == ".") return name;
  return work_dir + "/" + name;
}

}  // namespace

std::string RunConfig::corpus_path() const { return under(corpus, work_dir, "corpus.jsonl"); }
std::string RunConfig::stats_json_path() const { return under(stats_json, work_dir, "corpus_stats.json"); }
std::string RunConfig::stats_text_path() const { return under(stats_text, work_dir, "corpus_stats.txt"); }
std::string RunConfig::train_path() const { return under(train_corpus, work_dir, "train.jsonl"); }
std::string RunConfig::test_path() const { return under(test_corpus, work_dir, "test.jsonl"); }
std::string RunConfig::vocab_path() const { return under(vocab_file, work_dir, "vocab.json"); }
std::string RunConfig::checkpoint_path() const { return under(checkpoint, work_dir, "model.ckpt"); }
std::string RunConfig::predictions_path() const { return under(predictions, work_dir, "predictions.jsonl"); }
std::string RunConfig::report_text_path() const { return under(report_text, work_dir, "report.txt"); }
std::string RunConfig::report_json_path() const { return under(report_json, work_dir, "report.json"); }
std::string RunConfig::errors_path() const { return under(errors, work_dir, "errors.jsonl"); }

nlohmann::json RunConfig::to_json() const {
  return {
      {"documents", documents},
      {"records", records},
      {"embeddings", embeddings},
      {"work_dir", work_dir},
      {"corpus", corpus_path()},
      {"stats_json", stats_json_path()},
      {"stats_text", stats_text_path()},
      {"train_corpus", train_path()},
      {"test_corpus", test_path()},
      {"vocab_file", vocab_path()},
      {"checkpoint", checkpoint_path()},
      {"predictions", predictions_path()},
      {"report_text", report_text_path()},
      {"report_json", report_json_path()},
      {"errors", errors_path()},
      {"encoded_cache", encoded_cache},
      {"window", window},
      {"l_ctx", l_ctx},
      {"l_feat", l_feat},
      {"min_count", min_count},
      {"strategy", strategy},
      {"test_fraction", test_fraction},
      {"seed", seed},
      {"model", model},
      {"restrict_candidates", restrict_candidates},
      {"epochs", epochs},
      {"batch_size", batch_size},
      {"val_fraction", val_fraction},
      {"patience", patience},
      {"oversample", oversample},
      {"lr", lr},
      {"beta1", beta1},
      {"beta2", beta2},
      {"eps", eps},
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
      {"maxent_l2", maxent_l2},
      {"maxent_lr", maxent_lr},
      {"maxent_epochs", maxent_epochs},
  };
}

std::uint64_t RunConfig::hash() const { return fnv1a64(to_json().dump()); }

CnnLstmConfig RunConfig::cnnlstm_config() const {
  CnnLstmConfig c;
  c.word_dim = word_dim;
  c.feat_dim = feat_dim;
  c.conv1_filters = conv1_filters;
  c.conv1_kernel = conv1_kernel;
  c.pool = pool;
  c.conv_dropout = conv_dropout;
  c.conv2_filters = conv2_filters;
  c.conv2_kernel = conv2_kernel;
  c.lstm_units = lstm_units;
  c.lstm_dropout = lstm_dropout;
  c.lstm_recurrent_dropout = lstm_recurrent_dropout;
  c.concat_units = concat_units;
  c.l_ctx = l_ctx;
  c.l_feat = l_feat;
  return c;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t;
  t.epochs = epochs;
  t.batch_size = batch_size;
  t.seed = seed;
  t.val_fraction = val_fraction;
  t.patience = patience;
  t.oversample_factor = oversample;
  t.adam = {lr, beta1, beta2, eps};
  return t;
}

MaxEntConfig RunConfig::maxent_config() const {
  MaxEntConfig m;
  m.l2 = maxent_l2;
  m.lr = maxent_lr;
  m.epochs = maxent_epochs;
  m.batch_size = batch_size;
  m.seed = seed;
  return m;
}

}  // namespace bd
