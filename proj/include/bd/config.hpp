#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "bd/cnn_lstm.hpp"
#include "bd/maxent.hpp"

namespace bd {

// Every knob of the pipeline with its effective value; commands print the
// hash of the serialized form so identical runs are recognizable.
struct RunConfig {
  // input paths
  std::string documents;   // PubTator file
  std::string records;     // normalized repository records
  std::string embeddings;  // optional word-embedding text file

  // artifact paths; empty entries resolve under work_dir
  std::string work_dir = ".";
  std::string corpus;       // labeled corpus (JSONL)
  std::string stats_json;   // build statistics
  std::string stats_text;
  std::string train_corpus;
  std::string test_corpus;
  std::string vocab_file;
  std::string checkpoint;
  std::string predictions;
  std::string report_text;
  std::string report_json;
  std::string errors;         // misclassification export
  std::string encoded_cache;  // optional encoded-corpus dump on train

  // features
  int window = 10;
  std::size_t l_ctx = 21;
  std::size_t l_feat = 30;
  std::size_t min_count = 1;

  // split
  std::string strategy = "random";
  double test_fraction = 0.2;
  std::uint64_t seed = 42;

  // model selection + prediction mode
  std::string model = "cnnlstm";  // rule | maxent | cnnlstm
  bool restrict_candidates = true;

  // training
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  double val_fraction = 0.1;
  int patience = 3;
  int oversample = 10;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  // cnn+lstm dimensions
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
  std::size_t concat_units = 1256;

  // maxent
  double maxent_l2 = 1e-4;
  double maxent_lr = 0.5;
  std::size_t maxent_epochs = 50;

  nlohmann::json to_json() const;  // every effective value, resolved paths included
  std::uint64_t hash() const;

  CnnLstmConfig cnnlstm_config() const;
  TrainConfig train_config() const;
  MaxEntConfig maxent_config() const;

  // resolved artifact paths (explicit value or work_dir default)
  std::string corpus_path() const;
  std::string stats_json_path() const;
  std::string stats_text_path() const;
  std::string train_path() const;
  std::string test_path() const;
  std::string vocab_path() const;
  std::string checkpoint_path() const;
  std::string predictions_path() const;
  std::string report_text_path() const;
  std::string report_json_path() const;
  std::string errors_path() const;
};

}  // namespace bd
