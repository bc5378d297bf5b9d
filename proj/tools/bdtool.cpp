#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bd/commands.hpp"

namespace {

// One table drives both the command-line options and the key=value config
// file, so the two surfaces can never drift apart. The config file is
// applied first; explicit flags win.
struct Binding {
  enum Kind { Str, Size, Int, U64, Dbl, Flag };
  const char* name;  // long option name without the leading --
  Kind kind;
  void* target;
  const char* help;
};

std::vector<Binding> bindings(bd::RunConfig& c) {
  using B = Binding;
  return {
      {"documents", B::Str, &c.documents, "PubTator-format documents file"},
      {"records", B::Str, &c.records, "Normalized repository records (TSV)"},
      {"embeddings", B::Str, &c.embeddings, "Word embedding text file (optional)"},
      {"work-dir", B::Str, &c.work_dir, "Directory for derived artifacts"},
      {"corpus", B::Str, &c.corpus, "Labeled corpus path"},
      {"train-corpus", B::Str, &c.train_corpus, "Training split path"},
      {"test-corpus", B::Str, &c.test_corpus, "Test split path"},
      {"vocab", B::Str, &c.vocab_file, "Vocabulary file path"},
      {"checkpoint", B::Str, &c.checkpoint, "Model checkpoint path"},
      {"predictions", B::Str, &c.predictions, "Predictions file path"},
      {"report-text", B::Str, &c.report_text, "Evaluation report (text) path"},
      {"report-json", B::Str, &c.report_json, "Evaluation report (JSON) path"},
      {"errors", B::Str, &c.errors, "Misclassification export path"},
      {"encoded-cache", B::Str, &c.encoded_cache,
       "Also write the encoded training corpus (JSON lines) here"},
      {"window", B::Int, &c.window, "Context window size W"},
      {"l-ctx", B::Size, &c.l_ctx, "Encoded context length"},
      {"l-feat", B::Size, &c.l_feat, "Encoded feature length"},
      {"min-count", B::Size, &c.min_count, "Vocabulary minimum count"},
      {"strategy", B::Str, &c.strategy, "Split strategy: random | independent"},
      {"test-fraction", B::Dbl, &c.test_fraction, "Test fraction in (0, 1)"},
      {"seed", B::U64, &c.seed, "Seed for splits, init, and training"},
      {"model", B::Str, &c.model, "Classifier: rule | maxent | cnnlstm"},
      {"restrict-candidates", B::Flag, &c.restrict_candidates,
       "Restrict predictions to each mention's candidate types"},
      {"epochs", B::Size, &c.epochs, "Training epochs"},
      {"batch-size", B::Size, &c.batch_size, "Mini-batch size"},
      {"val-fraction", B::Dbl, &c.val_fraction, "Validation fraction of the training split"},
      {"patience", B::Int, &c.patience, "Early-stop patience (epochs)"},
      {"oversample", B::Int, &c.oversample, "Oversampling factor for Mutation/CellLine"},
      {"lr", B::Dbl, &c.lr, "Adam learning rate"},
      {"word-dim", B::Size, &c.word_dim, "Word embedding width"},
      {"feat-dim", B::Size, &c.feat_dim, "Feature embedding width"},
      {"conv1-filters", B::Size, &c.conv1_filters, "Conv layer 1 filters"},
      {"conv1-kernel", B::Size, &c.conv1_kernel, "Conv layer 1 kernel size"},
      {"pool", B::Size, &c.pool, "Max pooling size"},
      {"conv-dropout", B::Dbl, &c.conv_dropout, "Dropout after pooling"},
      {"conv2-filters", B::Size, &c.conv2_filters, "Conv layer 2 filters"},
      {"conv2-kernel", B::Size, &c.conv2_kernel, "Conv layer 2 kernel size"},
      {"lstm-units", B::Size, &c.lstm_units, "LSTM units per direction"},
      {"lstm-dropout", B::Dbl, &c.lstm_dropout, "LSTM input dropout"},
      {"lstm-recurrent-dropout", B::Dbl, &c.lstm_recurrent_dropout, "LSTM recurrent dropout"},
      {"concat-units", B::Size, &c.concat_units, "Concatenation width"},
      {"maxent-l2", B::Dbl, &c.maxent_l2, "MaxEnt L2 strength"},
      {"maxent-lr", B::Dbl, &c.maxent_lr, "MaxEnt learning rate"},
      {"maxent-epochs", B::Size, &c.maxent_epochs, "MaxEnt epochs"},
  };
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

void assign(const Binding& binding, const std::string& value, const std::string& key) {
  try {
    switch (binding.kind) {
      case Binding::Str: *static_cast<std::string*>(binding.target) = value; return;
      case Binding::Size: *static_cast<std::size_t*>(binding.target) = std::stoull(value); return;
      case Binding::Int: *static_cast<int*>(binding.target) = std::stoi(value); return;
      case Binding::U64: *static_cast<std::uint64_t*>(binding.target) = std::stoull(value); return;
      case Binding::Dbl: *static_cast<double*>(binding.target) = std::stod(value); return;
      case Binding::Flag: {
        if (value == "true" || value == "1" || value == "yes" || value == "on")
          *static_cast<bool*>(binding.target) = true;
        else if (value == "false" || value == "0" || value == "no" || value == "off")
          *static_cast<bool*>(binding.target) = false;
        else
          throw std::runtime_error("expected a boolean");
        return;
      }
    }
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad value \"" + value + "\" for key \"" + key + "\"");
  }
}

void apply_config_file(const std::string& path, std::vector<Binding>& table) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(line_no) + " is not key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    bool matched = false;
    for (auto& binding : table) {
      if (key == binding.name) {
        assign(binding, value, key);
        matched = true;
        break;
      }
    }
    if (!matched)
      throw std::runtime_error("config: unknown key \"" + key + "\" on line " + std::to_string(line_no));
  }
}

void add_options(CLI::App* sub, std::vector<Binding>& table, std::string& config_path) {
  sub->add_option("--config", config_path, "Key=value config file; flags override file values");
  for (auto& binding : table) {
    const std::string name = "--" + std::string(binding.name);
    switch (binding.kind) {
      case Binding::Str: sub->add_option(name, *static_cast<std::string*>(binding.target), binding.help); break;
      case Binding::Size: sub->add_option(name, *static_cast<std::size_t*>(binding.target), binding.help); break;
      case Binding::Int: sub->add_option(name, *static_cast<int*>(binding.target), binding.help); break;
      case Binding::U64: sub->add_option(name, *static_cast<std::uint64_t*>(binding.target), binding.help); break;
      case Binding::Dbl: sub->add_option(name, *static_cast<double*>(binding.target), binding.help); break;
      case Binding::Flag:
        sub->add_flag(name + ",!--no-" + std::string(binding.name),
                      *static_cast<bool*>(binding.target), binding.help);
        break;
    }
  }
}

// The config file must be applied before CLI11 parses the flags, so flags
// always win; find it with a plain argv scan.
std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  bd::RunConfig config;
  auto table = bindings(config);

  try {
    const std::string config_path = find_config_arg(argc, argv);
    if (!config_path.empty()) apply_config_file(config_path, table);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  CLI::App app{"Bioconcept mention disambiguation toolkit"};
  app.require_subcommand(1);

  std::function<void()> action;
  std::string config_path_echo;

  struct SubSpec {
    const char* name;
    const char* description;
    void (*fn)(const bd::RunConfig&);
  };
  const SubSpec subs[] = {
      {"build-corpus", "Join repository records with tagged spans into a labeled corpus",
       bd::cmd_build_corpus},
      {"split", "Split a labeled corpus into train and test sets", bd::cmd_split},
      {"train", "Train the selected classifier on the training split", bd::cmd_train},
      {"predict", "Write predictions for the test split", bd::cmd_predict},
      {"evaluate", "Score a predictions file against a gold corpus", bd::cmd_evaluate},
      {"gradcheck", "Run the finite-difference gradient suite", bd::cmd_gradcheck},
  };
  for (const auto& spec : subs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.description);
    add_options(sub, table, config_path_echo);
    sub->callback([&action, &config, fn = spec.fn]() { action = [fn, &config]() { fn(config); }; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    action();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
