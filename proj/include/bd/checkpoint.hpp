#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bd/tensor.hpp"

namespace bd {

// Self-describing model container: magic + version, a JSON config blob, the
// vocab hashes the model was trained against, and named fp64 tensors.
// Loading verifies the magic, rejects short reads, and leaves hash checks
// to the model-specific loaders.
struct Checkpoint {
  std::string kind;  // "cnnlstm" or "maxent"
  nlohmann::json config;
  std::uint64_t word_vocab_hash = 0;
  std::uint64_t feature_vocab_hash = 0;
  std::vector<std::pair<std::string, nn::Tensor>> tensors;

  const nn::Tensor& tensor(const std::string& name) const;  // throws if absent
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace bd
