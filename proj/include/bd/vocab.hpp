#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bd/features.hpp"

namespace bd {

// Two index spaces built from the training split: word_index over
// lowercased window tokens, feature_index over feature tokens (kept
// case-sensitive). Index 0 is PAD, 1 is UNK; the rest follow first
// occurrence order. Immutable once built.
class Vocab {
 public:
  static constexpr std::uint32_t kPadId = 0;
  static constexpr std::uint32_t kUnkId = 1;
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kUnkToken = "<unk>";

  Vocab() = default;

  // Lowercases internally, UNK for unseen tokens.
  std::uint32_t word_id(std::string_view token) const;
  // Case-sensitive, UNK for unseen tokens.
  std::uint32_t feature_id(std::string_view token) const;

  std::size_t word_size() const { return word_tokens_.size(); }
  std::size_t feature_size() const { return feature_tokens_.size(); }

  const std::vector<std::string>& word_tokens() const { return word_tokens_; }
  const std::vector<std::string>& feature_tokens() const { return feature_tokens_; }

  // FNV-1a over the token lists; pinned into checkpoints.
  std::uint64_t word_hash() const;
  std::uint64_t feature_hash() const;

  void save(std::ostream& out) const;
  static Vocab load(std::istream& in);

  // Used by build_vocab and load only.
  static Vocab from_token_lists(std::vector<std::string> words, std::vector<std::string> features);

 private:
  std::vector<std::string> word_tokens_;
  std::vector<std::string> feature_tokens_;
  std::unordered_map<std::string, std::uint32_t> word_index_;
  std::unordered_map<std::string, std::uint32_t> feature_index_;
};

// Counts window tokens (lowercased) and feature tokens across the training
// examples; tokens seen fewer than min_count times map to UNK. Throws on an
// empty corpus.
Vocab build_vocab(const std::vector<ContextWindows>& windows, const std::vector<FeatureBundle>& bundles,
                  std::size_t min_count = 1);

}  // namespace bd
