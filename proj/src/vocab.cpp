#include "bd/vocab.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "bd/pubtator.hpp"
#include "bd/rng.hpp"
#include "bd/tokenize.hpp"

namespace bd {

using nlohmann::json;

std::uint32_t Vocab::word_id(std::string_view token) const {
  auto it = word_index_.find(to_lower_ascii(token));
  return it == word_index_.end() ? kUnkId : it->second;
}

std::uint32_t Vocab::feature_id(std::string_view token) const {
  auto it = feature_index_.find(std::string(token));
  return it == feature_index_.end() ? kUnkId : it->second;
}

namespace {

std::uint64_t hash_tokens(const std::vector<std::string>& tokens) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& t : tokens) {
    h = fnv1a64(t, h);
    h = fnv1a64("\x1f", h);
  }
  return h;
}

}  // namespace

std::uint64_t Vocab::word_hash() const { return hash_tokens(word_tokens_); }
std::uint64_t Vocab::feature_hash() const { return hash_tokens(feature_tokens_); }

Vocab Vocab::from_token_lists(std::vector<std::string> words, std::vector<std::string> features) {
  Vocab v;
  v.word_tokens_ = std::move(words);
  v.feature_tokens_ = std::move(features);
  for (std::uint32_t i = 0; i < v.word_tokens_.size(); ++i) v.word_index_[v.word_tokens_[i]] = i;
  for (std::uint32_t i = 0; i < v.feature_tokens_.size(); ++i) v.feature_index_[v.feature_tokens_[i]] = i;
  return v;
}

void Vocab::save(std::ostream& out) const {
  json j = {{"words", word_tokens_}, {"features", feature_tokens_}};
  out << j.dump(2) << "\n";
}

Vocab Vocab::load(std::istream& in) {
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.contains("words") || !j.contains("features"))
    throw ParseError("vocab file: expected {\"words\": [...], \"features\": [...]}");
  auto words = j.at("words").get<std::vector<std::string>>();
  auto features = j.at("features").get<std::vector<std::string>>();
  if (words.size() < 2 || words[0] != kPadToken || words[1] != kUnkToken ||
      features.size() < 2 || features[0] != kPadToken || features[1] != kUnkToken)
    throw ParseError("vocab file: missing PAD/UNK reservations");
  return from_token_lists(std::move(words), std::move(features));
}

Vocab build_vocab(const std::vector<ContextWindows>& windows, const std::vector<FeatureBundle>& bundles,
                  std::size_t min_count) {
  if (windows.empty() && bundles.empty())
    throw std::invalid_argument("build_vocab: empty corpus");

  // Two passes: count, then admit qualifying tokens in first-occurrence order.
  std::unordered_map<std::string, std::size_t> word_counts;
  std::unordered_map<std::string, std::size_t> feature_counts;
  for (const auto& w : windows) {
    for (const auto& t : w.before) ++word_counts[to_lower_ascii(t)];
    for (const auto& t : w.after) ++word_counts[to_lower_ascii(t)];
  }
  for (const auto& b : bundles)
    for (const auto& t : b.all()) ++feature_counts[t];

  std::vector<std::string> words = {Vocab::kPadToken, Vocab::kUnkToken};
  std::vector<std::string> features = {Vocab::kPadToken, Vocab::kUnkToken};
  std::unordered_map<std::string, bool> word_admitted;
  std::unordered_map<std::string, bool> feature_admitted;

  auto admit = [&](std::vector<std::string>& list, std::unordered_map<std::string, bool>& seen,
                   const std::string& token, std::size_t count) {
    if (count < min_count) return;
    if (seen.try_emplace(token, true).second) list.push_back(token);
  };

  for (const auto& w : windows) {
    for (const auto& t : w.before) {
      std::string lower = to_lower_ascii(t);
      admit(words, word_admitted, lower, word_counts[lower]);
    }
    for (const auto& t : w.after) {
      std::string lower = to_lower_ascii(t);
      admit(words, word_admitted, lower, word_counts[lower]);
    }
  }
  for (const auto& b : bundles)
    for (const auto& t : b.all()) admit(features, feature_admitted, t, feature_counts[t]);

  return Vocab::from_token_lists(std::move(words), std::move(features));
}

}  // namespace bd
