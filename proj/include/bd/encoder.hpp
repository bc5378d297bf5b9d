#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bd/features.hpp"
#include "bd/vocab.hpp"

namespace bd {

// Index-encoded feature sequences, fixed length, ready for the network.
// Padding is index 0 at the outer end of each context window (before:
// left-padded, after: right-padded) and at the tail of feature_ids.
struct EncodedExample {
  std::vector<std::uint32_t> before_ids;   // length l_ctx
  std::vector<std::uint32_t> after_ids;    // length l_ctx
  std::vector<std::uint32_t> feature_ids;  // length l_feat
  int label = 0;                           // canonical class index

  bool operator==(const EncodedExample&) const = default;
};

// Truncation keeps the tokens nearest the mention: before keeps its last
// l_ctx tokens, after its first l_ctx; feature tokens keep the head.
EncodedExample encode(const LabeledMention& mention, const ContextWindows& windows,
                      const FeatureBundle& bundle, const Vocab& vocab, std::size_t l_ctx = 21,
                      std::size_t l_feat = 30);

// Encoded-corpus cache, one JSON object per line mirroring EncodedExample.
void write_encoded_cache(std::ostream& out, const std::vector<EncodedExample>& examples);
std::vector<EncodedExample> read_encoded_cache(std::istream& in);

}  // namespace bd
