#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bd/abbrev.hpp"
#include "bd/corpus_types.hpp"

namespace bd {

// Both windows contain the mention tokens at the inner boundary: before
// ends with them, after starts with them. W counts context tokens only.
struct ContextWindows {
  std::vector<std::string> before;
  std::vector<std::string> after;

  bool operator==(const ContextWindows&) const = default;
};

// Semantic and word feature tokens in their deterministic order: semantic
// sorted lexicographically, then word features in (mention-token order,
// length ascending, prefix before suffix) order.
struct FeatureBundle {
  std::vector<std::string> semantic;
  std::vector<std::string> word;

  std::vector<std::string> all() const;
  bool operator==(const FeatureBundle&) const = default;
};

// Tokenizes full_text and takes up to `window` tokens on each side of the
// mention tokens. Mention offsets that do not land on token boundaries are
// widened to the covering tokens; `misaligned` (if given) counts such cases.
ContextWindows extract_context(const Document& doc, const LabeledMention& mention, int window = 10,
                               std::size_t* misaligned = nullptr);

// Semantic tokens: TYPE=<t> per candidate type, ID=<id> per candidate id,
// and FULLTYPE=/FULLID= for every span whose surface equals the long form
// when the mention's surface is a detected short form. Word tokens:
// PRE<k>=/SUF<k>= for k in 1..min(3, token length) over the mention tokens.
// `spans` must be restricted to the mention's document.
FeatureBundle extract_features(const LabeledMention& mention, const std::vector<TaggedSpan>& spans,
                               const std::vector<AbbrevDefinition>& abbrevs);

}  // namespace bd
