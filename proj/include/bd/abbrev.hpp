#pragma once

#include <string>
#include <vector>

#include "bd/corpus_types.hpp"

namespace bd {

// A parenthesized short form paired with the long form preceding it.
struct AbbrevDefinition {
  std::string short_form;
  std::string long_form;
  std::int64_t pmid = 0;

  bool operator==(const AbbrevDefinition&) const = default;
};

// Schwartz-Hearst style detection: a parenthesized candidate (length <= 10,
// contains a letter, shorter than its long form) is matched by scanning the
// preceding words right to left; every short-form character must appear in
// order in the long form and the first one must start a long-form word.
std::vector<AbbrevDefinition> detect_abbreviations(const Document& doc);

}  // namespace bd
