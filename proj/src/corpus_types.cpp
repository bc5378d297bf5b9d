#include "bd/corpus_types.hpp"

#include <algorithm>
#include <cctype>

namespace bd {

Document Document::make(std::int64_t pmid, std::string title, std::string abstract) {
  Document d;
  d.pmid = pmid;
  d.full_text = title + " " + abstract;
  d.title = std::move(title);
  d.abstract = std::move(abstract);
  return d;
}

bool LabeledMention::has_candidate(ConceptType t) const {
  return std::find(candidate_types.begin(), candidate_types.end(), t) != candidate_types.end();
}

std::string_view to_string(SplitStrategy s) {
  return s == SplitStrategy::Random ? "random" : "independent";
}

std::optional<SplitStrategy> parse_split_strategy(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "random") return SplitStrategy::Random;
  if (lower == "independent") return SplitStrategy::Independent;
  return std::nullopt;
}

}  // namespace bd
