#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "bd/concept_type.hpp"

namespace bd {

// One article. full_text is always title + single space + abstract, so
// annotation offsets index one flat string.
struct Document {
  std::int64_t pmid = 0;
  std::string title;
  std::string abstract;
  std::string full_text;

  static Document make(std::int64_t pmid, std::string title, std::string abstract);
  bool operator==(const Document&) const = default;
};

// A tagger-produced mention. Offsets are byte offsets into full_text,
// start inclusive, end exclusive; full_text[start..end) == surface.
struct TaggedSpan {
  std::int64_t pmid = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  ConceptType concept_type = ConceptType::Gene;
  std::string concept_id;  // may be empty

  bool operator==(const TaggedSpan&) const = default;
};

// A curated (document, concept) association; no span offsets.
struct RepositoryRecord {
  std::string source;
  std::int64_t pmid = 0;
  ConceptType concept_type = ConceptType::Gene;
  std::string concept_id;  // non-empty

  bool operator==(const RepositoryRecord&) const = default;
};

// A gold-labeled ambiguous mention: the unit of classification.
// candidate_types is kept sorted by class index and duplicate-free.
struct LabeledMention {
  std::int64_t pmid = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  ConceptType gold_type = ConceptType::Gene;
  std::vector<ConceptType> candidate_types;
  std::map<ConceptType, std::string> candidate_ids;
  std::string source;

  bool has_candidate(ConceptType t) const;
  bool operator==(const LabeledMention&) const = default;
};

// Identity for split disjointness, dedup, and order-stable merges.
inline auto mention_identity(const LabeledMention& m) {
  return std::make_tuple(m.pmid, m.start, m.end, class_index(m.gold_type));
}

// Join output before explosion: one entry per matched record, all spans
// with equal (pmid, concept_type, concept_id).
struct MatchedRecord {
  RepositoryRecord record;
  std::vector<TaggedSpan> spans;
};

enum class SplitStrategy { Random, Independent };

std::string_view to_string(SplitStrategy s);
std::optional<SplitStrategy> parse_split_strategy(std::string_view name);

struct CorpusSplit {
  std::vector<LabeledMention> train;
  std::vector<LabeledMention> test;
  SplitStrategy strategy = SplitStrategy::Random;
  std::uint64_t seed = 0;
};

}  // namespace bd
