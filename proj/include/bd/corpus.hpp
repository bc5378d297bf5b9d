#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bd/corpus_types.hpp"

namespace bd {

struct JoinResult {
  std::vector<MatchedRecord> matched;     // record input order
  std::size_t unmatched_records = 0;      // records with zero matching spans
};

// A record matches every span with equal pmid, equal concept type, and
// equal concept id (exact string match after whitespace trim). Records with
// no match are dropped and counted.
JoinResult join_records_with_spans(const std::vector<RepositoryRecord>& records,
                                   const std::vector<TaggedSpan>& spans);

// One LabeledMention per (record, span) pair; gold_type comes from the
// record. Output size is the sum of span multiplicities.
std::vector<LabeledMention> explode_to_individual_spans(const std::vector<MatchedRecord>& matched);

// Keeps a mention iff spans with identical (pmid, start, end) carry two or
// more concept types; candidate_types becomes that set and candidate_ids
// one id per type (first in span input order). Spans must carry all tagger
// annotations for the mentions' documents.
std::vector<LabeledMention> filter_ambiguous(const std::vector<LabeledMention>& mentions,
                                             const std::vector<TaggedSpan>& spans);

// Stable keep-first dedup on (pmid, start, end, gold_type); the split
// disjointness invariant needs unique identities.
std::vector<LabeledMention> dedupe_by_identity(const std::vector<LabeledMention>& mentions,
                                               std::size_t* dropped = nullptr);

// Order-stable merge key for sharded runs: (pmid, start, end, gold_type).
void sort_by_identity(std::vector<LabeledMention>& mentions);

// Random: seeded uniform shuffle, first ceil(test_fraction * N) to test.
// Independent: whole normalized-surface groups assigned greedily to test
// (after a seeded group shuffle) until |test| >= test_fraction * N; the
// normalized-surface sets of train and test are then disjoint, which is
// verified on every run. Throws on empty input or fraction outside (0, 1).
CorpusSplit split_corpus(const std::vector<LabeledMention>& mentions, SplitStrategy strategy,
                         double test_fraction, std::uint64_t seed);

// Per-type pipeline statistics, the shape of a corpus summary table.
struct CorpusStats {
  std::array<std::uint64_t, kNumConceptTypes> records_total{};
  std::array<std::uint64_t, kNumConceptTypes> records_matched{};
  std::array<std::uint64_t, kNumConceptTypes> mentions_individual{};
  std::array<std::uint64_t, kNumConceptTypes> mentions_ambiguous{};
  std::uint64_t documents = 0;
  std::uint64_t spans = 0;
  std::uint64_t unmatched_records = 0;
  std::uint64_t unknown_type_annotations = 0;
  std::uint64_t duplicate_mentions_dropped = 0;

  std::uint64_t ambiguous_total() const;
};

}  // namespace bd
