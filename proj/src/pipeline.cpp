#include "bd/pipeline.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>

#include "bd/abbrev.hpp"

namespace bd {

std::vector<PreparedExample> prepare_examples(const std::vector<LabeledMention>& mentions,
                                              const std::vector<Document>& documents,
                                              const std::vector<TaggedSpan>& spans, int window,
                                              PipelineCounters* counters) {
  std::unordered_map<std::int64_t, const Document*> doc_index;
  for (const auto& d : documents) doc_index[d.pmid] = &d;

  std::unordered_map<std::int64_t, std::vector<TaggedSpan>> spans_by_pmid;
  for (const auto& s : spans) spans_by_pmid[s.pmid].push_back(s);

  // Abbreviations are per document; detect lazily and cache.
  std::unordered_map<std::int64_t, std::vector<AbbrevDefinition>> abbrev_cache;

  std::vector<PreparedExample> out;
  out.reserve(mentions.size());
  static const std::vector<TaggedSpan> kNoSpans;

  for (const auto& mention : mentions) {
    auto doc_it = doc_index.find(mention.pmid);
    if (doc_it == doc_index.end())
      throw std::runtime_error("prepare_examples: no document for pmid " + std::to_string(mention.pmid));
    const Document& doc = *doc_it->second;

    auto [abbrev_it, inserted] = abbrev_cache.try_emplace(mention.pmid);
    if (inserted) abbrev_it->second = detect_abbreviations(doc);

    auto spans_it = spans_by_pmid.find(mention.pmid);
    const auto& doc_spans = spans_it == spans_by_pmid.end() ? kNoSpans : spans_it->second;

    PreparedExample ex;
    ex.mention = mention;
    ex.windows = extract_context(doc, mention, window,
                                 counters ? &counters->misaligned_mentions : nullptr);
    ex.features = extract_features(mention, doc_spans, abbrev_it->second);
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace bd
