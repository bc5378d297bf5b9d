#include "bd/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "bd/rng.hpp"
#include "bd/tokenize.hpp"

namespace bd {

namespace {

std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string join_key(std::int64_t pmid, ConceptType type, std::string_view id) {
  std::string key = std::to_string(pmid);
  key.push_back('\x1f');
  key.push_back(static_cast<char>('0' + class_index(type)));
  key.push_back('\x1f');
  key.append(trim_ws(id));
  return key;
}

std::string offset_key(std::int64_t pmid, std::size_t start, std::size_t end) {
  return std::to_string(pmid) + ':' + std::to_string(start) + ':' + std::to_string(end);
}

}  // namespace

JoinResult join_records_with_spans(const std::vector<RepositoryRecord>& records,
                                   const std::vector<TaggedSpan>& spans) {
  std::unordered_map<std::string, std::vector<const TaggedSpan*>> index;
  for (const auto& span : spans)
    index[join_key(span.pmid, span.concept_type, span.concept_id)].push_back(&span);

  JoinResult result;
  for (const auto& rec : records) {
    auto it = index.find(join_key(rec.pmid, rec.concept_type, rec.concept_id));
    if (it == index.end()) {
      ++result.unmatched_records;
      continue;
    }
    MatchedRecord m;
    m.record = rec;
    m.spans.reserve(it->second.size());
    for (const TaggedSpan* s : it->second) m.spans.push_back(*s);
    result.matched.push_back(std::move(m));
  }
  return result;
}

std::vector<LabeledMention> explode_to_individual_spans(const std::vector<MatchedRecord>& matched) {
  std::vector<LabeledMention> mentions;
  for (const auto& entry : matched) {
    for (const auto& span : entry.spans) {
      LabeledMention m;
      m.pmid = span.pmid;
      m.start = span.start;
      m.end = span.end;
      m.surface = span.surface;
      m.gold_type = entry.record.concept_type;
      m.candidate_types = {m.gold_type};
      m.candidate_ids[m.gold_type] = entry.record.concept_id;
      m.source = entry.record.source;
      mentions.push_back(std::move(m));
    }
  }
  return mentions;
}

std::vector<LabeledMention> filter_ambiguous(const std::vector<LabeledMention>& mentions,
                                             const std::vector<TaggedSpan>& spans) {
  // Per offset triple: the concept types seen there, with the first id per
  // type in span input order.
  struct TypeSet {
    std::vector<std::pair<ConceptType, std::string>> types;  // insertion order
    bool has(ConceptType t) const {
      for (const auto& [type, id] : types)
        if (type == t) return true;
      return false;
    }
  };
  std::unordered_map<std::string, TypeSet> by_offset;
  for (const auto& span : spans) {
    TypeSet& set = by_offset[offset_key(span.pmid, span.start, span.end)];
    if (!set.has(span.concept_type)) set.types.emplace_back(span.concept_type, span.concept_id);
  }

  std::vector<LabeledMention> kept;
  for (const auto& mention : mentions) {
    auto it = by_offset.find(offset_key(mention.pmid, mention.start, mention.end));
    if (it == by_offset.end() || it->second.types.size() < 2) continue;
    if (!it->second.has(mention.gold_type)) continue;  // inconsistent span input

    LabeledMention m = mention;
    m.candidate_types.clear();
    m.candidate_ids.clear();
    for (const auto& [type, id] : it->second.types) {
      m.candidate_types.push_back(type);
      m.candidate_ids[type] = id;
    }
    std::sort(m.candidate_types.begin(), m.candidate_types.end(),
              [](ConceptType a, ConceptType b) { return class_index(a) < class_index(b); });
    kept.push_back(std::move(m));
  }
  return kept;
}

std::vector<LabeledMention> dedupe_by_identity(const std::vector<LabeledMention>& mentions,
                                               std::size_t* dropped) {
  std::set<std::tuple<std::int64_t, std::size_t, std::size_t, int>> seen;
  std::vector<LabeledMention> out;
  std::size_t n_dropped = 0;
  for (const auto& m : mentions) {
    if (seen.insert(mention_identity(m)).second)
      out.push_back(m);
    else
      ++n_dropped;
  }
  if (dropped) *dropped = n_dropped;
  return out;
}

void sort_by_identity(std::vector<LabeledMention>& mentions) {
  std::stable_sort(mentions.begin(), mentions.end(), [](const LabeledMention& a, const LabeledMention& b) {
    return mention_identity(a) < mention_identity(b);
  });
}

CorpusSplit split_corpus(const std::vector<LabeledMention>& mentions, SplitStrategy strategy,
                         double test_fraction, std::uint64_t seed) {
  if (mentions.empty()) throw std::invalid_argument("split_corpus: empty mention list");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("split_corpus: test_fraction must be in (0, 1)");

  const std::size_t n = mentions.size();
  CorpusSplit split;
  split.strategy = strategy;
  split.seed = seed;
  Rng rng(seed);

  if (strategy == SplitStrategy::Random) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    const auto test_n = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) {
      (i < test_n ? split.test : split.train).push_back(mentions[order[i]]);
    }
    return split;
  }

  // Independent: whole groups of equal normalized surface move together.
  std::unordered_map<std::string, std::size_t> group_of;
  std::vector<std::vector<std::size_t>> groups;  // first-occurrence order
  for (std::size_t i = 0; i < n; ++i) {
    std::string key = normalize_surface(mentions[i].surface);
    auto [it, inserted] = group_of.try_emplace(std::move(key), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }

  std::vector<std::size_t> group_order(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) group_order[g] = g;
  rng.shuffle(group_order);

  const double target = test_fraction * static_cast<double>(n);
  std::size_t test_size = 0;
  std::size_t cursor = 0;
  for (; cursor < group_order.size() && static_cast<double>(test_size) < target; ++cursor)
    test_size += groups[group_order[cursor]].size();

  for (std::size_t g = 0; g < group_order.size(); ++g) {
    auto& dest = g < cursor ? split.test : split.train;
    for (std::size_t idx : groups[group_order[g]]) dest.push_back(mentions[idx]);
  }

  // The whole point of the independent strategy; verified unconditionally.
  std::unordered_set<std::string> test_surfaces;
  for (const auto& m : split.test) test_surfaces.insert(normalize_surface(m.surface));
  for (const auto& m : split.train)
    if (test_surfaces.count(normalize_surface(m.surface)))
      throw std::logic_error("independent split produced overlapping surface \"" + m.surface + "\"");

  return split;
}

std::uint64_t CorpusStats::ambiguous_total() const {
  std::uint64_t total = 0;
  for (auto c : mentions_ambiguous) total += c;
  return total;
}

}  // namespace bd
