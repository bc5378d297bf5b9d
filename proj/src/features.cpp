#include "bd/features.hpp"

#include <algorithm>
#include <set>

#include "bd/tokenize.hpp"

namespace bd {

std::vector<std::string> FeatureBundle::all() const {
  std::vector<std::string> out = semantic;
  out.insert(out.end(), word.begin(), word.end());
  return out;
}

ContextWindows extract_context(const Document& doc, const LabeledMention& mention, int window,
                               std::size_t* misaligned) {
  const auto tokens = tokenize_with_offsets(doc.full_text);
  const std::size_t n = tokens.size();
  const std::size_t w = window < 0 ? 0 : static_cast<std::size_t>(window);

  // Mention tokens: the contiguous run overlapping [start, end).
  std::size_t first = n;
  std::size_t last = n;  // exclusive
  for (std::size_t i = 0; i < n; ++i) {
    if (tokens[i].end > mention.start && tokens[i].start < mention.end) {
      if (first == n) first = i;
      last = i + 1;
    } else if (first != n) {
      break;
    }
  }

  bool aligned = false;
  if (first == n) {
    // Mention fell entirely inside stripped punctuation; anchor at the
    // insertion point so the windows still surround the site.
    std::size_t at = 0;
    while (at < n && tokens[at].end <= mention.start) ++at;
    first = last = at;
  } else {
    aligned = tokens[first].start == mention.start && tokens[last - 1].end == mention.end;
  }
  if (!aligned && misaligned) ++*misaligned;

  ContextWindows out;
  const std::size_t before_begin = first >= w ? first - w : 0;
  for (std::size_t i = before_begin; i < last; ++i) out.before.push_back(tokens[i].text);
  const std::size_t after_end = std::min(n, last + w);
  for (std::size_t i = first; i < after_end; ++i) out.after.push_back(tokens[i].text);
  return out;
}

FeatureBundle extract_features(const LabeledMention& mention, const std::vector<TaggedSpan>& spans,
                               const std::vector<AbbrevDefinition>& abbrevs) {
  FeatureBundle bundle;

  std::set<std::string> semantic;
  for (ConceptType t : mention.candidate_types) semantic.insert("TYPE=" + std::string(to_string(t)));
  for (const auto& [type, id] : mention.candidate_ids)
    if (!id.empty()) semantic.insert("ID=" + id);

  // Full-name features via the abbreviation table: if the mention surface
  // is a known short form, pull in what the taggers said about its long form.
  for (const auto& def : abbrevs) {
    if (def.pmid != mention.pmid || def.short_form != mention.surface) continue;
    for (const auto& span : spans) {
      if (span.surface != def.long_form) continue;
      semantic.insert("FULLTYPE=" + std::string(to_string(span.concept_type)));
      if (!span.concept_id.empty()) semantic.insert("FULLID=" + span.concept_id);
    }
  }
  bundle.semantic.assign(semantic.begin(), semantic.end());

  for (const auto& token : tokenize(mention.surface)) {
    const auto chars = utf8_chars(token);
    const std::size_t max_k = std::min<std::size_t>(3, chars.size());
    for (std::size_t k = 1; k <= max_k; ++k) {
      std::string prefix, suffix;
      for (std::size_t i = 0; i < k; ++i) {
        prefix += chars[i];
        suffix += chars[chars.size() - k + i];
      }
      bundle.word.push_back("PRE" + std::to_string(k) + "=" + prefix);
      bundle.word.push_back("SUF" + std::to_string(k) + "=" + suffix);
    }
  }
  return bundle;
}

}  // namespace bd
