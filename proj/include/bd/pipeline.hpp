#pragma once

#include <vector>

#include "bd/corpus_types.hpp"
#include "bd/features.hpp"

namespace bd {

// One mention with its derived windows and feature bundle; the shared
// input of vocabulary building, encoding, and MaxEnt featurization.
struct PreparedExample {
  LabeledMention mention;
  ContextWindows windows;
  FeatureBundle features;
};

struct PipelineCounters {
  std::size_t misaligned_mentions = 0;
};

// Derives windows, abbreviations, and feature bundles per mention. Throws
// if a mention's document is missing.
std::vector<PreparedExample> prepare_examples(const std::vector<LabeledMention>& mentions,
                                              const std::vector<Document>& documents,
                                              const std::vector<TaggedSpan>& spans, int window,
                                              PipelineCounters* counters = nullptr);

}  // namespace bd
