#pragma once

#include <iosfwd>
#include <vector>

#include "bd/corpus_types.hpp"

namespace bd {

// Labeled-mention format: one JSON object per line with keys pmid, start,
// end, surface, gold_type, candidate_types (array, canonical class order),
// candidate_ids (object), source. read(write(x)) == x.
void write_labeled_corpus(std::ostream& out, const std::vector<LabeledMention>& mentions);

// Throws ParseError with the line number on malformed lines.
std::vector<LabeledMention> read_labeled_corpus(std::istream& in);

}  // namespace bd
