#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "bd/corpus_types.hpp"

namespace bd {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PubTatorCorpus {
  std::vector<Document> documents;      // input order
  std::vector<TaggedSpan> spans;        // input order
  std::size_t unknown_type_skipped = 0; // annotation lines with unrecognized types
};

// PubTator exchange format:
//   PMID|t|TITLE
//   PMID|a|ABSTRACT
//   PMID<TAB>START<TAB>END<TAB>SURFACE<TAB>TYPE<TAB>ID   (ID optional)
//   <blank line between documents>
// Offsets index full_text = title + " " + abstract. Every span is checked
// against its document slice; mismatches and malformed lines throw
// ParseError with the line number. Unknown concept types are skipped and
// counted, not fatal.
PubTatorCorpus parse_pubtator(std::istream& in);

// Canonical writer: abstract line always present, annotations grouped under
// their document in input order, one blank line between documents.
void write_pubtator(std::ostream& out, const std::vector<Document>& documents,
                    const std::vector<TaggedSpan>& spans);

// Throws ParseError if full_text[start..end) != surface or offsets are out
// of range.
void check_span_against_document(const Document& doc, const TaggedSpan& span);

}  // namespace bd
