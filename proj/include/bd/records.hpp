#pragma once

#include <iosfwd>
#include <vector>

#include "bd/corpus_types.hpp"

namespace bd {

// Normalized repository record format: "SOURCE\tPMID\tTYPE\tCONCEPT_ID",
// one record per line; "#"-prefixed lines are comments, blank lines are
// skipped. Bad column counts, unparseable pmids, unknown types, and empty
// ids throw ParseError with the line number.
std::vector<RepositoryRecord> parse_repository_records(std::istream& in);

}  // namespace bd
