#include "bd/records.hpp"

#include <charconv>
#include <istream>
#include <string>

#include "bd/pubtator.hpp"

namespace bd {

std::vector<RepositoryRecord> parse_repository_records(std::istream& in) {
  std::vector<RepositoryRecord> records;
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& what) -> void {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string_view> fields;
    std::string_view sv = line;
    std::size_t pos = 0;
    for (;;) {
      std::size_t tab = sv.find('\t', pos);
      if (tab == std::string_view::npos) {
        fields.push_back(sv.substr(pos));
        break;
      }
      fields.push_back(sv.substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (fields.size() != 4)
      fail("expected 4 tab-separated columns, got " + std::to_string(fields.size()));

    RepositoryRecord rec;
    rec.source = std::string(fields[0]);

    std::int64_t pmid = 0;
    auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), pmid);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size() || pmid <= 0)
      fail("pmid is not a positive integer: \"" + std::string(fields[1]) + "\"");
    rec.pmid = pmid;

    auto type = parse_concept_type(fields[2]);
    if (!type) fail("unknown concept type \"" + std::string(fields[2]) + "\"");
    rec.concept_type = *type;

    rec.concept_id = std::string(fields[3]);
    if (rec.concept_id.empty()) fail("empty concept id");

    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace bd
