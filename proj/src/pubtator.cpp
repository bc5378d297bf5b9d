#include "bd/pubtator.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_set>

namespace bd {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  for (;;) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_i64(std::string_view s, std::int64_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_size(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

// Matches "PMID|t|..." / "PMID|a|..." and returns pmid + payload.
bool match_pipe_line(std::string_view line, char tag, std::int64_t& pmid, std::string_view& payload) {
  std::size_t p1 = line.find('|');
  if (p1 == std::string_view::npos || p1 + 3 > line.size()) return false;
  if (line[p1 + 1] != tag || line[p1 + 2] != '|') return false;
  if (!parse_i64(line.substr(0, p1), pmid)) return false;
  payload = line.substr(p1 + 3);
  return true;
}

}  // namespace

void check_span_against_document(const Document& doc, const TaggedSpan& span) {
  if (span.start >= span.end || span.end > doc.full_text.size())
    throw ParseError("span offsets [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                     ") out of range for pmid " + std::to_string(doc.pmid));
  if (doc.full_text.compare(span.start, span.end - span.start, span.surface) != 0)
    throw ParseError("surface mismatch at [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                     ") for pmid " + std::to_string(doc.pmid) + ": expected \"" +
                     doc.full_text.substr(span.start, span.end - span.start) + "\", got \"" + span.surface + "\"");
}

PubTatorCorpus parse_pubtator(std::istream& in) {
  PubTatorCorpus corpus;
  std::unordered_set<std::int64_t> seen_pmids;

  std::string line;
  std::size_t line_no = 0;
  bool have_doc = false;
  std::int64_t cur_pmid = 0;
  std::string cur_title;
  std::string cur_abstract;
  bool have_abstract = false;

  // Spans are validated once their document is complete; annotations always
  // follow the title/abstract lines in this format.
  std::vector<std::pair<std::size_t, TaggedSpan>> pending;  // (line_no, span)

  auto finish_document = [&]() {
    if (!have_doc) return;
    if (!seen_pmids.insert(cur_pmid).second)
      throw ParseError("duplicate pmid " + std::to_string(cur_pmid));
    corpus.documents.push_back(Document::make(cur_pmid, cur_title, cur_abstract));
    const Document& doc = corpus.documents.back();
    for (auto& [ln, span] : pending) {
      try {
        check_span_against_document(doc, span);
      } catch (const ParseError& e) {
        fail(ln, e.what());
      }
      corpus.spans.push_back(std::move(span));
    }
    pending.clear();
    have_doc = false;
    cur_title.clear();
    cur_abstract.clear();
    have_abstract = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish_document();
      continue;
    }

    std::int64_t pmid = 0;
    std::string_view payload;
    if (match_pipe_line(line, 't', pmid, payload)) {
      finish_document();
      if (pmid <= 0) fail(line_no, "pmid must be positive");
      have_doc = true;
      cur_pmid = pmid;
      cur_title = std::string(payload);
      continue;
    }
    if (match_pipe_line(line, 'a', pmid, payload)) {
      if (!have_doc || pmid != cur_pmid) fail(line_no, "abstract line without matching title");
      if (have_abstract) fail(line_no, "duplicate abstract line for pmid " + std::to_string(pmid));
      cur_abstract = std::string(payload);
      have_abstract = true;
      continue;
    }

    // Annotation line.
    auto fields = split_tabs(line);
    if (fields.size() != 5 && fields.size() != 6)
      fail(line_no, "expected 5 or 6 tab-separated fields, got " + std::to_string(fields.size()));

    TaggedSpan span;
    if (!parse_i64(trim(fields[0]), span.pmid) || span.pmid <= 0)
      fail(line_no, "bad pmid field \"" + std::string(fields[0]) + "\"");
    if (!have_doc || span.pmid != cur_pmid)
      fail(line_no, "annotation for pmid " + std::to_string(span.pmid) + " outside its document block");
    if (!parse_size(trim(fields[1]), span.start)) fail(line_no, "bad start offset");
    if (!parse_size(trim(fields[2]), span.end)) fail(line_no, "bad end offset");
    span.surface = std::string(fields[3]);

    auto type = parse_concept_type(trim(fields[4]));
    if (!type) {
      ++corpus.unknown_type_skipped;
      continue;
    }
    span.concept_type = *type;
    if (fields.size() == 6) span.concept_id = std::string(trim(fields[5]));
    pending.emplace_back(line_no, std::move(span));
  }
  finish_document();
  return corpus;
}

void write_pubtator(std::ostream& out, const std::vector<Document>& documents,
                    const std::vector<TaggedSpan>& spans) {
  std::map<std::int64_t, std::vector<const TaggedSpan*>> by_pmid;
  for (const auto& s : spans) by_pmid[s.pmid].push_back(&s);

  bool first = true;
  for (const auto& doc : documents) {
    if (!first) out << "\n";
    first = false;
    out << doc.pmid << "|t|" << doc.title << "\n";
    out << doc.pmid << "|a|" << doc.abstract << "\n";
    auto it = by_pmid.find(doc.pmid);
    if (it == by_pmid.end()) continue;
    for (const TaggedSpan* s : it->second) {
      out << s->pmid << '\t' << s->start << '\t' << s->end << '\t' << s->surface << '\t'
          << to_string(s->concept_type);
      if (!s->concept_id.empty()) out << '\t' << s->concept_id;
      out << "\n";
    }
  }
}

}  // namespace bd
