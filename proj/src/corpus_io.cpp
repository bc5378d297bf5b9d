#include "bd/corpus_io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "bd/pubtator.hpp"

namespace bd {

using nlohmann::json;

void write_labeled_corpus(std::ostream& out, const std::vector<LabeledMention>& mentions) {
  for (const auto& m : mentions) {
    json types = json::array();
    for (ConceptType t : m.candidate_types) types.push_back(std::string(to_string(t)));
    json ids = json::object();
    for (const auto& [type, id] : m.candidate_ids) ids[std::string(to_string(type))] = id;
    json line = {
        {"pmid", m.pmid},
        {"start", m.start},
        {"end", m.end},
        {"surface", m.surface},
        {"gold_type", std::string(to_string(m.gold_type))},
        {"candidate_types", std::move(types)},
        {"candidate_ids", std::move(ids)},
        {"source", m.source},
    };
    out << line.dump() << "\n";
  }
}

std::vector<LabeledMention> read_labeled_corpus(std::istream& in) {
  std::vector<LabeledMention> mentions;
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& what) -> void {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) fail("not a JSON object");

    try {
      LabeledMention m;
      m.pmid = j.at("pmid").get<std::int64_t>();
      m.start = j.at("start").get<std::size_t>();
      m.end = j.at("end").get<std::size_t>();
      m.surface = j.at("surface").get<std::string>();

      auto gold = parse_concept_type(j.at("gold_type").get<std::string>());
      if (!gold) fail("unknown gold_type");
      m.gold_type = *gold;

      for (const auto& t : j.at("candidate_types")) {
        auto type = parse_concept_type(t.get<std::string>());
        if (!type) fail("unknown candidate type");
        m.candidate_types.push_back(*type);
      }
      std::sort(m.candidate_types.begin(), m.candidate_types.end(),
                [](ConceptType a, ConceptType b) { return class_index(a) < class_index(b); });
      m.candidate_types.erase(std::unique(m.candidate_types.begin(), m.candidate_types.end()),
                              m.candidate_types.end());

      for (const auto& [key, value] : j.at("candidate_ids").items()) {
        auto type = parse_concept_type(key);
        if (!type) fail("unknown candidate_ids type");
        m.candidate_ids[*type] = value.get<std::string>();
      }
      m.source = j.at("source").get<std::string>();

      if (m.candidate_types.empty()) fail("empty candidate_types");
      if (!m.has_candidate(m.gold_type)) fail("gold_type not among candidate_types");
      mentions.push_back(std::move(m));
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }
  return mentions;
}

}  // namespace bd
