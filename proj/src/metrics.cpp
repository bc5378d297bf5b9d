#include "bd/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "bd/pubtator.hpp"

namespace bd {

using nlohmann::json;

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts)
    for (std::uint64_t c : row) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (int i = 0; i < kNumConceptTypes; ++i)
    t += counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(int gold) const {
  std::uint64_t t = 0;
  for (std::uint64_t c : counts[static_cast<std::size_t>(gold)]) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::col_sum(int pred) const {
  std::uint64_t t = 0;
  for (int g = 0; g < kNumConceptTypes; ++g)
    t += counts[static_cast<std::size_t>(g)][static_cast<std::size_t>(pred)];
  return t;
}

ConfusionMatrix confusion(const std::vector<ConceptType>& gold, const std::vector<ConceptType>& pred) {
  if (gold.empty()) throw std::invalid_argument("confusion: empty input");
  if (gold.size() != pred.size()) throw std::invalid_argument("confusion: length mismatch");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < gold.size(); ++i)
    ++m.counts[static_cast<std::size_t>(class_index(gold[i]))]
               [static_cast<std::size_t>(class_index(pred[i]))];
  return m;
}

double f1_score(double precision, double recall) {
  return (precision + recall) == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

std::array<ClassMetrics, kNumConceptTypes> per_class_prf(const ConfusionMatrix& matrix) {
  std::array<ClassMetrics, kNumConceptTypes> out{};
  for (int c = 0; c < kNumConceptTypes; ++c) {
    auto& m = out[static_cast<std::size_t>(c)];
    const auto tp = matrix.counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    const auto col = matrix.col_sum(c);
    const auto row = matrix.row_sum(c);
    m.support = row;
    m.degenerate = col == 0 || row == 0;
    m.precision = col == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(col);
    m.recall = row == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(row);
    m.f1 = f1_score(m.precision, m.recall);
    if ((m.precision + m.recall) == 0.0) m.degenerate = true;
  }
  return out;
}

PrfTriple macro_average(const std::array<ClassMetrics, kNumConceptTypes>& per_class) {
  PrfTriple macro;
  for (const auto& m : per_class) {
    macro.precision += m.precision / kNumConceptTypes;
    macro.recall += m.recall / kNumConceptTypes;
    macro.f1 += m.f1 / kNumConceptTypes;
  }
  return macro;
}

MicroMacro micro_macro(const std::array<ClassMetrics, kNumConceptTypes>& per_class,
                       const ConfusionMatrix& matrix) {
  MicroMacro out;

  // Pooled counts. With exactly one prediction per example the pooled
  // prediction and gold totals both equal the example count.
  const auto total = matrix.total();
  const auto tp = matrix.trace();
  const double micro_p = total == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(total);
  const double micro_r = total == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(total);
  if (std::abs(micro_p - micro_r) > 1e-12)
    throw std::logic_error("micro precision != micro recall in single-label evaluation");
  out.micro = {micro_p, micro_r, micro_p};
  out.macro = macro_average(per_class);
  return out;
}

EvalSummary evaluate(const std::vector<ConceptType>& gold, const std::vector<ConceptType>& pred,
                     bool candidate_restriction) {
  EvalSummary s;
  s.matrix = confusion(gold, pred);
  s.per_class = per_class_prf(s.matrix);
  const auto mm = micro_macro(s.per_class, s.matrix);
  s.micro = mm.micro;
  s.macro = mm.macro;
  s.candidate_restriction = candidate_restriction;
  return s;
}

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%6.2f%%", v * 100.0);
  return buf;
}

}  // namespace

std::string render_report(const EvalSummary& s) {
  std::string out;
  out += "Concept type     Precision   Recall  F1-score  Support\n";
  for (int c = 0; c < kNumConceptTypes; ++c) {
    const auto& m = s.per_class[static_cast<std::size_t>(c)];
    char line[128];
    std::snprintf(line, sizeof(line), "%-15s %9s %8s %9s %8llu%s\n",
                  std::string(to_string(concept_type_from_index(c))).c_str(), pct(m.precision).c_str(),
                  pct(m.recall).c_str(), pct(m.f1).c_str(),
                  static_cast<unsigned long long>(m.support), m.degenerate ? "  (0/0)" : "");
    out += line;
  }
  char micro_line[128];
  std::snprintf(micro_line, sizeof(micro_line), "%-15s %9s %8s %9s\n", "Micro average",
                pct(s.micro.precision).c_str(), pct(s.micro.recall).c_str(), pct(s.micro.f1).c_str());
  out += micro_line;
  char macro_line[128];
  std::snprintf(macro_line, sizeof(macro_line), "%-15s %9s %8s %9s\n", "Macro average",
                pct(s.macro.precision).c_str(), pct(s.macro.recall).c_str(), pct(s.macro.f1).c_str());
  out += macro_line;
  out += std::string("Candidate restriction: ") + (s.candidate_restriction ? "on" : "off") + "\n";
  return out;
}

json summary_to_json(const EvalSummary& s) {
  json per_class = json::object();
  for (int c = 0; c < kNumConceptTypes; ++c) {
    const auto& m = s.per_class[static_cast<std::size_t>(c)];
    per_class[std::string(to_string(concept_type_from_index(c)))] = {
        {"precision", m.precision}, {"recall", m.recall},         {"f1", m.f1},
        {"support", m.support},     {"degenerate", m.degenerate},
    };
  }
  json matrix = json::array();
  for (const auto& row : s.matrix.counts) matrix.push_back(row);
  return {
      {"matrix", matrix},
      {"per_class", per_class},
      {"micro", {{"precision", s.micro.precision}, {"recall", s.micro.recall}, {"f1", s.micro.f1}}},
      {"macro", {{"precision", s.macro.precision}, {"recall", s.macro.recall}, {"f1", s.macro.f1}}},
      {"candidate_restriction", s.candidate_restriction},
      {"total", s.matrix.total()},
  };
}

void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& predictions) {
  for (const auto& p : predictions) {
    json line = {
        {"pmid", p.pmid},
        {"start", p.start},
        {"end", p.end},
        {"surface", p.surface},
        {"gold_type", std::string(to_string(p.gold_type))},
        {"predicted_type", std::string(to_string(p.predicted_type))},
        {"probs", p.probs},
    };
    out << line.dump() << "\n";
  }
}

std::vector<PredictionRecord> read_predictions(std::istream& in) {
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("line " + std::to_string(line_no) + ": not a JSON object");
    try {
      PredictionRecord p;
      p.pmid = j.at("pmid").get<std::int64_t>();
      p.start = j.at("start").get<std::size_t>();
      p.end = j.at("end").get<std::size_t>();
      p.surface = j.at("surface").get<std::string>();
      auto gold = parse_concept_type(j.at("gold_type").get<std::string>());
      auto predicted = parse_concept_type(j.at("predicted_type").get<std::string>());
      if (!gold || !predicted) throw ParseError("line " + std::to_string(line_no) + ": unknown type name");
      p.gold_type = *gold;
      p.predicted_type = *predicted;
      const auto probs = j.at("probs").get<std::vector<double>>();
      if (probs.size() != kNumConceptTypes)
        throw ParseError("line " + std::to_string(line_no) + ": expected 6 probabilities");
      std::copy(probs.begin(), probs.end(), p.probs.begin());
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::size_t export_errors(const std::vector<PredictionRecord>& predictions,
                          const std::vector<ContextWindows>& windows, std::ostream& out) {
  if (windows.size() != predictions.size())
    throw std::invalid_argument("export_errors: windows/predictions length mismatch");
  std::size_t written = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    if (p.predicted_type == p.gold_type) continue;
    json line = {
        {"pmid", p.pmid},
        {"start", p.start},
        {"end", p.end},
        {"surface", p.surface},
        {"before", windows[i].before},
        {"after", windows[i].after},
        {"gold_type", std::string(to_string(p.gold_type))},
        {"predicted_type", std::string(to_string(p.predicted_type))},
        {"probs", p.probs},
    };
    out << line.dump() << "\n";
    ++written;
  }
  return written;
}

}  // namespace bd
