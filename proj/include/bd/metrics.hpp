#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bd/concept_type.hpp"
#include "bd/features.hpp"

namespace bd {

// 6x6 counts, rows gold, columns predicted.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumConceptTypes>, kNumConceptTypes> counts{};

  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(int gold) const;
  std::uint64_t col_sum(int pred) const;
};

ConfusionMatrix confusion(const std::vector<ConceptType>& gold, const std::vector<ConceptType>& pred);

// 0/0 metrics are defined as 0 and flagged.
struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
  bool degenerate = false;
};

std::array<ClassMetrics, kNumConceptTypes> per_class_prf(const ConfusionMatrix& matrix);

// 2PR / (P + R), 0 when both are 0.
double f1_score(double precision, double recall);

struct PrfTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Unweighted means of the per-class values; the F1 component is the mean
// of the per-class F1s.
PrfTriple macro_average(const std::array<ClassMetrics, kNumConceptTypes>& per_class);

struct MicroMacro {
  PrfTriple micro;
  PrfTriple macro;
};

// Micro comes from pooled counts (equal P/R/F1 in the single-label setting,
// verified on every call); macro values are the unweighted means of the
// per-class values. Macro F1 is the mean of per-class F1s, not the harmonic
// mean of macro P and macro R.
MicroMacro micro_macro(const std::array<ClassMetrics, kNumConceptTypes>& per_class,
                       const ConfusionMatrix& matrix);

struct EvalSummary {
  ConfusionMatrix matrix;
  std::array<ClassMetrics, kNumConceptTypes> per_class;
  PrfTriple micro;
  PrfTriple macro;
  bool candidate_restriction = true;
};

EvalSummary evaluate(const std::vector<ConceptType>& gold, const std::vector<ConceptType>& pred,
                     bool candidate_restriction);

// Aligned human-readable table (per-type rows plus micro/macro averages).
std::string render_report(const EvalSummary& summary);
nlohmann::json summary_to_json(const EvalSummary& summary);

// One prediction alongside its gold mention, as written by the predictor.
struct PredictionRecord {
  std::int64_t pmid = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  ConceptType gold_type = ConceptType::Gene;
  ConceptType predicted_type = ConceptType::Gene;
  std::array<double, kNumConceptTypes> probs{};
};

void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& predictions);
std::vector<PredictionRecord> read_predictions(std::istream& in);

// Writes only misclassified examples, with their context windows, as JSON
// lines; returns the number written (= total - trace of the matrix).
std::size_t export_errors(const std::vector<PredictionRecord>& predictions,
                          const std::vector<ContextWindows>& windows, std::ostream& out);

}  // namespace bd
