#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "bd/metrics.hpp"
#include "bd/rng.hpp"

using namespace bd;

TEST_CASE("confusion matrix counting") {
  SUBCASE("perfect predictions are diagonal") {
    std::vector<ConceptType> gold, pred;
    for (ConceptType t : kAllConceptTypes) {
      gold.push_back(t);
      pred.push_back(t);
    }
    const auto m = confusion(gold, pred);
    CHECK(m.trace() == 6);
    CHECK(m.total() == 6);
  }
  SUBCASE("one disagreement lands off-diagonal") {
    const auto m = confusion({ConceptType::Gene}, {ConceptType::Disease});
    CHECK(m.counts[0][1] == 1);
    CHECK(m.trace() == 0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(confusion({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(confusion({ConceptType::Gene}, {}), std::invalid_argument);
  }
  SUBCASE("random pairs match an independent tally") {
    Rng rng(31);
    std::vector<ConceptType> gold, pred;
    std::map<std::pair<int, int>, std::uint64_t> tally;
    for (int i = 0; i < 500; ++i) {
      const int g = static_cast<int>(rng.below(6));
      const int p = static_cast<int>(rng.below(6));
      gold.push_back(concept_type_from_index(g));
      pred.push_back(concept_type_from_index(p));
      ++tally[{g, p}];
    }
    const auto m = confusion(gold, pred);
    for (int g = 0; g < 6; ++g)
      for (int p = 0; p < 6; ++p) {
        const auto it = tally.find({g, p});
        CHECK(m.counts[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)] ==
              (it == tally.end() ? 0 : it->second));
      }
  }
}

TEST_CASE("f1 from precision and recall") {
  // Reference values: P 71.37, R 71.21 give F1 71.29 (two-decimal percentages).
  CHECK(f1_score(0.7137, 0.7121) == doctest::Approx(0.7129).epsilon(1.5e-4));
  CHECK(f1_score(0.0, 0.0) == 0.0);
  SUBCASE("P == R collapses to the same value") {
    for (double v : {0.1, 0.5, 0.9375}) CHECK(f1_score(v, v) == doctest::Approx(v).epsilon(1e-12));
  }
  SUBCASE("F1 lies between min and max of P and R") {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
      const double p = rng.uniform();
      const double r = rng.uniform();
      if (p + r == 0.0) continue;
      const double f1 = f1_score(p, r);
      CHECK(f1 >= std::min(p, r) - 1e-12);
      CHECK(f1 <= std::max(p, r) + 1e-12);
    }
  }
}

TEST_CASE("per-class metrics and the zero-denominator convention") {
  ConfusionMatrix m;
  m.counts[0][0] = 8;  // Gene right
  m.counts[0][1] = 2;  // Gene -> Disease
  m.counts[1][1] = 5;  // Disease right
  const auto per_class = per_class_prf(m);

  CHECK(per_class[0].precision == doctest::Approx(1.0));          // 8 / 8
  CHECK(per_class[0].recall == doctest::Approx(0.8));             // 8 / 10
  CHECK(per_class[1].precision == doctest::Approx(5.0 / 7.0));
  CHECK(per_class[1].recall == doctest::Approx(1.0));
  CHECK(per_class[0].support == 10);

  // Chemical has no support and no predictions: flagged zeros.
  CHECK(per_class[2].precision == 0.0);
  CHECK(per_class[2].recall == 0.0);
  CHECK(per_class[2].f1 == 0.0);
  CHECK(per_class[2].degenerate);
  CHECK_FALSE(per_class[0].degenerate);
}

TEST_CASE("macro averages are plain means of the per-class values") {
  // A reference per-concept P/R table, fed through the metric arithmetic.
  const double p[6] = {0.7137, 0.9960, 0.9310, 0.9375, 0.9279, 0.8877};
  const double r[6] = {0.7121, 0.9406, 0.8710, 0.6081, 0.8385, 0.9674};

  std::array<ClassMetrics, kNumConceptTypes> per_class{};
  for (int c = 0; c < kNumConceptTypes; ++c) {
    per_class[static_cast<std::size_t>(c)].precision = p[c];
    per_class[static_cast<std::size_t>(c)].recall = r[c];
    per_class[static_cast<std::size_t>(c)].f1 = f1_score(p[c], r[c]);
  }
  const PrfTriple macro = macro_average(per_class);
  CHECK(macro.precision == doctest::Approx(0.8990).epsilon(1e-3));
  CHECK(macro.recall == doctest::Approx(0.8230).epsilon(1e-3));
  CHECK(macro.f1 == doctest::Approx(0.8542).epsilon(1e-3));
}

TEST_CASE("micro identity and permutation invariance") {
  Rng rng(77);
  std::vector<ConceptType> gold, pred;
  for (int i = 0; i < 300; ++i) {
    gold.push_back(concept_type_from_index(static_cast<int>(rng.below(6))));
    pred.push_back(rng.uniform() < 0.6 ? gold.back()
                                       : concept_type_from_index(static_cast<int>(rng.below(6))));
  }
  const auto summary = evaluate(gold, pred, true);
  const double accuracy =
      static_cast<double>(summary.matrix.trace()) / static_cast<double>(summary.matrix.total());
  CHECK(summary.micro.precision == accuracy);
  CHECK(summary.micro.recall == accuracy);
  CHECK(summary.micro.f1 == accuracy);

  // Shuffle pairs together; nothing may move.
  std::vector<std::size_t> perm(gold.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  Rng shuffle_rng(5);
  shuffle_rng.shuffle(perm);
  std::vector<ConceptType> gold2, pred2;
  for (std::size_t i : perm) {
    gold2.push_back(gold[i]);
    pred2.push_back(pred[i]);
  }
  const auto shuffled = evaluate(gold2, pred2, true);
  CHECK(shuffled.micro.f1 == summary.micro.f1);
  CHECK(shuffled.macro.f1 == summary.macro.f1);
  for (int c = 0; c < kNumConceptTypes; ++c)
    CHECK(shuffled.per_class[static_cast<std::size_t>(c)].f1 ==
          summary.per_class[static_cast<std::size_t>(c)].f1);
}

TEST_CASE("single-class predictor scores its class frequency as micro P") {
  Rng rng(12);
  std::vector<ConceptType> gold, pred;
  std::size_t gene_count = 0;
  for (int i = 0; i < 100; ++i) {
    const auto g = concept_type_from_index(static_cast<int>(rng.below(6)));
    gold.push_back(g);
    pred.push_back(ConceptType::Gene);
    if (g == ConceptType::Gene) ++gene_count;
  }
  const auto summary = evaluate(gold, pred, false);
  CHECK(summary.micro.precision == doctest::Approx(static_cast<double>(gene_count) / 100.0));
}

TEST_CASE("report rendering names the mode and formats percentages") {
  const auto summary = evaluate({ConceptType::Gene, ConceptType::Disease},
                                {ConceptType::Gene, ConceptType::Gene}, true);
  const std::string text = render_report(summary);
  CHECK(text.find("Micro average") != std::string::npos);
  CHECK(text.find("Macro average") != std::string::npos);
  CHECK(text.find("Candidate restriction: on") != std::string::npos);
  CHECK(text.find("50.00%") != std::string::npos);

  const auto j = summary_to_json(summary);
  CHECK(j.at("micro").at("f1").get<double>() == doctest::Approx(0.5));
  CHECK(j.at("candidate_restriction").get<bool>());
}

namespace {

PredictionRecord make_pred(std::int64_t pmid, ConceptType gold, ConceptType predicted) {
  PredictionRecord p;
  p.pmid = pmid;
  p.start = 0;
  p.end = 4;
  p.surface = "span";
  p.gold_type = gold;
  p.predicted_type = predicted;
  p.probs[static_cast<std::size_t>(class_index(predicted))] = 1.0;
  return p;
}

}  // namespace

TEST_CASE("predictions file round-trips") {
  std::vector<PredictionRecord> preds = {
      make_pred(1, ConceptType::Gene, ConceptType::Gene),
      make_pred(2, ConceptType::Disease, ConceptType::Species),
  };
  std::ostringstream out;
  write_predictions(out, preds);
  std::istringstream in(out.str());
  const auto loaded = read_predictions(in);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].pmid == preds[0].pmid);
  CHECK(loaded[1].predicted_type == ConceptType::Species);
  CHECK(loaded[1].probs == preds[1].probs);
}

TEST_CASE("export_errors writes exactly the misclassified examples") {
  std::vector<PredictionRecord> preds;
  std::vector<ContextWindows> windows;
  Rng rng(3);
  std::size_t wrong = 0;
  for (int i = 0; i < 40; ++i) {
    const auto gold = concept_type_from_index(static_cast<int>(rng.below(6)));
    const auto predicted =
        rng.uniform() < 0.7 ? gold : concept_type_from_index(static_cast<int>(rng.below(6)));
    if (predicted != gold) ++wrong;
    preds.push_back(make_pred(i + 1, gold, predicted));
    ContextWindows w;
    w.before = {"ctx", "span"};
    w.after = {"span", "ctx"};
    windows.push_back(std::move(w));
  }

  std::ostringstream out;
  const std::size_t written = export_errors(preds, windows, out);
  CHECK(written == wrong);

  // Identity against the confusion matrix: written = total - trace.
  std::vector<ConceptType> gold, pred;
  for (const auto& p : preds) {
    gold.push_back(p.gold_type);
    pred.push_back(p.predicted_type);
  }
  const auto m = confusion(gold, pred);
  CHECK(written == m.total() - m.trace());

  SUBCASE("all correct writes nothing") {
    std::vector<PredictionRecord> perfect = {make_pred(1, ConceptType::Gene, ConceptType::Gene)};
    std::vector<ContextWindows> w(1);
    std::ostringstream empty_out;
    CHECK(export_errors(perfect, w, empty_out) == 0);
    CHECK(empty_out.str().empty());
  }
  SUBCASE("one wrong line carries both type names") {
    std::vector<PredictionRecord> one = {make_pred(1, ConceptType::Gene, ConceptType::Disease)};
    std::vector<ContextWindows> w(1);
    std::ostringstream one_out;
    CHECK(export_errors(one, w, one_out) == 1);
    CHECK(one_out.str().find("Gene") != std::string::npos);
    CHECK(one_out.str().find("Disease") != std::string::npos);
  }
}
