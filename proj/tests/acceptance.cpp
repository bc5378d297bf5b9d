// Acceptance gates for the disambiguation toolkit. Each criterion prints
// one PASS/FAIL line; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bd/commands.hpp"
#include "bd/corpus.hpp"
#include "bd/corpus_io.hpp"
#include "bd/metrics.hpp"
#include "bd/pubtator.hpp"
#include "bd/records.hpp"
#include "bd/rng.hpp"
#include "bd/rule_model.hpp"
#include "bd/tokenize.hpp"
#include "testutil.hpp"

using namespace bd;
using bdtest::TempDir;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// C1: metric arithmetic against the reference per-concept table
// ---------------------------------------------------------------------------

Outcome criterion_metric_arithmetic() {
  struct Row {
    double p, r, f1;
  };
  // Reference per-concept precision/recall pairs with their expected F1s,
  // in canonical class order: Gene, Disease, Chemical, Species, Mutation,
  // CellLine.
  const Row rows[kNumConceptTypes] = {
      {0.8877, 0.9674, 0.9259},  // Gene
      {0.7137, 0.7121, 0.7129},  // Disease
      {0.9279, 0.8385, 0.8810},  // Chemical
      {0.9960, 0.9406, 0.9675},  // Species
      {0.9310, 0.8710, 0.9000},  // Mutation
      {0.9375, 0.6081, 0.7377},  // CellLine
  };
  const double tol = 5e-4;  // +/- 0.05 percentage points

  std::array<ClassMetrics, kNumConceptTypes> per_class{};
  bool ok = true;
  std::ostringstream detail;
  for (int c = 0; c < kNumConceptTypes; ++c) {
    auto& m = per_class[static_cast<std::size_t>(c)];
    m.precision = rows[c].p;
    m.recall = rows[c].r;
    m.f1 = f1_score(rows[c].p, rows[c].r);
    if (std::abs(m.f1 - rows[c].f1) > tol) {
      ok = false;
      detail << to_string(concept_type_from_index(c)) << " F1 " << m.f1 << " vs " << rows[c].f1 << "; ";
    }
  }
  const PrfTriple macro = macro_average(per_class);
  if (std::abs(macro.precision - 0.8990) > tol || std::abs(macro.recall - 0.8230) > tol ||
      std::abs(macro.f1 - 0.8542) > tol) {
    ok = false;
    detail << "macro (" << macro.precision << ", " << macro.recall << ", " << macro.f1 << ")";
  }
  if (ok) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "macro P %.4f R %.4f F1 %.4f, all within 0.05pp", macro.precision,
                  macro.recall, macro.f1);
    detail << buf;
  }
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// C2: rule baseline vs exhaustive enumeration
// ---------------------------------------------------------------------------

Outcome criterion_rule_oracle() {
  const auto order = PriorityOrder::pubtator_default();
  const ConceptType expected_order[kNumConceptTypes] = {ConceptType::Mutation, ConceptType::Species,
                                                        ConceptType::Gene,     ConceptType::Chemical,
                                                        ConceptType::Disease,  ConceptType::CellLine};
  for (int i = 0; i < kNumConceptTypes; ++i)
    if (order.order[static_cast<std::size_t>(i)] != expected_order[i])
      return {false, "default priority order is wrong"};

  std::size_t checked = 0;
  for (unsigned mask = 1; mask < 64; ++mask) {
    std::vector<ConceptType> candidates;
    for (int c = 0; c < kNumConceptTypes; ++c)
      if (mask & (1u << c)) candidates.push_back(concept_type_from_index(c));

    ConceptType oracle = candidates.front();
    for (const ConceptType t : expected_order) {
      bool found = false;
      for (const ConceptType c : candidates)
        if (c == t) found = true;
      if (found) {
        oracle = t;
        break;
      }
    }
    if (rule_predict(candidates, order) != oracle)
      return {false, "mismatch on subset mask " + std::to_string(mask)};
    ++checked;
  }
  return {checked == 63, "all 63 non-empty subsets agree with enumeration"};
}

// ---------------------------------------------------------------------------
// C3: gradient suite
// ---------------------------------------------------------------------------

Outcome criterion_gradient_suite() {
  std::ostringstream detail;
  bool ok = true;
  for (const auto& entry : run_gradient_suite()) {
    if (!entry.passed()) {
      ok = false;
      detail << entry.name << " at " << entry.max_rel_error << "; ";
    }
  }
  if (ok) detail << "every layer and the full tiny network under 1e-5";
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// C4: synthetic-corpus learning gates (cnnlstm, maxent, rule)
// ---------------------------------------------------------------------------

RunConfig synthetic_run_config(const TempDir& dir) {
  RunConfig config;
  config.work_dir = dir.path.string();
  config.documents = dir.file("docs.pubtator");
  config.records = dir.file("records.tsv");
  config.seed = 20240817;
  // Desk-scale network: same architecture, reduced widths.
  config.word_dim = 32;
  config.feat_dim = 32;
  config.conv1_filters = 32;
  config.conv1_kernel = 3;
  config.pool = 2;
  config.conv2_filters = 64;
  config.conv2_kernel = 3;
  config.lstm_units = 24;
  config.concat_units = 64 + 2 * 24;
  config.l_ctx = 13;
  config.l_feat = 12;
  config.epochs = 10;
  return config;
}

double report_micro_f1(const RunConfig& config) {
  nlohmann::json report = nlohmann::json::parse(bdtest::read_file(config.report_json_path()));
  return report.at("micro").at("f1").get<double>();
}

Outcome criterion_synthetic_learning() {
  TempDir dir("bd_acceptance_c4");
  const auto corpus = bdtest::make_synthetic_corpus(3200, 424242);
  {
    std::ofstream docs(dir.file("docs.pubtator"));
    write_pubtator(docs, corpus.documents, corpus.spans);
    std::ofstream records(dir.file("records.tsv"));
    for (const auto& r : corpus.records)
      records << r.source << '\t' << r.pmid << '\t' << to_string(r.concept_type) << '\t' << r.concept_id
              << "\n";
  }

  RunConfig config = synthetic_run_config(dir);
  cmd_build_corpus(config);
  cmd_split(config);

  std::ostringstream detail;
  bool ok = true;

  // CNN+LSTM: >= 95% held-out accuracy within 10 epochs.
  config.model = "cnnlstm";
  cmd_train(config);
  cmd_predict(config);
  cmd_evaluate(config);
  const double cnn_f1 = report_micro_f1(config);
  detail << "cnnlstm " << cnn_f1;
  ok = ok && cnn_f1 >= 0.95;

  // MaxEnt: >= 99% on the linearly separable signal.
  config.model = "maxent";
  config.checkpoint = dir.file("maxent.ckpt");
  cmd_train(config);
  cmd_predict(config);
  cmd_evaluate(config);
  const double maxent_f1 = report_micro_f1(config);
  detail << ", maxent " << maxent_f1;
  ok = ok && maxent_f1 >= 0.99;

  // Rule baseline: exactly the analytically computed accuracy.
  config.model = "rule";
  cmd_predict(config);
  cmd_evaluate(config);
  const double rule_f1 = report_micro_f1(config);

  std::ifstream test_in(config.test_path());
  const auto test_mentions = read_labeled_corpus(test_in);
  const ConceptType priority[] = {ConceptType::Mutation, ConceptType::Species, ConceptType::Gene,
                                  ConceptType::Chemical, ConceptType::Disease, ConceptType::CellLine};
  std::size_t correct = 0;
  for (const auto& m : test_mentions) {
    for (const ConceptType t : priority) {
      if (!m.has_candidate(t)) continue;
      if (t == m.gold_type) ++correct;
      break;
    }
  }
  const double analytic = static_cast<double>(correct) / static_cast<double>(test_mentions.size());
  detail << ", rule " << rule_f1 << " (analytic " << analytic << ")";
  ok = ok && rule_f1 == analytic;

  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// C5: hand-enumerated corpus pipeline fixture
// ---------------------------------------------------------------------------

Outcome criterion_corpus_fixture() {
  // Six documents: the confirmed-disease-annotation case (co-tagged so the
  // ambiguity filter keeps it), the two-span gene record, the gene/disease
  // double tag, a title-only document, an unmatched record, and an
  // unambiguous control.
  const std::string t1 = "Breast cancer genetics.";
  const std::string a1 = "Familial breast cancer risk was assessed.";
  const std::string f1 = t1 + " " + a1;
  const std::size_t bc = f1.find("breast cancer");

  const std::string t2 =
      "Eukaryotic translation initiation factor 4E (eIF4E) binds to the mRNA 5' cap and brings the "
      "mRNA into a complex with other protein synthesis initiation factors and ribosomes.";
  const std::string a2 = "Regulation of eIF4E is discussed.";
  const std::string f2 = t2 + " " + a2;
  const std::string long_form = "Eukaryotic translation initiation factor 4E";
  const std::size_t lf = f2.find(long_form);
  const std::size_t sf = f2.find("(eIF4E)") + 1;

  const std::string t3 = "XPID expression in tumours.";
  const std::string a3 = "We measured XPID levels in all samples.";
  const std::string f3 = t3 + " " + a3;
  const std::size_t xp = f3.find("XPID", t3.size());  // the abstract occurrence

  const std::string t6 = "Thyroid receptor biology.";
  const std::string a6 = "The THR gene was profiled.";
  const std::string f6 = t6 + " " + a6;
  const std::size_t thr = f6.find("THR");

  std::ostringstream docs;
  docs << "23262785|t|" << t1 << "\n23262785|a|" << a1 << "\n";
  docs << "23262785\t" << bc << "\t" << bc + 13 << "\tbreast cancer\tDisease\tD001943\n";
  docs << "23262785\t" << bc << "\t" << bc + 13 << "\tbreast cancer\tGene\tG675\n\n";

  docs << "10022874|t|" << t2 << "\n10022874|a|" << a2 << "\n";
  docs << "10022874\t" << lf << "\t" << lf + long_form.size() << "\t" << long_form << "\tGene\t1977\n";
  docs << "10022874\t" << sf << "\t" << sf + 5 << "\teIF4E\tGene\t1977\n";
  docs << "10022874\t" << sf << "\t" << sf + 5 << "\teIF4E\tChemical\tC0088\n\n";

  docs << "23378296|t|" << t3 << "\n23378296|a|" << a3 << "\n";
  docs << "23378296\t" << xp << "\t" << xp + 4 << "\tXPID\tDisease\tD0777\n";
  docs << "23378296\t" << xp << "\t" << xp + 4 << "\tXPID\tGene\tG0042\n\n";

  docs << "44444444|t|A title-only document.\n44444444|a|\n\n";
  docs << "55555555|t|Plain chemistry notes.\n55555555|a|No annotations match here.\n\n";
  docs << "66666666|t|" << t6 << "\n66666666|a|" << a6 << "\n";
  docs << "66666666\t" << thr << "\t" << thr + 3 << "\tTHR\tGene\tG7068\n";

  std::istringstream docs_in(docs.str());
  const auto parsed = parse_pubtator(docs_in);
  if (parsed.documents.size() != 6) return {false, "expected 6 documents"};

  std::ostringstream records_text;
  records_text << "mesh\t23262785\tDisease\tD001943\n";
  records_text << "gene2pubmed\t10022874\tGene\t1977\n";
  records_text << "mesh\t23378296\tGene\tG0042\n";
  records_text << "mesh\t55555555\tChemical\tC9999\n";     // no matching span
  records_text << "gene2pubmed\t66666666\tGene\tG7068\n";  // unambiguous
  std::istringstream records_in(records_text.str());
  const auto records = parse_repository_records(records_in);

  const auto joined = join_records_with_spans(records, parsed.spans);
  if (joined.matched.size() != 4 || joined.unmatched_records != 1)
    return {false, "join: got " + std::to_string(joined.matched.size()) + " matched, " +
                       std::to_string(joined.unmatched_records) + " unmatched"};
  if (joined.matched[1].spans.size() != 2) return {false, "eIF4E record should carry two spans"};

  const auto exploded = explode_to_individual_spans(joined.matched);
  if (exploded.size() != 5) return {false, "explosion: expected 5, got " + std::to_string(exploded.size())};

  const auto ambiguous = filter_ambiguous(exploded, parsed.spans);
  if (ambiguous.size() != 3)
    return {false, "ambiguity filter: expected 3 survivors, got " + std::to_string(ambiguous.size())};

  // Exact survivor contents, in explosion order.
  const auto& m1 = ambiguous[0];
  if (m1.pmid != 23262785 || m1.surface != "breast cancer" || m1.gold_type != ConceptType::Disease ||
      m1.candidate_types != std::vector<ConceptType>{ConceptType::Gene, ConceptType::Disease})
    return {false, "breast cancer mention wrong"};
  const auto& m2 = ambiguous[1];
  if (m2.pmid != 10022874 || m2.surface != "eIF4E" || m2.gold_type != ConceptType::Gene ||
      m2.candidate_types != std::vector<ConceptType>{ConceptType::Gene, ConceptType::Chemical} ||
      m2.candidate_ids.at(ConceptType::Gene) != "1977")
    return {false, "eIF4E mention wrong"};
  const auto& m3 = ambiguous[2];
  if (m3.pmid != 23378296 || m3.surface != "XPID" || m3.gold_type != ConceptType::Gene ||
      m3.candidate_types != std::vector<ConceptType>{ConceptType::Gene, ConceptType::Disease})
    return {false, "XPID mention wrong"};

  return {true, "4 matched, 1 unmatched, 5 exploded, 3 ambiguous survivors as enumerated"};
}

// ---------------------------------------------------------------------------
// C6: split properties across 100 seeds
// ---------------------------------------------------------------------------

Outcome criterion_split_properties() {
  const auto corpus = bdtest::make_synthetic_corpus(500, 606060);
  const auto& mentions = corpus.mentions;

  std::map<std::string, std::size_t> group_sizes;
  for (const auto& m : mentions) ++group_sizes[normalize_surface(m.surface)];
  std::size_t largest_group = 0;
  for (const auto& [s, size] : group_sizes) largest_group = std::max(largest_group, size);

  const std::size_t target = 100;  // ceil(0.2 * 500)
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto random_split = split_corpus(mentions, SplitStrategy::Random, 0.2, seed);
    if (random_split.test.size() != target)
      return {false, "random seed " + std::to_string(seed) + ": |test| = " +
                         std::to_string(random_split.test.size())};
    if (random_split.train.size() + random_split.test.size() != mentions.size())
      return {false, "random split is not a partition"};

    const auto indep = split_corpus(mentions, SplitStrategy::Independent, 0.2, seed);
    std::set<std::string> train_surfaces, test_surfaces;
    for (const auto& m : indep.train) train_surfaces.insert(normalize_surface(m.surface));
    for (const auto& m : indep.test) test_surfaces.insert(normalize_surface(m.surface));
    for (const auto& s : test_surfaces)
      if (train_surfaces.count(s))
        return {false, "independent seed " + std::to_string(seed) + ": surface overlap on " + s};
    if (indep.test.size() < target || indep.test.size() - target >= largest_group)
      return {false, "independent seed " + std::to_string(seed) + ": |test| = " +
                         std::to_string(indep.test.size()) + " not within one group of " +
                         std::to_string(target)};
  }
  return {true, "100 seeds: random |test| = 100 exactly; independent disjoint within one group"};
}

// ---------------------------------------------------------------------------
// C7: oversampling stream counts
// ---------------------------------------------------------------------------

Outcome criterion_oversampling() {
  Rng rng(17);
  std::vector<int> labels;
  std::array<std::size_t, kNumConceptTypes> class_counts{};
  for (int i = 0; i < 1000; ++i) {
    const int label = static_cast<int>(rng.below(kNumConceptTypes));
    labels.push_back(label);
    ++class_counts[static_cast<std::size_t>(label)];
  }

  const auto stream = build_epoch_stream(labels, 10);
  std::array<std::size_t, kNumConceptTypes> stream_counts{};
  for (const std::size_t idx : stream) ++stream_counts[static_cast<std::size_t>(labels[idx])];

  for (int c = 0; c < kNumConceptTypes; ++c) {
    const bool rare =
        c == class_index(ConceptType::Mutation) || c == class_index(ConceptType::CellLine);
    const std::size_t expected = class_counts[static_cast<std::size_t>(c)] * (rare ? 10 : 1);
    if (stream_counts[static_cast<std::size_t>(c)] != expected)
      return {false, std::string(to_string(concept_type_from_index(c))) + ": stream count " +
                         std::to_string(stream_counts[static_cast<std::size_t>(c)]) + " != " +
                         std::to_string(expected)};
  }
  return {true, "stream counts exactly 10x for Mutation/CellLine and 1x otherwise"};
}

// ---------------------------------------------------------------------------
// C8: end-to-end byte determinism
// ---------------------------------------------------------------------------

Outcome criterion_determinism() {
  TempDir dir("bd_acceptance_c8");
  const auto corpus = bdtest::make_synthetic_corpus(300, 777);
  {
    std::ofstream docs(dir.file("docs.pubtator"));
    write_pubtator(docs, corpus.documents, corpus.spans);
    std::ofstream records(dir.file("records.tsv"));
    for (const auto& r : corpus.records)
      records << r.source << '\t' << r.pmid << '\t' << to_string(r.concept_type) << '\t' << r.concept_id
              << "\n";
  }

  RunConfig config = synthetic_run_config(dir);
  config.model = "cnnlstm";
  config.epochs = 2;

  auto run_pipeline = [&]() {
    cmd_build_corpus(config);
    cmd_split(config);
    cmd_train(config);
    cmd_predict(config);
    cmd_evaluate(config);
  };

  run_pipeline();
  const std::vector<std::string> artifacts = {
      config.corpus_path(),   config.stats_json_path(),  config.stats_text_path(),
      config.train_path(),    config.test_path(),        config.vocab_path(),
      config.checkpoint_path(), config.predictions_path(), config.report_text_path(),
      config.report_json_path(), config.errors_path(),
  };
  std::vector<std::string> first;
  for (const auto& path : artifacts) first.push_back(bdtest::read_file(path));

  run_pipeline();
  for (std::size_t i = 0; i < artifacts.size(); ++i)
    if (bdtest::read_file(artifacts[i]) != first[i])
      return {false, "artifact differs between runs: " + artifacts[i]};

  return {true, std::to_string(artifacts.size()) + " artifacts byte-identical across two runs"};
}

// ---------------------------------------------------------------------------
// C9: format round-trips on generated fixtures
// ---------------------------------------------------------------------------

std::string random_text(Rng& rng, std::size_t min_len, std::size_t max_len) {
  static const char alphabet[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .,;:()-";
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  std::string out;
  for (std::size_t i = 0; i < len; ++i)
    out.push_back(alphabet[rng.below(sizeof(alphabet) - 1)]);
  return out;
}

Outcome criterion_round_trips() {
  Rng rng(909090);

  // PubTator: 1,000 generated documents with 0-4 annotations each.
  std::vector<Document> documents;
  std::vector<TaggedSpan> spans;
  for (int i = 0; i < 1000; ++i) {
    Document doc = Document::make(i + 1, random_text(rng, 5, 40), random_text(rng, 0, 120));
    const std::size_t n_spans = rng.below(5);
    for (std::size_t s = 0; s < n_spans; ++s) {
      const std::size_t start = rng.below(doc.full_text.size() - 1);
      const std::size_t end = start + 1 + rng.below(std::min<std::size_t>(12, doc.full_text.size() - start));
      TaggedSpan span;
      span.pmid = doc.pmid;
      span.start = start;
      span.end = end;
      span.surface = doc.full_text.substr(start, end - start);
      span.concept_type = concept_type_from_index(static_cast<int>(rng.below(6)));
      if (rng.below(4) != 0) span.concept_id = "ID" + std::to_string(rng.below(10000));
      spans.push_back(std::move(span));
    }
    documents.push_back(std::move(doc));
  }

  std::ostringstream out;
  write_pubtator(out, documents, spans);
  std::istringstream in(out.str());
  const auto reparsed = parse_pubtator(in);
  if (reparsed.documents != documents) return {false, "documents changed across the round-trip"};
  if (reparsed.spans != spans) return {false, "spans changed across the round-trip"};
  for (const auto& span : reparsed.spans) {
    const auto& doc = reparsed.documents[static_cast<std::size_t>(span.pmid - 1)];
    if (doc.full_text.compare(span.start, span.end - span.start, span.surface) != 0)
      return {false, "full_text slice invariant violated after reparse"};
  }

  // Labeled corpus: 1,000 generated mentions.
  std::vector<LabeledMention> mentions;
  for (int i = 0; i < 1000; ++i) {
    LabeledMention m;
    m.pmid = 1 + static_cast<std::int64_t>(rng.below(1000000));
    m.start = rng.below(300);
    m.end = m.start + 1 + rng.below(40);
    m.surface = random_text(rng, 1, 25);
    const int gold = static_cast<int>(rng.below(6));
    m.gold_type = concept_type_from_index(gold);
    std::set<int> candidates = {gold};
    while (candidates.size() < 2) candidates.insert(static_cast<int>(rng.below(6)));
    if (rng.below(2)) candidates.insert(static_cast<int>(rng.below(6)));
    for (const int c : candidates) {
      m.candidate_types.push_back(concept_type_from_index(c));
      m.candidate_ids[concept_type_from_index(c)] = "id" + std::to_string(rng.below(100000));
    }
    m.source = "gen" + std::to_string(rng.below(10));
    mentions.push_back(std::move(m));
  }
  std::ostringstream corpus_out;
  write_labeled_corpus(corpus_out, mentions);
  std::istringstream corpus_in(corpus_out.str());
  if (read_labeled_corpus(corpus_in) != mentions)
    return {false, "labeled corpus changed across the round-trip"};

  return {true, "1,000 documents and 1,000 mentions round-trip losslessly"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"C1 metric arithmetic on the reference table", 1.0, criterion_metric_arithmetic},
      {"C2 rule baseline exhaustive oracle", 1.0, criterion_rule_oracle},
      {"C3 finite-difference gradient suite", 120.0, criterion_gradient_suite},
      {"C4 synthetic-corpus learning gates", 600.0, criterion_synthetic_learning},
      {"C5 corpus pipeline hand fixture", 1.0, criterion_corpus_fixture},
      {"C6 split properties over 100 seeds", 30.0, criterion_split_properties},
      {"C7 oversampling stream counts", 10.0, criterion_oversampling},
      {"C8 end-to-end byte determinism", 600.0, criterion_determinism},
      {"C9 format round-trips on 1,000 fixtures", 60.0, criterion_round_trips},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.budget_seconds) {
      outcome.passed = false;
      outcome.detail += " [exceeded " + std::to_string(criterion.budget_seconds) + "s budget]";
    }
    std::printf("[%s] %-42s %7.2fs  %s\n", outcome.passed ? "PASS" : "FAIL", criterion.name, seconds,
                outcome.detail.c_str());
    if (!outcome.passed) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
