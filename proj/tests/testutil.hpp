#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bd/corpus_types.hpp"
#include "bd/rng.hpp"

namespace bdtest {

// A generated disambiguation corpus where the gold class is a deterministic
// function of one context token ("cue<Type>" within the window) and one
// feature token (the gold candidate id "SIG<Type>"). Surfaces are drawn
// class-independently so they carry no signal. Mutation and CellLine are
// deliberately rare, mirroring the imbalance the oversampling targets.
struct SyntheticCorpus {
  std::vector<bd::Document> documents;
  std::vector<bd::TaggedSpan> spans;
  std::vector<bd::RepositoryRecord> records;
  std::vector<bd::LabeledMention> mentions;  // the post-filter corpus
  double rule_accuracy = 0.0;                // computed analytically at generation
};

inline SyntheticCorpus make_synthetic_corpus(std::size_t n, std::uint64_t seed) {
  using namespace bd;
  SyntheticCorpus corpus;
  Rng rng(seed);

  // Class weights: common types dominate, Mutation and CellLine stay rare.
  const double weights[kNumConceptTypes] = {0.25, 0.20, 0.20, 0.15, 0.10, 0.10};
  // Rule-baseline priority, spelled out independently of the library.
  const ConceptType priority[kNumConceptTypes] = {ConceptType::Mutation, ConceptType::Species,
                                                  ConceptType::Gene,     ConceptType::Chemical,
                                                  ConceptType::Disease,  ConceptType::CellLine};

  std::size_t rule_correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t pmid = static_cast<std::int64_t>(1000 + i);

    double r = rng.uniform();
    int gold_idx = 0;
    for (; gold_idx < kNumConceptTypes - 1; ++gold_idx) {
      if (r < weights[gold_idx]) break;
      r -= weights[gold_idx];
    }
    const ConceptType gold = concept_type_from_index(gold_idx);
    ConceptType other = gold;
    while (other == gold)
      other = concept_type_from_index(static_cast<int>(rng.below(kNumConceptTypes)));

    const std::string surface = "xq" + std::to_string(rng.below(20));
    const std::string cue = "cue" + std::string(to_string(gold));

    std::ostringstream abstract;
    const std::size_t lead = 3 + rng.below(4);
    for (std::size_t k = 0; k < lead; ++k) abstract << "w" << rng.below(40) << " ";
    abstract << cue << " ";
    const std::size_t gap = rng.below(3);
    for (std::size_t k = 0; k < gap; ++k) abstract << "w" << rng.below(40) << " ";
    const std::string before_mention = abstract.str();
    abstract << surface;
    const std::size_t tail = 4 + rng.below(5);
    for (std::size_t k = 0; k < tail; ++k) abstract << " w" << rng.below(40);

    const std::string title = "Synthetic corpus document.";
    Document doc = Document::make(pmid, title, abstract.str());

    const std::size_t start = title.size() + 1 + before_mention.size();
    const std::size_t end = start + surface.size();

    const std::string gold_id = "SIG" + std::string(to_string(gold));
    const std::string other_id = "OID" + std::string(to_string(other));
    corpus.spans.push_back({pmid, start, end, surface, gold, gold_id});
    corpus.spans.push_back({pmid, start, end, surface, other, other_id});
    corpus.records.push_back({"synth", pmid, gold, gold_id});

    LabeledMention m;
    m.pmid = pmid;
    m.start = start;
    m.end = end;
    m.surface = surface;
    m.gold_type = gold;
    m.candidate_types = {gold, other};
    if (class_index(m.candidate_types[0]) > class_index(m.candidate_types[1]))
      std::swap(m.candidate_types[0], m.candidate_types[1]);
    m.candidate_ids[gold] = gold_id;
    m.candidate_ids[other] = other_id;
    m.source = "synth";
    corpus.mentions.push_back(std::move(m));
    corpus.documents.push_back(std::move(doc));

    for (const ConceptType p : priority) {
      if (p == gold) {
        ++rule_correct;
        break;
      }
      if (p == other) break;
    }
  }
  corpus.rule_accuracy = static_cast<double>(rule_correct) / static_cast<double>(n);
  return corpus;
}

// Fresh scratch directory under the system temp dir; wiped on construction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& name) {
    path = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace bdtest
