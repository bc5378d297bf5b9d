#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace bd {

// The six bioconcept types, in canonical class-index order.
enum class ConceptType : int {
  Gene = 0,
  Disease = 1,
  Chemical = 2,
  Species = 3,
  Mutation = 4,
  CellLine = 5,
};

inline constexpr int kNumConceptTypes = 6;

inline constexpr std::array<ConceptType, kNumConceptTypes> kAllConceptTypes = {
    ConceptType::Gene,    ConceptType::Disease,  ConceptType::Chemical,
    ConceptType::Species, ConceptType::Mutation, ConceptType::CellLine,
};

// Canonical name: parse_concept_type(to_string(t)) == t.
std::string_view to_string(ConceptType t);

// Case-insensitive. Accepts "Variation"/"Variant" for Mutation and
// "CellLine"/"Cell line" for CellLine.
std::optional<ConceptType> parse_concept_type(std::string_view name);

inline int class_index(ConceptType t) { return static_cast<int>(t); }

// Throws std::out_of_range for index outside [0, 6).
ConceptType concept_type_from_index(int index);

}  // namespace bd
