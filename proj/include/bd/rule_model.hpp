#pragma once

#include <array>
#include <vector>

#include "bd/concept_type.hpp"

namespace bd {

// Tagger-precision priority order; a permutation of all six types.
struct PriorityOrder {
  std::array<ConceptType, kNumConceptTypes> order;

  // mutation > species > gene > chemical > disease > cell line
  static PriorityOrder pubtator_default();

  int rank(ConceptType t) const;
};

// The candidate appearing earliest in the order. Throws on an empty set.
ConceptType rule_predict(const std::vector<ConceptType>& candidates, const PriorityOrder& order);

}  // namespace bd
