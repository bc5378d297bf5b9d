#include "bd/rule_model.hpp"

#include <stdexcept>

namespace bd {

PriorityOrder PriorityOrder::pubtator_default() {
  return {{ConceptType::Mutation, ConceptType::Species, ConceptType::Gene, ConceptType::Chemical,
           ConceptType::Disease, ConceptType::CellLine}};
}

int PriorityOrder::rank(ConceptType t) const {
  for (int i = 0; i < kNumConceptTypes; ++i)
    if (order[static_cast<std::size_t>(i)] == t) return i;
  throw std::logic_error("PriorityOrder: type missing from order");
}

ConceptType rule_predict(const std::vector<ConceptType>& candidates, const PriorityOrder& order) {
  if (candidates.empty()) throw std::invalid_argument("rule_predict: empty candidate set");
  ConceptType best = candidates.front();
  int best_rank = order.rank(best);
  for (ConceptType t : candidates) {
    const int r = order.rank(t);
    if (r < best_rank) {
      best_rank = r;
      best = t;
    }
  }
  return best;
}

}  // namespace bd
