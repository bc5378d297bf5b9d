#include "bd/concept_type.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace bd {

std::string_view to_string(ConceptType t) {
  switch (t) {
    case ConceptType::Gene: return "Gene";
    case ConceptType::Disease: return "Disease";
    case ConceptType::Chemical: return "Chemical";
    case ConceptType::Species: return "Species";
    case ConceptType::Mutation: return "Mutation";
    case ConceptType::CellLine: return "CellLine";
  }
  throw std::logic_error("to_string: invalid ConceptType");
}

std::optional<ConceptType> parse_concept_type(std::string_view name) {
  std::string lower;
  lower.reserve(name.size());
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

  if (lower == "gene") return ConceptType::Gene;
  if (lower == "disease") return ConceptType::Disease;
  if (lower == "chemical") return ConceptType::Chemical;
  if (lower == "species") return ConceptType::Species;
  if (lower == "mutation" || lower == "variation" || lower == "variant") return ConceptType::Mutation;
  if (lower == "cellline" || lower == "cell line") return ConceptType::CellLine;
  return std::nullopt;
}

ConceptType concept_type_from_index(int index) {
  if (index < 0 || index >= kNumConceptTypes)
    throw std::out_of_range("concept_type_from_index: " + std::to_string(index));
  return static_cast<ConceptType>(index);
}

}  // namespace bd
