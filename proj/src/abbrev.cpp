#include "bd/abbrev.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace bd {

namespace {

bool is_alnum(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u);
}

bool has_letter(std::string_view s) {
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0x80 || std::isalpha(u)) return true;
  }
  return false;
}

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Right-to-left character matching; returns the suffix of `candidate`
// starting at the word where the first short-form character matched.
std::optional<std::string> find_best_long_form(std::string_view sf, std::string_view candidate) {
  int l = static_cast<int>(candidate.size()) - 1;
  for (int s = static_cast<int>(sf.size()) - 1; s >= 0; --s) {
    char c = lower(sf[static_cast<std::size_t>(s)]);
    if (!is_alnum(sf[static_cast<std::size_t>(s)])) continue;
    while (
        (l >= 0 && lower(candidate[static_cast<std::size_t>(l)]) != c) ||
        (s == 0 && l > 0 && is_alnum(candidate[static_cast<std::size_t>(l - 1)]))) {
      --l;
      if (l < 0) break;
    }
    if (l < 0) return std::nullopt;
    --l;
  }
  // l now sits just before the first matched character; back up to the
  // start of that word.
  std::size_t begin = 0;
  if (l >= 0) {
    auto space = candidate.rfind(' ', static_cast<std::size_t>(l));
    begin = (space == std::string_view::npos) ? 0 : space + 1;
  }
  return std::string(candidate.substr(begin));
}

// Up to min(|sf| + 5, |sf| * 2) whitespace-delimited words immediately
// before the '(' make up the long-form search window.
std::string_view long_form_candidate(std::string_view text, std::size_t paren, std::size_t sf_len) {
  std::size_t end = paren;
  while (end > 0 && text[end - 1] == ' ') --end;
  if (end == 0) return {};

  const std::size_t max_words = std::min(sf_len + 5, sf_len * 2);
  std::size_t words = 0;
  std::size_t begin = end;
  while (begin > 0 && words < max_words) {
    std::size_t word_end = begin;
    while (word_end > 0 && text[word_end - 1] == ' ') --word_end;
    if (word_end == 0) break;
    std::size_t word_begin = word_end;
    while (word_begin > 0 && text[word_begin - 1] != ' ') --word_begin;
    begin = word_begin;
    ++words;
  }
  return text.substr(begin, end - begin);
}

}  // namespace

std::vector<AbbrevDefinition> detect_abbreviations(const Document& doc) {
  std::vector<AbbrevDefinition> defs;
  const std::string& text = doc.full_text;

  std::size_t pos = 0;
  while ((pos = text.find('(', pos)) != std::string::npos) {
    std::size_t close = text.find_first_of("()", pos + 1);
    if (close == std::string::npos) break;
    if (text[close] == '(') {  // nested open, restart from it
      pos = close;
      continue;
    }

    std::string_view sf = std::string_view(text).substr(pos + 1, close - pos - 1);
    while (!sf.empty() && sf.front() == ' ') sf.remove_prefix(1);
    while (!sf.empty() && sf.back() == ' ') sf.remove_suffix(1);

    if (!sf.empty() && sf.size() <= 10 && has_letter(sf)) {
      std::string_view candidate = long_form_candidate(text, pos, sf.size());
      if (!candidate.empty()) {
        auto lf = find_best_long_form(sf, candidate);
        if (lf && sf.size() < lf->size())
          defs.push_back({std::string(sf), std::move(*lf), doc.pmid});
      }
    }
    pos = close + 1;
  }
  return defs;
}

}  // namespace bd
