#include "bd/tokenize.hpp"

#include <cctype>

namespace bd {

namespace {

bool is_space(unsigned char c) { return c < 0x80 && std::isspace(c); }

// Letters, digits, and any byte of a multibyte UTF-8 sequence.
bool is_word_char(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

}  // namespace

std::vector<Token> tokenize_with_offsets(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    std::size_t chunk_end = i;
    while (chunk_end < n && !is_space(static_cast<unsigned char>(text[chunk_end]))) ++chunk_end;

    std::size_t s = i;
    std::size_t e = chunk_end;
    while (s < e && !is_word_char(static_cast<unsigned char>(text[s]))) ++s;
    while (e > s && !is_word_char(static_cast<unsigned char>(text[e - 1]))) --e;
    if (s < e) tokens.push_back({std::string(text.substr(s, e - s)), s, e});
    i = chunk_end;
  }
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize_with_offsets(text)) out.push_back(std::move(t.text));
  return out;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

std::string normalize_surface(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = true;  // leading whitespace trimmed
  for (char c : s) {
    if (is_space(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::vector<std::string> utf8_chars(std::string_view s) {
  std::vector<std::string> chars;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    if (i + len > s.size()) len = 1;  // truncated sequence, treat byte-wise
    chars.emplace_back(s.substr(i, len));
    i += len;
  }
  return chars;
}

}  // namespace bd
