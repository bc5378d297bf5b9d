#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bd {

// A token with its byte offsets in the original text (offsets of the
// stripped token, not the whitespace-delimited chunk it came from).
struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

// Split on whitespace, then strip leading/trailing characters that are not
// letters or digits; tokens that strip to nothing are dropped. Internal
// punctuation (hyphens, slashes, ...) is kept and case is preserved.
// Bytes >= 0x80 are treated as letters so UTF-8 sequences survive intact.
std::vector<Token> tokenize_with_offsets(std::string_view text);

std::vector<std::string> tokenize(std::string_view text);

std::string to_lower_ascii(std::string_view s);

// Lowercased, whitespace runs collapsed to one space, trimmed. Used as the
// grouping key for independent splits.
std::string normalize_surface(std::string_view s);

// Splits a UTF-8 string into one std::string per code point.
std::vector<std::string> utf8_chars(std::string_view s);

}  // namespace bd
