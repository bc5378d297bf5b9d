#include "bd/embedding.hpp"

#include <charconv>
#include <istream>
#include <sstream>
#include <string>

#include "bd/pubtator.hpp"
#include "bd/rng.hpp"

namespace bd {

void hash_seeded_vector(std::string_view token, double lo, double hi, double* out, std::size_t dim) {
  std::uint64_t state = fnv1a64(token);
  for (std::size_t i = 0; i < dim; ++i) {
    double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    out[i] = lo + (hi - lo) * u;
  }
}

namespace {

bool parse_double(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t e = i;
    while (e < line.size() && line[e] != ' ' && line[e] != '\t') ++e;
    fields.push_back(line.substr(i, e - i));
    i = e;
  }
  return fields;
}

}  // namespace

EmbeddingTable load_embeddings(std::istream& in, const Vocab& vocab, std::size_t dim) {
  EmbeddingTable table;
  table.dim = dim;
  table.data.assign(vocab.word_size() * dim, 0.0);

  std::vector<bool> loaded(vocab.word_size(), false);
  std::vector<double> mean(dim, 0.0);
  std::size_t n_loaded_rows = 0;

  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;

  auto fail = [&](const std::string& what) -> void {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_ws(line);

    if (first_content_line) {
      first_content_line = false;
      // Optional "N D" header.
      if (fields.size() == 2) {
        double n = 0, d = 0;
        if (parse_double(fields[0], n) && parse_double(fields[1], d)) {
          if (static_cast<std::size_t>(d) != dim)
            fail("embedding dimension " + std::string(fields[1]) + " does not match expected " +
                 std::to_string(dim));
          continue;
        }
      }
    }

    if (fields.size() != dim + 1)
      fail("expected token plus " + std::to_string(dim) + " values, got " +
           std::to_string(fields.size() == 0 ? 0 : fields.size() - 1));

    std::vector<double> vec(dim);
    for (std::size_t i = 0; i < dim; ++i)
      if (!parse_double(fields[i + 1], vec[i]))
        fail("malformed number \"" + std::string(fields[i + 1]) + "\"");

    for (std::size_t i = 0; i < dim; ++i) mean[i] += vec[i];
    ++n_loaded_rows;

    std::uint32_t id = vocab.word_id(fields[0]);
    if (id != Vocab::kPadId && id != Vocab::kUnkId && !loaded[id]) {
      loaded[id] = true;
      std::copy(vec.begin(), vec.end(), table.row(id));
    }
  }

  // Fill gaps deterministically; PAD stays zero.
  for (std::uint32_t id = 2; id < vocab.word_size(); ++id)
    if (!loaded[id])
      hash_seeded_vector(vocab.word_tokens()[id], -0.25, 0.25, table.row(id), dim);

  if (n_loaded_rows > 0) {
    for (std::size_t i = 0; i < dim; ++i)
      table.row(Vocab::kUnkId)[i] = mean[i] / static_cast<double>(n_loaded_rows);
  } else {
    hash_seeded_vector(Vocab::kUnkToken, -0.25, 0.25, table.row(Vocab::kUnkId), dim);
  }
  return table;
}

EmbeddingTable synthesize_embeddings(const Vocab& vocab, std::size_t dim) {
  std::istringstream empty;
  return load_embeddings(empty, vocab, dim);
}

}  // namespace bd
