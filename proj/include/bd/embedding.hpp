#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bd/vocab.hpp"

namespace bd {

// A dense row per vocabulary index. Row 0 (PAD) is always the zero vector
// and receives no gradient.
struct EmbeddingTable {
  std::size_t dim = 200;
  bool trainable = true;
  std::vector<double> data;  // rows * dim, row-major

  std::size_t rows() const { return dim == 0 ? 0 : data.size() / dim; }
  const double* row(std::size_t i) const { return data.data() + i * dim; }
  double* row(std::size_t i) { return data.data() + i * dim; }
};

// Text embedding format: optional "N D" header, then "token v1 ... vD"
// lines. Vectors for in-vocab tokens are loaded; vocab tokens absent from
// the file get a deterministic hash-seeded vector with components uniform
// in [-0.25, 0.25]; PAD stays zero; UNK becomes the mean of the loaded
// vectors (hash-seeded if nothing loads). Throws ParseError on a dimension
// mismatch or malformed numbers, naming the line.
EmbeddingTable load_embeddings(std::istream& in, const Vocab& vocab, std::size_t dim = 200);

// All-synthetic table (no file): every non-PAD token hash-seeded as above.
EmbeddingTable synthesize_embeddings(const Vocab& vocab, std::size_t dim = 200);

// The deterministic out-of-vocabulary vector: splitmix64 stream seeded by
// fnv1a64(token), components uniform in [lo, hi].
void hash_seeded_vector(std::string_view token, double lo, double hi, double* out, std::size_t dim);

}  // namespace bd
