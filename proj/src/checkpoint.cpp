#include "bd/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bd {

namespace {

constexpr char kMagic[8] = {'B', 'D', 'C', 'K', 'P', 'T', '0', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  write_u64(out, bits);
}

double read_f64(std::istream& in) {
  std::uint64_t bits = read_u64(in);
  double d;
  std::memcpy(&d, &bits, sizeof(d));
  return d;
}

void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  std::uint64_t len = read_u64(in);
  if (len > (1ULL << 32)) throw std::runtime_error("checkpoint: implausible string length");
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (!in) throw std::runtime_error("checkpoint: truncated string");
  return s;
}

}  // namespace

const nn::Tensor& Checkpoint::tensor(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return t;
  throw std::runtime_error("checkpoint: missing tensor \"" + name + "\"");
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");

  out.write(kMagic, sizeof(kMagic));
  write_string(out, ckpt.kind);
  write_string(out, ckpt.config.dump());
  write_u64(out, ckpt.word_vocab_hash);
  write_u64(out, ckpt.feature_vocab_hash);
  write_u64(out, ckpt.tensors.size());
  for (const auto& [name, tensor] : ckpt.tensors) {
    write_string(out, name);
    write_u64(out, tensor.shape.size());
    for (std::size_t d : tensor.shape) write_u64(out, d);
    for (double v : tensor.data) write_f64(out, v);
  }
  out.flush();
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);

  Checkpoint ckpt;
  ckpt.kind = read_string(in);
  const std::string config_str = read_string(in);
  ckpt.config = nlohmann::json::parse(config_str, nullptr, /*allow_exceptions=*/false);
  if (ckpt.config.is_discarded()) throw std::runtime_error("checkpoint: corrupt config blob");
  ckpt.word_vocab_hash = read_u64(in);
  ckpt.feature_vocab_hash = read_u64(in);

  const std::uint64_t count = read_u64(in);
  if (count > (1ULL << 20)) throw std::runtime_error("checkpoint: implausible tensor count");
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = read_string(in);
    const std::uint64_t rank = read_u64(in);
    if (rank > 8) throw std::runtime_error("checkpoint: implausible tensor rank");
    std::vector<std::size_t> shape(rank);
    std::size_t total = 1;
    for (auto& d : shape) {
      d = static_cast<std::size_t>(read_u64(in));
      total *= d;
    }
    if (total > (1ULL << 28)) throw std::runtime_error("checkpoint: implausible tensor size");
    nn::Tensor t(shape);
    for (std::size_t j = 0; j < total; ++j) t.data[j] = read_f64(in);
    ckpt.tensors.emplace_back(std::move(name), std::move(t));
  }
  return ckpt;
}

}  // namespace bd
