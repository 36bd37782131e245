#include "zeroless/gf2_cache.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "zeroless/error.hpp"

namespace zeroless {

namespace {

constexpr char kMagic[4] = {'G', 'F', '2', 'B'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw ConfigError("basis cache truncated");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    auto s = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | s[i];
    return v;
  }
  std::uint64_t u64() {
    auto s = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | s[i];
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_basis_cache(const Gf2Matrix& m) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(kBasisCacheVersion);
  put_u32(out, static_cast<std::uint32_t>(m.row_count()));
  put_u32(out, static_cast<std::uint32_t>(m.col_count()));
  for (const auto& row : m.rows())
    for (auto w : row.words()) put_u64(out, w);
  for (const auto& label : m.col_basis()->labels()) {
    put_u32(out, static_cast<std::uint32_t>(label.size()));
    out.insert(out.end(), label.begin(), label.end());
  }
  return out;
}

Gf2Matrix decode_basis_cache(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  auto magic = in.take(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) throw ConfigError("not a basis cache (bad magic)");
  if (auto v = in.u8(); v != kBasisCacheVersion)
    throw ConfigError("unsupported basis cache version " + std::to_string(v));
  auto rows = in.u32();
  auto cols = in.u32();
  const std::size_t words = (cols + 63) / 64;
  std::vector<std::vector<std::uint64_t>> packed(rows, std::vector<std::uint64_t>(words));
  for (auto& row : packed)
    for (auto& w : row) w = in.u64();
  std::vector<std::string> labels;
  labels.reserve(cols);
  for (std::uint32_t c = 0; c < cols; ++c) {
    auto len = in.u32();
    auto s = in.take(len);
    labels.emplace_back(s.begin(), s.end());
  }
  if (!in.done()) throw ConfigError("trailing bytes after basis cache label table");
  auto basis = make_basis(std::move(labels));
  std::vector<Gf2Vector> vecs;
  vecs.reserve(rows);
  for (auto& row : packed) vecs.push_back(Gf2Vector::from_words(basis, std::move(row)));
  return Gf2Matrix(basis, std::move(vecs));
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw InternalError("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

}  // namespace zeroless
