#include "exprbm/serialize.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string_view>
#include <vector>

#include "exprbm/errors.hpp"

namespace exprbm {

namespace {

constexpr std::string_view kModelMagic = "EXPRBM01";
constexpr std::string_view kSampleMagic = "EXPSMP01";

// Bytes accumulate in a buffer so the checksum covers exactly what is
// written; one fwrite at the end keeps partial files from looking valid.
struct ByteSink {
  std::vector<unsigned char> bytes;

  void raw(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    bytes.insert(bytes.end(), c, c + n);
  }
  void u8(std::uint8_t v) { raw(&v, 1); }
  void u32(std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    raw(b, 4);
  }
  void f64(double v) {
    std::uint64_t u;
    static_assert(sizeof(u) == sizeof(v));
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
      b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    raw(b, 8);
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }

  void finish(const std::string& path) {
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
    u32(crc);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
      throw IoError("short write to '" + path + "'");
  }
};

struct ByteSource {
  std::vector<unsigned char> bytes;
  std::size_t pos = 0;
  std::string path;

  explicit ByteSource(const std::string& p) : path(p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
      throw IoError("cannot open '" + p + "' for reading");
    bytes.assign(std::istreambuf_iterator<char>(in),
                 std::istreambuf_iterator<char>());
  }

  void need(std::size_t n) const {
    if (pos + n > bytes.size())
      throw IoError("'" + path + "' is truncated");
  }
  void raw(void* p, std::size_t n) {
    need(n);
    std::memcpy(p, bytes.data() + pos, n);
    pos += n;
  }
  std::uint8_t u8() {
    std::uint8_t v;
    raw(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i)
      u |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
    pos += 8;
    double v;
    std::memcpy(&v, &u, 8);
    return v;
  }
  std::string str() {
    std::uint32_t n = u32();
    if (n > 4096)
      throw IoError("'" + path + "' has an implausible string length");
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes.data() + pos), n);
    pos += n;
    return s;
  }

  // Validates the trailing checksum against everything before it.
  void check_magic_and_crc(std::string_view magic) {
    if (bytes.size() < magic.size() + 4)
      throw IoError("'" + path + "' is truncated");
    if (std::memcmp(bytes.data(), magic.data(), magic.size()) != 0)
      throw IoError("'" + path + "' has the wrong magic (expected '" +
                    std::string(magic) + "')");
    std::size_t body = bytes.size() - 4;
    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i)
      stored |= static_cast<std::uint32_t>(bytes[body + i]) << (8 * i);
    std::uint32_t actual = static_cast<std::uint32_t>(
        crc32(0L, bytes.data(), static_cast<uInt>(body)));
    if (stored != actual)
      throw IoError("'" + path + "' failed its checksum (corrupt file)");
    pos = magic.size();
  }

  void expect_end() const {
    if (pos + 4 != bytes.size())
      throw IoError("'" + path + "' has trailing bytes");
  }
};

SamplerMode decode_mode(std::uint8_t v, const std::string& path) {
  switch (v) {
    case 0: return SamplerMode::GaussianApprox;
    case 1: return SamplerMode::ExactWhenAvailable;
    default:
      throw IoError("'" + path + "' has unknown sampler mode " +
                    std::to_string(v));
  }
}

}  // namespace

void save_model(const ExpRbmModel& m, const std::string& path) {
  if (!m.visible || !m.hidden)
    throw DomainError("cannot save a model without unit types");
  ByteSink sink;
  sink.raw(kModelMagic.data(), kModelMagic.size());
  sink.u32(static_cast<std::uint32_t>(m.n_visible()));
  sink.u32(static_cast<std::uint32_t>(m.n_hidden()));
  sink.str(m.visible->name);
  sink.str(m.hidden->name);
  sink.u8(static_cast<std::uint8_t>(m.visible_mode));
  sink.u8(static_cast<std::uint8_t>(m.hidden_mode));
  for (std::size_t i = 0; i < m.W.size(); ++i) sink.f64(m.W.data()[i]);
  for (double v : m.b_visible) sink.f64(v);
  for (double v : m.b_hidden) sink.f64(v);
  sink.finish(path);
}

ExpRbmModel load_model(const std::string& path) {
  ByteSource src(path);
  src.check_magic_and_crc(kModelMagic);
  std::uint32_t n_visible = src.u32();
  std::uint32_t n_hidden = src.u32();
  if (n_visible == 0 || n_hidden == 0)
    throw IoError("'" + path + "' declares an empty layer");
  std::string visible_name = src.str();
  std::string hidden_name = src.str();
  auto lookup = [&path](const std::string& name) -> const ActivationSpec& {
    for (const ActivationSpec& spec : catalog())
      if (spec.name == name) return spec;
    throw IoError("'" + path + "' names unknown unit '" + name + "'");
  };
  const ActivationSpec& visible = lookup(visible_name);
  const ActivationSpec& hidden = lookup(hidden_name);
  ExpRbmModel m = make_model(visible, hidden, n_visible, n_hidden);
  m.visible_mode = decode_mode(src.u8(), path);
  m.hidden_mode = decode_mode(src.u8(), path);
  for (std::size_t i = 0; i < m.W.size(); ++i) m.W.data()[i] = src.f64();
  for (double& v : m.b_visible) v = src.f64();
  for (double& v : m.b_hidden) v = src.f64();
  src.expect_end();
  return m;
}

void save_samples(const Matrix& samples, const std::string& path) {
  if (samples.rows() > std::numeric_limits<std::uint32_t>::max() ||
      samples.cols() > std::numeric_limits<std::uint32_t>::max())
    throw DomainError("sample matrix too large for container");
  ByteSink sink;
  sink.raw(kSampleMagic.data(), kSampleMagic.size());
  sink.u32(static_cast<std::uint32_t>(samples.rows()));
  sink.u32(static_cast<std::uint32_t>(samples.cols()));
  for (std::size_t i = 0; i < samples.size(); ++i) sink.f64(samples.data()[i]);
  sink.finish(path);
}

Matrix load_samples(const std::string& path) {
  ByteSource src(path);
  src.check_magic_and_crc(kSampleMagic);
  std::uint32_t rows = src.u32();
  std::uint32_t cols = src.u32();
  // Guard the multiplication before allocating.
  std::uint64_t cells = static_cast<std::uint64_t>(rows) * cols;
  if (cells > (1ull << 31))
    throw IoError("'" + path + "' declares an implausible sample count");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = src.f64();
  src.expect_end();
  return m;
}

}  // namespace exprbm
