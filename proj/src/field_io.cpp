#include "lyz/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "lyz/errors.hpp"

namespace lyz {

namespace {

static_assert(std::endian::native == std::endian::little, "field I/O assumes a little-endian host");

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(std::string_view bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw IoError("field file truncated");
  T v;
  std::memcpy(&v, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

std::string encode(std::uint8_t kind, const TorusGrid& g, std::span<const double> payload) {
  std::string out = "LYZF";
  put<std::uint16_t>(out, kFieldFormatVersion);
  put<std::uint8_t>(out, kind);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(g.n()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.N()));
  out.append(reinterpret_cast<const char*>(payload.data()), payload.size() * sizeof(double));
  return out;
}

}  // namespace

std::string encode_field(const ScalarField& f) { return encode(0, f.grid, f.values); }

std::string encode_field(const HermitianField& h) { return encode(1, h.grid(), h.raw()); }

AnyField decode_field(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "LYZF") throw IoError("not a field file (bad magic)");
  std::size_t pos = 4;
  const auto version = get<std::uint16_t>(bytes, pos);
  if (version != kFieldFormatVersion) throw IoError("unsupported field file version " + std::to_string(version));
  const auto kind = get<std::uint8_t>(bytes, pos);
  const auto n = get<std::uint8_t>(bytes, pos);
  const auto N = get<std::uint32_t>(bytes, pos);
  TorusGrid g;
  try {
    g = make_grid(n, static_cast<int>(N));
  } catch (const std::exception& e) {
    throw IoError(std::string("field file header: ") + e.what());
  }
  const std::size_t count = kind == 0 ? g.points() : g.points() * n * n;
  if (kind > 1) throw IoError("unknown field kind " + std::to_string(kind));
  if (bytes.size() - pos != count * sizeof(double)) throw IoError("field payload size does not match header");
  if (kind == 0) {
    ScalarField f(g);
    std::memcpy(f.values.data(), bytes.data() + pos, count * sizeof(double));
    return f;
  }
  HermitianField h(g);
  std::memcpy(h.raw().data(), bytes.data() + pos, count * sizeof(double));
  return h;
}

void atomic_write(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_field(const std::filesystem::path& path, const ScalarField& f) { atomic_write(path, encode_field(f)); }

void write_field(const std::filesystem::path& path, const HermitianField& h) { atomic_write(path, encode_field(h)); }

AnyField read_field(const std::filesystem::path& path) { return decode_field(read_file(path)); }

ScalarField read_scalar_field(const std::filesystem::path& path) {
  auto f = read_field(path);
  if (auto* s = std::get_if<ScalarField>(&f)) return std::move(*s);
  throw IoError(path.string() + ": expected a scalar field");
}

HermitianField read_hermitian_field(const std::filesystem::path& path) {
  auto f = read_field(path);
  if (auto* h = std::get_if<HermitianField>(&f)) return std::move(*h);
  throw IoError(path.string() + ": expected a hermitian field");
}

}  // namespace lyz
