#include "polariton/field_io.hpp"

#include <fmt/format.h>

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace polariton {

FieldFormatError::FieldFormatError(std::size_t offset, const std::string& message,
                                   const std::string& path)
    : ConfigError(fmt::format("{}byte {}: {}", path.empty() ? "field file, " : path + ", ",
                              offset, message)),
      offset_(offset),
      detail_(message) {}

namespace {

constexpr std::size_t kHeaderBytes = 80;

template <class T>
void put_le(std::string& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits;
  std::memcpy(&bits, &value, sizeof(T));
  for (std::size_t b = 0; b < sizeof(T); ++b)
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

template <class T>
T get_le(const std::string& in, std::size_t offset) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b)
    bits |= static_cast<U>(static_cast<unsigned char>(in[offset + b])) << (8 * b);
  T value;
  std::memcpy(&value, &bits, sizeof(T));
  return value;
}

GridGeometry checked_geometry(const GridGeometry& g, std::size_t offset) {
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw FieldFormatError(offset, e.what());
  }
  return g;
}

ScalarField3D decode_binary(const std::string& in) {
  if (in.size() < kHeaderBytes)
    throw FieldFormatError(in.size(), fmt::format("truncated header ({} of {} bytes)",
                                                  in.size(), kHeaderBytes));
  const auto version = get_le<std::uint32_t>(in, 4);
  if (version != kFieldFormatVersion)
    throw FieldFormatError(4, fmt::format("unsupported version {}", version));
  GridGeometry g;
  for (int a = 0; a < 3; ++a) {
    const auto n = get_le<std::uint64_t>(in, 8 + 8 * a);
    if (n > (std::uint64_t{1} << 31))
      throw FieldFormatError(8 + 8 * a, fmt::format("implausible dimension {}", n));
    g.dims[a] = static_cast<std::size_t>(n);
    g.spacing[a] = get_le<double>(in, 32 + 8 * a);
    g.origin[a] = get_le<double>(in, 56 + 8 * a);
  }
  checked_geometry(g, 8);
  const std::size_t expected = kHeaderBytes + 8 * g.size();
  if (in.size() != expected)
    throw FieldFormatError(std::min(in.size(), expected),
                           fmt::format("payload size mismatch: file has {} bytes, header "
                                       "implies {}",
                                       in.size(), expected));
  std::vector<double> values(g.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t offset = kHeaderBytes + 8 * i;
    values[i] = get_le<double>(in, offset);
    if (!std::isfinite(values[i]))
      throw FieldFormatError(offset, "non-finite value");
  }
  return ScalarField3D(g, std::move(values));
}

// Whitespace tokenizer that remembers byte offsets and skips '#' lines.
class Tokens {
 public:
  explicit Tokens(const std::string& s) : s_(s) {}

  bool next(std::string& token, std::size_t& offset) {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    if (pos_ >= s_.size()) return false;
    offset = pos_;
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    token = s_.substr(start, pos_ - start);
    return true;
  }

  std::size_t position() const { return pos_; }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

double parse_number(Tokens& tokens, const char* what) {
  std::string tok;
  std::size_t offset = 0;
  if (!tokens.next(tok, offset))
    throw FieldFormatError(tokens.position(), fmt::format("unexpected end of file, expected {}", what));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || !std::isfinite(v))
    throw FieldFormatError(offset, fmt::format("expected {} but found '{}'", what, tok));
  return v;
}

void expect_keyword(Tokens& tokens, const std::string& keyword) {
  std::string tok;
  std::size_t offset = 0;
  if (!tokens.next(tok, offset))
    throw FieldFormatError(tokens.position(), fmt::format("expected '{}'", keyword));
  if (tok != keyword)
    throw FieldFormatError(offset, fmt::format("expected '{}' but found '{}'", keyword, tok));
}

ScalarField3D decode_text(const std::string& in) {
  Tokens tokens(in);
  expect_keyword(tokens, "polariton-field-text");
  {
    std::size_t offset = tokens.position();
    const double version = parse_number(tokens, "format version");
    if (version != kFieldFormatVersion)
      throw FieldFormatError(offset, fmt::format("unsupported version {}", version));
  }
  GridGeometry g;
  const std::size_t header_offset = tokens.position();
  expect_keyword(tokens, "dims");
  for (int a = 0; a < 3; ++a) {
    const std::size_t offset = tokens.position();
    const double n = parse_number(tokens, "grid dimension");
    if (!(n >= 0.0) || n != std::floor(n) || n > 2147483648.0)
      throw FieldFormatError(offset, "grid dimension must be a non-negative integer");
    g.dims[a] = static_cast<std::size_t>(n);
  }
  expect_keyword(tokens, "spacing");
  for (int a = 0; a < 3; ++a) g.spacing[a] = parse_number(tokens, "grid spacing");
  expect_keyword(tokens, "origin");
  for (int a = 0; a < 3; ++a) g.origin[a] = parse_number(tokens, "grid origin");
  checked_geometry(g, header_offset);
  std::vector<double> values(g.size());
  for (auto& v : values) v = parse_number(tokens, "field value");
  std::string extra;
  std::size_t offset = 0;
  if (tokens.next(extra, offset))
    throw FieldFormatError(offset, fmt::format("{} values expected, found more", values.size()));
  return ScalarField3D(g, std::move(values));
}

}  // namespace

std::string encode_field_binary(const ScalarField3D& field) {
  const auto& g = field.geometry();
  std::string out(kFieldMagic, kFieldMagic + 4);
  out.reserve(kHeaderBytes + 8 * g.size());
  put_le<std::uint32_t>(out, kFieldFormatVersion);
  for (int a = 0; a < 3; ++a) put_le<std::uint64_t>(out, g.dims[a]);
  for (int a = 0; a < 3; ++a) put_le<double>(out, g.spacing[a]);
  for (int a = 0; a < 3; ++a) put_le<double>(out, g.origin[a]);
  for (double v : field.values()) put_le<double>(out, v);
  return out;
}

std::string encode_field_text(const ScalarField3D& field) {
  const auto& g = field.geometry();
  std::string out = fmt::format("polariton-field-text {}\n", kFieldFormatVersion);
  out += fmt::format("dims {} {} {}\n", g.dims[0], g.dims[1], g.dims[2]);
  out += fmt::format("spacing {:.17g} {:.17g} {:.17g}\n", g.spacing[0], g.spacing[1], g.spacing[2]);
  out += fmt::format("origin {:.17g} {:.17g} {:.17g}\n", g.origin[0], g.origin[1], g.origin[2]);
  std::size_t i = 0;
  for (double v : field.values()) {
    out += fmt::format("{:.17g}", v);
    out += (++i % g.dims[0] == 0) ? '\n' : ' ';
  }
  return out;
}

ScalarField3D decode_field(const std::string& bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kFieldMagic, 4) == 0)
    return decode_binary(bytes);
  return decode_text(bytes);
}

void write_field(const std::string& path, const ScalarField3D& field, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot open '{}' for writing", path));
  const auto bytes = binary ? encode_field_binary(field) : encode_field_text(field);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError(fmt::format("failed writing '{}'", path));
}

ScalarField3D read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open field file '{}'", path));
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_field(bytes);
  } catch (const FieldFormatError& e) {
    throw FieldFormatError(e.offset(), e.detail(), path);
  }
}

}  // namespace polariton
