#pragma once

// Field file formats, version 1.
//
// Binary (little-endian):
//   offset  0  char[4]  magic "PLFD"
//   offset  4  uint32   version (1)
//   offset  8  uint64   nx, ny, nz
//   offset 32  float64  dx, dy, dz   (meters)
//   offset 56  float64  ox, oy, oz   (meters)
//   offset 80  float64  values, nx*ny*nz, x fastest
//
// Text:
//   polariton-field-text 1
//   dims nx ny nz
//   spacing dx dy dz
//   origin ox oy oz
//   v0 v1 v2 ...          (whitespace separated, x fastest)
// Lines starting with '#' are ignored.

#include <cstddef>
#include <string>

#include "polariton/error.hpp"
#include "polariton/kerr.hpp"

namespace polariton {

class FieldFormatError : public ConfigError {
 public:
  FieldFormatError(std::size_t offset, const std::string& message,
                   const std::string& path = "");
  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

inline constexpr char kFieldMagic[4] = {'P', 'L', 'F', 'D'};
inline constexpr unsigned kFieldFormatVersion = 1;

std::string encode_field_binary(const ScalarField3D& field);
std::string encode_field_text(const ScalarField3D& field);
ScalarField3D decode_field(const std::string& bytes);  // either format

void write_field(const std::string& path, const ScalarField3D& field, bool binary = true);
ScalarField3D read_field(const std::string& path);

}  // namespace polariton
