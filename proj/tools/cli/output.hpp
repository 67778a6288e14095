#pragma once

// Deterministic file output: CSV (RFC 4180 quoting), JSON metadata, PGM.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace polariton::cli {

// Shortest representation that round-trips; "inf", "-inf", "nan" otherwise.
std::string number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// 8-bit binary PGM; values are row-major, top row first, already in [0, 255].
std::string encode_pgm(std::size_t width, std::size_t height,
                       const std::vector<unsigned char>& pixels);

}  // namespace polariton::cli
