#include "cli/output.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

#include "polariton/error.hpp"

namespace polariton::cli {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_row(std::string& text, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) text += ',';
    text += quote(cells[i]);
  }
  text += "\r\n";
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  append_row(text_, header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::logic_error(fmt::format("CSV row has {} cells, header has {}", cells.size(), columns_));
  append_row(text_, cells);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError(fmt::format("write to '{}' failed", path.string()));
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

std::string encode_pgm(std::size_t width, std::size_t height,
                       const std::vector<unsigned char>& pixels) {
  std::string out = fmt::format("P5\n{} {}\n255\n", width, height);
  out.append(pixels.begin(), pixels.end());
  return out;
}

}  // namespace polariton::cli
