#include "attnlab/lab/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "attnlab/core/error.hpp"

namespace attnlab::lab {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string quote_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw ParameterError("CsvWriter: header must not be empty");
  for (const std::string& h : header_) field(h);
  end_row();
}

void CsvWriter::append(const std::string& encoded) {
  if (in_row_ == header_.size()) {
    throw DimensionError("CsvWriter: row has more than " + std::to_string(header_.size()) + " fields");
  }
  if (in_row_ > 0) text_ += ',';
  text_ += encoded;
  ++in_row_;
}

CsvWriter& CsvWriter::field(std::string_view text) {
  append(quote_field(text));
  return *this;
}

CsvWriter& CsvWriter::field(double value) {
  append(format_number(value));
  return *this;
}

CsvWriter& CsvWriter::field(std::int64_t value) {
  append(std::to_string(value));
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != header_.size()) {
    throw DimensionError("CsvWriter: row has " + std::to_string(in_row_) + " fields, header has " +
                         std::to_string(header_.size()));
  }
  text_ += "\r\n";
  in_row_ = 0;
}

void CsvWriter::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text_;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace attnlab::lab
