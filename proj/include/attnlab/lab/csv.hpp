#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace attnlab::lab {

/// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_number(double value);

/// RFC 4180 quoting: fields containing a comma, quote, CR or LF are quoted and quotes doubled.
std::string quote_field(std::string_view field);

/// In-memory CSV document with a fixed header. Lines end in CRLF.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(std::int64_t value);
  CsvWriter& field(int value) { return field(static_cast<std::int64_t>(value)); }
  /// Closes the current row; throws if its width differs from the header.
  void end_row();

  std::size_t columns() const { return header_.size(); }
  const std::string& str() const { return text_; }
  void save(const std::string& path) const;

 private:
  void append(const std::string& encoded);

  std::vector<std::string> header_;
  std::string text_;
  std::size_t in_row_ = 0;
};

}  // namespace attnlab::lab
