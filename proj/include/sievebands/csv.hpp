#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sievebands {

/// 17 significant digits, '.' decimal point, independent of the C locale.
std::string format_double(double value);

/// In-memory RFC 4180 table with LF line endings. Fields containing a comma,
/// quote or newline are quoted, with embedded quotes doubled.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  class Row {
   public:
    Row& add(std::string_view text);
    Row& add(const char* text) { return add(std::string_view(text)); }
    Row& add(double value);
    Row& add(std::int64_t value);
    Row& add(int value) { return add(static_cast<std::int64_t>(value)); }
    Row& add(bool value);

   private:
    friend class CsvTable;
    explicit Row(std::vector<std::string>& cells) : cells_(cells) {}
    std::vector<std::string>& cells_;
  };

  /// Appends an empty row; fill it through the returned handle before
  /// starting the next one.
  Row row();

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(std::string_view field);

}  // namespace sievebands
