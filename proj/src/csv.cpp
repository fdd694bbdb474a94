#include "sievebands/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace sievebands {

std::string format_double(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable::Row CsvTable::row() {
  if (!rows_.empty() && rows_.back().size() != header_.size())
    throw std::logic_error("CsvTable: previous row has the wrong number of fields");
  rows_.emplace_back();
  return Row(rows_.back());
}

CsvTable::Row& CsvTable::Row::add(std::string_view text) {
  cells_.push_back(csv_escape(text));
  return *this;
}

CsvTable::Row& CsvTable::Row::add(double value) {
  cells_.push_back(format_double(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::add(std::int64_t value) {
  cells_.push_back(std::to_string(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::add(bool value) {
  cells_.push_back(value ? "true" : "false");
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells, bool escape) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += escape ? csv_escape(cells[i]) : cells[i];
    }
    out += '\n';
  };
  line(header_, true);
  for (const auto& r : rows_) {
    if (r.size() != header_.size()) throw std::logic_error("CsvTable: row has the wrong number of fields");
    line(r, false);
  }
  return out;
}

}  // namespace sievebands
