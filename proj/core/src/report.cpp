#include "carleman/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace carleman {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void JsonWriter::comma() {
  if (pending_key_) return;
  if (!any_.empty()) {
    if (any_.back()) out_ << ",";
    any_.back() = true;
  }
  if (!any_.empty()) indent();
}

void JsonWriter::indent() {
  out_ << "\n";
  for (std::size_t i = 0; i < any_.size(); ++i) out_ << "  ";
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  pending_key_ = false;
  out_ << "{";
  any_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  const bool had = any_.back();
  any_.pop_back();
  if (had) {
    out_ << "\n";
    for (std::size_t i = 0; i < any_.size(); ++i) out_ << "  ";
  }
  out_ << "}";
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  comma();
  pending_key_ = false;
  out_ << "[";
  any_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  const bool had = any_.back();
  any_.pop_back();
  if (had) {
    out_ << "\n";
    for (std::size_t i = 0; i < any_.size(); ++i) out_ << "  ";
  }
  out_ << "]";
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  comma();
  out_ << "\"" << k << "\": ";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  comma();
  pending_key_ = false;
  if (std::isfinite(v))
    out_ << format_double(v);
  else
    out_ << "null";
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  comma();
  pending_key_ = false;
  out_ << v;
  return *this;
}

JsonWriter& JsonWriter::value(unsigned long long v) {
  comma();
  pending_key_ = false;
  out_ << v;
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  comma();
  pending_key_ = false;
  out_ << (v ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  comma();
  pending_key_ = false;
  out_ << "\"";
  for (char c : v) {
    switch (c) {
      case '"': out_ << "\\\""; break;
      case '\\': out_ << "\\\\"; break;
      case '\n': out_ << "\\n"; break;
      case '\t': out_ << "\\t"; break;
      default: out_ << c;
    }
  }
  out_ << "\"";
  return *this;
}

JsonWriter& JsonWriter::null() {
  comma();
  pending_key_ = false;
  out_ << "null";
  return *this;
}

JsonWriter& JsonWriter::raw(std::string_view json) {
  comma();
  pending_key_ = false;
  // Re-indent the fragment to the current depth.
  std::string pad(2 * any_.size(), ' ');
  for (std::size_t i = 0; i < json.size(); ++i) {
    out_ << json[i];
    if (json[i] == '\n') out_ << pad;
  }
  return *this;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : width_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ",";
    out_ << columns[i];
  }
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::invalid_argument("CsvWriter: column mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ",";
    out_ << format_double(values[i]);
  }
  out_ << "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);  // binary keeps LF endings
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace carleman
