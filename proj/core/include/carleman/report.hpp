#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace carleman {

// %.17g rendering used by every machine-readable artifact.
std::string format_double(double v);

// Minimal ordered JSON emitter: insertion order is preserved, doubles are
// written with 17 significant digits, and non-finite values become null, so
// identical runs produce byte-identical documents.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double v);
  JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(long long v);
  JsonWriter& value(unsigned long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& null();
  // Injects pre-rendered JSON as a value (fragment embedding).
  JsonWriter& raw(std::string_view json);

  // key/value in one call
  template <typename T>
  JsonWriter& kv(std::string_view k, T v) {
    key(k);
    return value(v);
  }

  std::string str() const { return out_.str(); }

 private:
  void comma();
  void indent();
  std::ostringstream out_;
  std::vector<bool> any_;  // whether the open container already has an entry
  bool pending_key_ = false;
};

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  std::size_t width_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace carleman
