#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dmabeam {

/// %.{significant}g with deterministic output; rejects NaN/Inf.
std::string format_double(double value, int significant);

inline constexpr int kJsonDigits = 17;  // archival artifacts round-trip exactly
inline constexpr int kCsvDigits = 9;    // plotting artifacts

/// Streaming JSON writer with fixed 17-significant-digit floats, sorted-by-
/// construction keys, and 2-space indentation. Output is byte-deterministic
/// for a given call sequence.
class JsonWriter {
 public:
  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(std::string_view name);
  void value(double v);
  void value(int v);
  void value(std::int64_t v);
  void value(std::uint64_t v);
  void value(bool v);
  void value(std::string_view v);
  void value(const char* v) { value(std::string_view(v)); }
  void value_raw(std::string_view text);  // pre-formatted literal

  /// Finished document text (with trailing newline).
  std::string take();

 private:
  void before_value();
  void newline_indent();

  std::string out_;
  std::vector<char> stack_;       // 'o' | 'a'
  std::vector<bool> has_items_;
  bool pending_key_ = false;
};

std::string json_escape(std::string_view text);

/// CSV with '#'-prefixed metadata comments, one header row, LF endings,
/// no trailing commas. Doubles carry 9 significant digits.
class CsvWriter {
 public:
  void comment(std::string_view text);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& fields);
  const std::string& text() const { return out_; }

 private:
  std::string out_;
};

std::string csv_field(double value);
inline std::string csv_field(const std::string& value) { return value; }

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace dmabeam
