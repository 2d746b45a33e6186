#include "dmabeam/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dmabeam/errors.hpp"

namespace dmabeam {

std::string format_double(double value, int significant) {
  if (!std::isfinite(value)) throw Error("cannot serialize non-finite number");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, value);
  return buf;
}

std::string json_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void JsonWriter::newline_indent() {
  out_ += '\n';
  out_.append(2 * stack_.size(), ' ');
}

void JsonWriter::before_value() {
  if (stack_.empty()) return;
  if (stack_.back() == 'a') {
    if (has_items_.back()) out_ += ',';
    newline_indent();
  }
  has_items_.back() = true;
}

void JsonWriter::begin_object() {
  if (!pending_key_) before_value();
  pending_key_ = false;
  out_ += '{';
  stack_.push_back('o');
  has_items_.push_back(false);
}

void JsonWriter::end_object() {
  const bool had_items = has_items_.back();
  stack_.pop_back();
  has_items_.pop_back();
  if (had_items) newline_indent();
  out_ += '}';
}

void JsonWriter::begin_array() {
  if (!pending_key_) before_value();
  pending_key_ = false;
  out_ += '[';
  stack_.push_back('a');
  has_items_.push_back(false);
}

void JsonWriter::end_array() {
  const bool had_items = has_items_.back();
  stack_.pop_back();
  has_items_.pop_back();
  if (had_items) newline_indent();
  out_ += ']';
}

void JsonWriter::key(std::string_view name) {
  if (has_items_.back()) out_ += ',';
  has_items_.back() = true;
  newline_indent();
  out_ += '"';
  out_ += json_escape(name);
  out_ += "\": ";
  pending_key_ = true;
}

void JsonWriter::value_raw(std::string_view text) {
  if (!pending_key_) before_value();
  pending_key_ = false;
  out_ += text;
}

void JsonWriter::value(double v) { value_raw(format_double(v, kJsonDigits)); }
void JsonWriter::value(int v) { value_raw(std::to_string(v)); }
void JsonWriter::value(std::int64_t v) { value_raw(std::to_string(v)); }
void JsonWriter::value(std::uint64_t v) { value_raw(std::to_string(v)); }
void JsonWriter::value(bool v) { value_raw(v ? "true" : "false"); }

void JsonWriter::value(std::string_view v) {
  std::string quoted = "\"";
  quoted += json_escape(v);
  quoted += '"';
  value_raw(quoted);
}

std::string JsonWriter::take() {
  out_ += '\n';
  return std::move(out_);
}

void CsvWriter::comment(std::string_view text) {
  out_ += "# ";
  out_ += text;
  out_ += '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ += ',';
    out_ += fields[i];
  }
  out_ += '\n';
}

std::string csv_field(double value) { return format_double(value, kCsvDigits); }

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open for writing: " + path);
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!file) throw Error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open: " + path);
  std::string content((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  return content;
}

}  // namespace dmabeam
