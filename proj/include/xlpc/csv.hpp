#pragma once

#include <charconv>
#include <concepts>
#include <ostream>
#include <string>
#include <string_view>

namespace xlpc {

/// Minimal RFC 4180 writer: CRLF row endings, fields quoted only when they
/// contain a separator, quote or line break. Doubles use the shortest text
/// that round-trips.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(std::string_view s) {
    sep();
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
      out_ << s;
      return *this;
    }
    out_ << '"';
    for (char ch : s) {
      if (ch == '"') out_ << '"';
      out_ << ch;
    }
    out_ << '"';
    return *this;
  }
  CsvWriter& field(const char* s) { return field(std::string_view(s)); }
  CsvWriter& field(const std::string& s) { return field(std::string_view(s)); }

  CsvWriter& field(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return field(std::string_view(buf, static_cast<std::size_t>(end - buf)));
  }

  CsvWriter& field(bool x) { return field(std::string_view(x ? "1" : "0")); }

  template <std::integral T>
    requires(!std::same_as<T, bool>)
  CsvWriter& field(T x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return field(std::string_view(buf, static_cast<std::size_t>(end - buf)));
  }

  template <typename... Ts>
  CsvWriter& row(const Ts&... xs) {
    (field(xs), ...);
    return end_row();
  }

  CsvWriter& end_row() {
    out_ << "\r\n";
    first_ = true;
    return *this;
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }

  std::ostream& out_;
  bool first_ = true;
};

}  // namespace xlpc
