#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace chainopt {

// RFC-4180 body with '#'-prefixed comment lines on top. Numeric formatting is
// fixed so identical configs produce byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& line) { out_ << "# " << line << "\n"; }

  void header(const std::vector<std::string>& cols) { row_strings(cols); }

  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << escape(cells[i]);
    }
    out_ << "\n";
  }

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
  }

  static std::string num(std::uint64_t v) { return std::to_string(v); }
  static std::string num(int v) { return std::to_string(v); }

 private:
  static std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += "\"\"";
      else q += c;
    }
    q += "\"";
    return q;
  }

  std::ostream& out_;
};

}  // namespace chainopt
