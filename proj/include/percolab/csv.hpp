#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace percolab {

// Comma-separated output with '#' comment headers; numeric cells carry 12
// significant digits so reruns diff clean.
class CsvWriter {
 public:
  void comment(const std::string& line) {
    out_ << "# " << line << "\n";
  }

  void header(const std::vector<std::string>& cols) {
    write_row(cols);
  }

  void row(const std::vector<std::string>& cells) { write_row(cells); }

  static std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
  }

  static std::string num(long long v) { return std::to_string(v); }
  static std::string num(unsigned long long v) { return std::to_string(v); }
  static std::string num(long v) { return std::to_string(v); }
  static std::string num(unsigned long v) { return std::to_string(v); }
  static std::string num(int v) { return std::to_string(v); }
  static std::string num(unsigned v) { return std::to_string(v); }

  std::string str() const { return out_.str(); }

 private:
  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << "\n";
  }

  std::ostringstream out_;
};

}  // namespace percolab
