#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsac {

// Shortest round-trip formatting; identical input bits give identical text,
// which is what the byte-level determinism contract rests on.
inline std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline std::string fmt(long x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }
inline std::string fmt(bool x) { return x ? "1" : "0"; }

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path);
    for (size_t i = 0; i < columns.size(); ++i) {
      if (i) out_ << ',';
      out_ << columns[i];
    }
    out_ << '\n';
    ncols_ = columns.size();
  }

  template <typename... Ts>
  void row(Ts... vals) {
    if (sizeof...(vals) != ncols_) throw std::logic_error("CsvWriter: column count mismatch");
    size_t i = 0;
    ((out_ << fmt(vals) << (++i == ncols_ ? '\n' : ',')), ...);
  }

  void row_values(const std::vector<double>& vals) {
    if (vals.size() != ncols_) throw std::logic_error("CsvWriter: column count mismatch");
    for (size_t i = 0; i < vals.size(); ++i) {
      if (i) out_ << ',';
      out_ << fmt(vals[i]);
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
  size_t ncols_;
};

}  // namespace nsac
