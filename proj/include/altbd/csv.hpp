#pragma once

// Locale-independent CSV output: '#' metadata lines, one header line, and
// doubles at 17 significant digits so they round-trip.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "altbd/errors.hpp"

namespace altbd::csv {

inline std::string format(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string format(std::int64_t v) { return std::to_string(v); }
inline std::string format(std::uint64_t v) { return std::to_string(v); }
inline std::string format(int v) { return std::to_string(v); }
inline std::string format(std::string_view v) { return std::string(v); }
inline std::string format(const char* v) { return std::string(v); }

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <class T>
  Writer& meta(std::string_view key, const T& value) {
    out_ << "# " << key << '=' << format(value) << '\n';
    return *this;
  }

  Writer& header(const std::vector<std::string>& names) {
    columns_ = names.size();
    for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
    out_ << '\n';
    return *this;
  }

  template <class... Ts>
  Writer& row(const Ts&... cells) {
    static_assert(sizeof...(Ts) > 0);
    if (columns_ != 0 && sizeof...(Ts) != columns_) throw DomainError("csv: row width mismatch");
    bool first = true;
    ((out_ << (first ? "" : ",") << format(cells), first = false), ...);
    out_ << '\n';
    return *this;
  }

 private:
  std::ostream& out_;
  std::size_t columns_ = 0;
};

}  // namespace altbd::csv
