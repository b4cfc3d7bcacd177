#pragma once

#include <concepts>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace spikedeconv {

// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

template <std::integral T>
std::string format_number(T v) {
  return std::to_string(v);
}

inline std::string format_number(const std::string& s) { return s; }
inline std::string format_number(std::string_view s) { return std::string(s); }
inline std::string format_number(const char* s) { return s; }

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);

  template <class... Ts>
  void row(const Ts&... values) {
    write_fields({format_number(values)...});
  }

  void write_fields(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
  std::size_t columns_;
};

}  // namespace spikedeconv
