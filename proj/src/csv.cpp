#include "spikedeconv/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace spikedeconv {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header)
    : os_(os), columns_(header.size()) {
  write_fields(header);
}

void CsvWriter::write_fields(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw std::logic_error("csv: wrong number of fields");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os_ << ',';
    os_ << fields[i];
  }
  os_ << '\n';
}

}  // namespace spikedeconv
