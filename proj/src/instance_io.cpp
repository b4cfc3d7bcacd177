#include "spikedeconv/instance_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "spikedeconv/csv.hpp"
#include "spikedeconv/errors.hpp"

namespace spikedeconv {
namespace {

double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw DomainError("instance file: bad number '" + tok + "'");
  return v;
}

template <class T>
T parse_int(const std::string& tok) {
  T v{};
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw DomainError("instance file: bad integer '" + tok + "'");
  return v;
}

}  // namespace

void write_instance(std::ostream& os, const InstanceRecord& rec) {
  rec.params.validate();
  os << "# spike instance: Re(a) Im(a) tau per line\n";
  os << "n " << rec.n << "\nr " << rec.params.size() << "\nseed " << rec.seed << '\n';
  for (Eigen::Index j = 0; j < rec.params.size(); ++j)
    os << format_number(rec.params.amplitudes[j].real()) << ' ' << format_number(rec.params.amplitudes[j].imag())
       << ' ' << format_number(rec.params.locations[j]) << '\n';
}

InstanceRecord read_instance(std::istream& is) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string tok; ls >> tok;) toks.push_back(tok);
    if (!toks.empty()) lines.push_back(toks);
  }
  if (lines.size() < 3) throw DomainError("instance file: missing header");
  auto header = [&](std::size_t i, const char* key) {
    if (lines[i].size() != 2 || lines[i][0] != key)
      throw DomainError(std::string("instance file: expected '") + key + " <value>'");
    return lines[i][1];
  };
  InstanceRecord rec;
  rec.n = parse_int<int>(header(0, "n"));
  const int r = parse_int<int>(header(1, "r"));
  rec.seed = parse_int<std::uint64_t>(header(2, "seed"));
  if (r < 1 || lines.size() != 3 + static_cast<std::size_t>(r))
    throw DomainError("instance file: expected r spike lines");
  rec.params.amplitudes.resize(r);
  rec.params.locations.resize(r);
  for (int j = 0; j < r; ++j) {
    const auto& t = lines[3 + j];
    if (t.size() != 3) throw DomainError("instance file: spike lines need three numbers");
    rec.params.amplitudes[j] = cdouble(parse_double(t[0]), parse_double(t[1]));
    rec.params.locations[j] = parse_double(t[2]);
  }
  rec.params.validate();
  return rec;
}

}  // namespace spikedeconv
