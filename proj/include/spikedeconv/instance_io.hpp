#pragma once

#include <cstdint>
#include <iosfwd>

#include "spikedeconv/signal_model.hpp"

namespace spikedeconv {

// Plain-text instance record:
//
//   # optional comment lines
//   n 32
//   r 6
//   seed 0
//   <Re a_1> <Im a_1> <tau_1>
//   ...                           (r lines)
//
// Numbers are written in shortest round-trip form, so a record read back is
// bit-identical to what was written.
struct InstanceRecord {
  int n = 0;
  std::uint64_t seed = 0;
  SpikeParams params;
};

void write_instance(std::ostream& os, const InstanceRecord& rec);

// Throws DomainError on malformed input.
InstanceRecord read_instance(std::istream& is);

}  // namespace spikedeconv
