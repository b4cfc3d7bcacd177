#pragma once

namespace spikedeconv {
inline constexpr const char* kVersion = "0.1.0";
}
