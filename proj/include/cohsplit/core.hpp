#pragma once

#include <cstdint>
#include <string>
#include <utility>

namespace cohsplit {

using Nat = std::uint64_t;

// A value of Z_2. Always 0 or 1.
using Bit = std::uint8_t;

using UltrafilterId = std::string;
using GeneratorId = std::string;

// (ultrafilter, generator) pair indexing one column of a coherent map.
using ColumnKey = std::pair<UltrafilterId, GeneratorId>;

inline constexpr const char* kToolVersion = "0.3.1";

}  // namespace cohsplit
