#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cohsplit/boolean_group.hpp"

namespace cohsplit {

enum class StreamKind { star_free, star_rich, mixed, bucketed };

StreamKind stream_kind_from_string(const std::string& s);
std::string to_string(StreamKind kind);

// Points live in the ids p0..p{U-1}, k0..k{G-1}. The non-star pool has
// `pool` points; the star pool is all U*G points at omega.
struct GenerateOptions {
  std::size_t ultrafilters = 4;
  std::size_t generators = 16;
  std::size_t pool = 1000;
  std::size_t max_points = 4;  // non-star points per element, at least 1
};

// Pairwise-distinct elements, a pure function of (kind, size, seed, options).
//   star-free: 1..max_points pool points.
//   star-rich: one star point plus 0..max_points-1 pool points; the first
//              U*G elements use each star point once.
//   mixed:     star-free or star-rich with probability 1/2 each.
//   bucketed:  a fixed star trace (70% / 15% / 15% over three traces) plus
//              1..max_points pool points.
std::vector<GroupElement> generate_stream(StreamKind kind, std::size_t size, std::uint64_t seed,
                                          const GenerateOptions& options = {});

std::string ultrafilter_name(std::size_t i);
std::string generator_name(std::size_t i);

}  // namespace cohsplit
