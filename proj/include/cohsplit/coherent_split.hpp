#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cohsplit/coherent_map.hpp"
#include "cohsplit/forcing.hpp"
#include "cohsplit/splitter.hpp"

namespace cohsplit {

enum class SplitPath { finite, infinite };
enum class StarMode { finite, infinite, automatic };

struct SplitParams {
  std::size_t cutoff = 0;  // 0 means the whole stream
  StarMode mode = StarMode::automatic;
  // Number of Hit goals on the infinite path. Empty: keep scheduling until
  // the first goal that cannot be met.
  std::optional<std::size_t> hit_goals;
  // Auto picks the infinite path when the prefix has more distinct star
  // points than this. Defaults to ceil(sqrt(cutoff)).
  std::optional<std::size_t> auto_threshold;

  friend bool operator==(const SplitParams&, const SplitParams&) = default;
};

struct TraceBucket {
  GroupElement trace;
  std::size_t count = 0;
  friend bool operator==(const TraceBucket&, const TraceBucket&) = default;
};

// Bookkeeping of the finite star-trace path.
struct FiniteTraceRecord {
  GroupElement trace;  // I, the star trace of the chosen bucket
  Bit trace_value = 0;  // j = f~(I)
  std::vector<TraceBucket> buckets;
  std::vector<std::size_t> dominant;  // stream positions with star trace I
  std::vector<FeedReport> reports;    // splitter log over a \ I
  std::size_t steered = 0;
  friend bool operator==(const FiniteTraceRecord&, const FiniteTraceRecord&) = default;
};

inline constexpr const char* kFlagManyStarTraces = "many_star_traces";
inline constexpr const char* kFlagInsufficientPrefix = "insufficient_prefix";

// Replayable record of a coherent split of a finite stream prefix.
struct SplitCertificate {
  SplitPath path = SplitPath::finite;
  std::optional<SplitParams> params;  // set by coherent_split
  std::vector<GroupElement> elements;
  CoherentMap map;
  std::vector<Bit> values;
  std::vector<std::size_t> class0;
  std::vector<std::size_t> class1;
  // s: steered elements (finite path) or witness_guarantee (infinite path).
  // Both classes hold at least s / 2 elements.
  std::size_t guarantee = 0;
  std::size_t star_points = 0;
  std::vector<std::string> flags;
  std::map<UltrafilterId, std::vector<PeriodicSet>> initial_commitments;
  std::map<UltrafilterId, std::vector<TranscriptEntry>> transcripts;
  std::vector<ChainStep> chain;
  std::optional<FiniteTraceRecord> finite_trace;

  std::size_t balance_floor() const noexcept { return guarantee / 2; }
  bool has_flag(const std::string& flag) const;

  friend bool operator==(const SplitCertificate&, const SplitCertificate&) = default;
};

// Twice the smaller number of distinct Hit witnesses of one parity. Each
// witness keeps its value under every extension, so each class of the final
// map holds at least half of this.
std::size_t witness_guarantee(std::span<const ChainStep> steps);

std::size_t distinct_star_points(std::span<const GroupElement> elements);
std::size_t default_auto_threshold(std::size_t cutoff);

// Splits elements sharing the most common star trace I: the splitter runs on
// a \ I, the result is extended coherently, and f~(a) = f~(a \ I) + f~(I).
// Throws EmptyInput or DuplicateElement.
SplitCertificate split_finite_trace(std::span<const GroupElement> stream, std::size_t cutoff,
                                    OracleBank& oracles);

// Folds meet_dense over `schedule` from the empty condition. The map is the
// last condition's columns, 0 elsewhere. Throws NoWitness with the index of
// the failing goal.
SplitCertificate forcing_split(std::span<const GroupElement> stream,
                               std::span<const DenseGoal> schedule, OracleBank& oracles);

// Restricts to the first `cutoff` elements and dispatches. The infinite path
// uses the canonical schedule: Hit goals with parity 0, 1, 0, ... each
// avoiding all earlier witnesses, then AddUltrafilter / AddGenerator for every
// id occurring in the prefix.
SplitCertificate coherent_split(std::span<const GroupElement> stream, const SplitParams& params,
                                OracleBank& oracles);

// The clopen partition B(X) = U_0 u U_1 with U_i = f~^{-1}(i), restricted to
// a list of elements.
struct PartitionReport {
  std::vector<Bit> values;
  std::vector<std::size_t> u0;
  std::vector<std::size_t> u1;
  bool both_nonempty() const noexcept { return !u0.empty() && !u1.empty(); }
};

PartitionReport clopen_certificate(const CoherentMap& map, std::span<const GroupElement> elements);

}  // namespace cohsplit
