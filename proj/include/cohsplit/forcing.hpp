#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "cohsplit/coherent_map.hpp"

namespace cohsplit {

// A finite forcing condition <P^q, K^q, f^q>: a coherent map on
// P^q x K^q x (omega + 1), stored as one column per pair.
struct Condition {
  std::set<UltrafilterId> ultrafilters;
  std::set<GeneratorId> generators;
  std::map<ColumnKey, Column> columns;

  // a is a subset of P^q x K^q x (omega + 1).
  bool covers(const GroupElement& a) const;
  // f^q extended to a. Precondition: covers(a).
  Bit eval(const GroupElement& a) const;
  // Columns defined exactly on P^q x K^q with matching keys.
  bool well_formed() const;
  CoherentMap as_map() const;

  friend bool operator==(const Condition&, const Condition&) = default;
};

// q <= r: q extends r.
bool leq(const Condition& q, const Condition& r);

struct AddUltrafilter {
  UltrafilterId p;
  friend bool operator==(const AddUltrafilter&, const AddUltrafilter&) = default;
};
struct AddGenerator {
  GeneratorId k;
  friend bool operator==(const AddGenerator&, const AddGenerator&) = default;
};
// Reach some a outside `avoid`, inside the domain, with f~(a) = parity.
struct Hit {
  std::vector<GroupElement> avoid;
  Bit parity = 0;
  friend bool operator==(const Hit&, const Hit&) = default;
};
using DenseGoal = std::variant<AddUltrafilter, AddGenerator, Hit>;

enum class WitnessKind {
  reused,  // r already met the goal
  fresh,   // a new steering column was opened
};

struct HitWitness {
  std::size_t index = 0;  // position in the stream
  WitnessKind kind = WitnessKind::reused;
  std::optional<Point> steering;  // (p0, k0, omega) for fresh witnesses
  friend bool operator==(const HitWitness&, const HitWitness&) = default;
};

// One link q_{n+1} <= q_n of a chain, stored as the delta from q_n.
struct ChainStep {
  DenseGoal goal;
  std::vector<UltrafilterId> added_ultrafilters;
  std::vector<GeneratorId> added_generators;
  std::vector<Column> new_columns;
  std::optional<HitWitness> witness;
  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

// Applies a recorded delta. Does not check anything.
Condition apply_step(const Condition& r, const ChainStep& step);

struct MeetResult {
  Condition condition;
  ChainStep step;
};

// Returns q <= r inside the dense set named by `goal`. Hit goals take the
// first stream element already reached by r with the right value; failing
// that, the first element carrying a star point (p0, k0, omega) outside
//   F = (X* n U avoid) u (P^r x K^r x {omega}),
// whose column is set to l = parity + f^r(a n dom r) at omega and off a.
// New columns are certified against the oracles.
// Throws NoWitness(goal_index) or IncoherentResult.
MeetResult meet_dense(const Condition& r, const DenseGoal& goal,
                      std::span<const GroupElement> stream, OracleBank& oracles,
                      std::size_t goal_index = 0);

// A descending chain q_0 >= q_1 >= ... starting from the empty condition.
class ForcingChain {
 public:
  ForcingChain(std::span<const GroupElement> stream, OracleBank& oracles)
      : stream_(stream), oracles_(&oracles) {}

  const ChainStep& meet(const DenseGoal& goal);

  const Condition& current() const noexcept { return current_; }
  const std::vector<ChainStep>& steps() const noexcept { return steps_; }

 private:
  std::span<const GroupElement> stream_;
  OracleBank* oracles_;
  Condition current_;
  std::vector<ChainStep> steps_;
};

}  // namespace cohsplit
