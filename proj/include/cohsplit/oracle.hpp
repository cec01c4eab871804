#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cohsplit/core.hpp"
#include "cohsplit/errors.hpp"
#include "cohsplit/periodic_set.hpp"

namespace cohsplit {

// One line of an oracle transcript. `committed` is the set added to the
// commitment list by this query, or empty when the answer was already forced.
struct TranscriptEntry {
  UltrafilterId oracle;
  PeriodicSet query;
  Bit answer = 0;
  std::optional<PeriodicSet> committed;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

// A lazily decided free ultrafilter on the naturals.
//
// The state is the list of sets committed to lie in p, together with their
// intersection `meet`, which is kept infinite. A query of S is answered by:
//   meet is a subset of S        -> 1, nothing committed
//   meet and S meet finitely     -> 0, nothing committed
//   otherwise                    -> 1, S committed, meet := meet & S
// Finite sets are therefore never in p, and answers are monotone and
// closed under finite intersection. Answers depend on query order.
class OracleState {
 public:
  explicit OracleState(UltrafilterId id);

  // Rebuilds a state from a saved commitment list. Throws
  // std::invalid_argument if the commitments have finite intersection.
  OracleState(UltrafilterId id, std::vector<PeriodicSet> commitments);

  const UltrafilterId& id() const noexcept { return id_; }
  const std::vector<PeriodicSet>& commitments() const noexcept { return commitments_; }
  const PeriodicSet& meet() const noexcept { return meet_; }
  const std::vector<TranscriptEntry>& transcript() const noexcept { return transcript_; }

  Bit query(const PeriodicSet& s);

  // Answer that query(s) would give, without recording anything.
  Bit peek(const PeriodicSet& s) const;

 private:
  UltrafilterId id_;
  std::vector<PeriodicSet> commitments_;
  PeriodicSet meet_;
  std::vector<TranscriptEntry> transcript_;
};

// Replays `entries` against `state`. Returns the index of the first entry
// whose answer or commitment differs, or nullopt when all match.
std::optional<std::size_t> replay_transcript(OracleState& state,
                                             std::span<const TranscriptEntry> entries);

// A finitely-valued sequence given by the cells {n : x_n = label}.
template <class Label>
struct CellPartition {
  std::vector<std::pair<Label, PeriodicSet>> cells;
};

// Throws MalformedPartition unless the sets are pairwise disjoint and cover
// the naturals.
void check_partition(std::span<const PeriodicSet> cells);

template <class Label>
struct LimitDecision {
  Label label;
  std::size_t cell = 0;
};

// The p-limit of a finitely-valued sequence: the label of the unique cell
// that belongs to p. Cells are queried in list order.
template <class Label>
LimitDecision<Label> p_limit(OracleState& state, const CellPartition<Label>& seq) {
  std::vector<PeriodicSet> sets;
  sets.reserve(seq.cells.size());
  for (const auto& [label, set] : seq.cells) sets.push_back(set);
  check_partition(sets);
  for (std::size_t i = 0; i < seq.cells.size(); ++i) {
    if (state.query(seq.cells[i].second) == 1) return {seq.cells[i].first, i};
  }
  throw InvariantViolation("no cell of a partition of N was decided into p");
}

// Two-cell partition {ones -> 1, complement -> 0}, queried ones-first.
CellPartition<Bit> bit_partition(const PeriodicSet& ones);

// Independent oracle states keyed by ultrafilter id; created on first use.
class OracleBank {
 public:
  OracleBank() = default;

  OracleState& at(const UltrafilterId& id);
  const OracleState* find(const UltrafilterId& id) const;
  void insert(OracleState state);

  const std::map<UltrafilterId, OracleState>& states() const noexcept { return states_; }

  // Transcript lengths, used to slice the entries produced by one run.
  std::map<UltrafilterId, std::size_t> mark() const;
  std::map<UltrafilterId, std::vector<TranscriptEntry>> transcripts_since(
      const std::map<UltrafilterId, std::size_t>& mark) const;
  std::map<UltrafilterId, std::vector<PeriodicSet>> commitments() const;

 private:
  std::map<UltrafilterId, OracleState> states_;
};

}  // namespace cohsplit
