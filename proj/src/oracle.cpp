#include "cohsplit/oracle.hpp"

#include <stdexcept>

namespace cohsplit {

OracleState::OracleState(UltrafilterId id)
    : id_(std::move(id)), meet_(PeriodicSet::naturals()) {}

OracleState::OracleState(UltrafilterId id, std::vector<PeriodicSet> commitments)
    : OracleState(std::move(id)) {
  for (auto& c : commitments) {
    meet_ = intersect(meet_, c);
    if (!meet_.is_infinite()) {
      throw std::invalid_argument("commitments of oracle " + id_ +
                                  " have finite intersection");
    }
    commitments_.push_back(std::move(c));
  }
}

Bit OracleState::peek(const PeriodicSet& s) const {
  const PeriodicSet both = intersect(meet_, s);
  return both.is_infinite() ? 1 : 0;
}

Bit OracleState::query(const PeriodicSet& s) {
  PeriodicSet both = intersect(meet_, s);
  TranscriptEntry entry{id_, s, 0, std::nullopt};
  if (both == meet_) {
    entry.answer = 1;
  } else if (!both.is_infinite()) {
    entry.answer = 0;
  } else {
    entry.answer = 1;
    entry.committed = s;
    commitments_.push_back(s);
    meet_ = std::move(both);
  }
  if (!meet_.is_infinite()) throw InvariantViolation("oracle " + id_ + " meet became finite");
  const Bit answer = entry.answer;
  transcript_.push_back(std::move(entry));
  return answer;
}

std::optional<std::size_t> replay_transcript(OracleState& state,
                                             std::span<const TranscriptEntry> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& recorded = entries[i];
    if (recorded.oracle != state.id()) return i;
    const std::size_t before = state.commitments().size();
    const Bit answer = state.query(recorded.query);
    std::optional<PeriodicSet> committed;
    if (state.commitments().size() != before) committed = state.commitments().back();
    if (answer != recorded.answer || committed != recorded.committed) return i;
  }
  return std::nullopt;
}

void check_partition(std::span<const PeriodicSet> cells) {
  if (cells.empty()) throw MalformedPartition("no cells");
  PeriodicSet covered = PeriodicSet::empty();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!are_disjoint(covered, cells[i])) {
      throw MalformedPartition("cell " + std::to_string(i) + " overlaps an earlier cell");
    }
    covered = unite(covered, cells[i]);
  }
  if (!covered.is_cofinite() || !covered.prefix().empty() || covered.threshold() != 0) {
    throw MalformedPartition("cells do not cover N");
  }
}

CellPartition<Bit> bit_partition(const PeriodicSet& ones) {
  return CellPartition<Bit>{{{Bit{1}, ones}, {Bit{0}, complement(ones)}}};
}

OracleState& OracleBank::at(const UltrafilterId& id) {
  auto it = states_.find(id);
  if (it == states_.end()) it = states_.emplace(id, OracleState(id)).first;
  return it->second;
}

const OracleState* OracleBank::find(const UltrafilterId& id) const {
  auto it = states_.find(id);
  return it == states_.end() ? nullptr : &it->second;
}

void OracleBank::insert(OracleState state) {
  const auto id = state.id();
  states_.insert_or_assign(id, std::move(state));
}

std::map<UltrafilterId, std::size_t> OracleBank::mark() const {
  std::map<UltrafilterId, std::size_t> lengths;
  for (const auto& [id, state] : states_) lengths[id] = state.transcript().size();
  return lengths;
}

std::map<UltrafilterId, std::vector<TranscriptEntry>> OracleBank::transcripts_since(
    const std::map<UltrafilterId, std::size_t>& mark) const {
  std::map<UltrafilterId, std::vector<TranscriptEntry>> out;
  for (const auto& [id, state] : states_) {
    auto it = mark.find(id);
    const std::size_t from = it == mark.end() ? 0 : it->second;
    const auto& t = state.transcript();
    if (from < t.size()) out[id].assign(t.begin() + static_cast<std::ptrdiff_t>(from), t.end());
  }
  return out;
}

std::map<UltrafilterId, std::vector<PeriodicSet>> OracleBank::commitments() const {
  std::map<UltrafilterId, std::vector<PeriodicSet>> out;
  for (const auto& [id, state] : states_) out[id] = state.commitments();
  return out;
}

}  // namespace cohsplit
