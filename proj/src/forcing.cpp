#include "cohsplit/forcing.hpp"

#include <algorithm>
#include <unordered_set>

namespace cohsplit {

bool Condition::covers(const GroupElement& a) const {
  return std::all_of(a.begin(), a.end(), [&](const Point& x) {
    return ultrafilters.contains(x.p) && generators.contains(x.k);
  });
}

Bit Condition::eval(const GroupElement& a) const {
  Bit acc = 0;
  for (const Point& x : a) acc ^= columns.at(x.column()).value_at(x.n);
  return acc;
}

bool Condition::well_formed() const {
  if (columns.size() != ultrafilters.size() * generators.size()) return false;
  for (const auto& [key, column] : columns) {
    if (key != column.key()) return false;
    if (!ultrafilters.contains(key.first) || !generators.contains(key.second)) return false;
  }
  return true;
}

CoherentMap Condition::as_map() const {
  CoherentMap f;
  for (const auto& [key, column] : columns) f.set_column(column);
  return f;
}

bool leq(const Condition& q, const Condition& r) {
  if (!std::includes(q.ultrafilters.begin(), q.ultrafilters.end(), r.ultrafilters.begin(),
                     r.ultrafilters.end())) {
    return false;
  }
  if (!std::includes(q.generators.begin(), q.generators.end(), r.generators.begin(),
                     r.generators.end())) {
    return false;
  }
  return std::all_of(r.columns.begin(), r.columns.end(), [&](const auto& entry) {
    auto it = q.columns.find(entry.first);
    return it != q.columns.end() && it->second == entry.second;
  });
}

Condition apply_step(const Condition& r, const ChainStep& step) {
  Condition q = r;
  q.ultrafilters.insert(step.added_ultrafilters.begin(), step.added_ultrafilters.end());
  q.generators.insert(step.added_generators.begin(), step.added_generators.end());
  for (const auto& c : step.new_columns) q.columns.insert_or_assign(c.key(), c);
  return q;
}

namespace {

// Extends r to P x K, with every new column zero except `steer`, then
// certifies the new columns.
MeetResult extend(const Condition& r, std::set<UltrafilterId> ultrafilters,
                  std::set<GeneratorId> generators, const std::optional<Column>& steer,
                  OracleBank& oracles) {
  MeetResult out{r, ChainStep{}};
  auto& q = out.condition;
  auto& step = out.step;
  for (const auto& p : ultrafilters) {
    if (!r.ultrafilters.contains(p)) step.added_ultrafilters.push_back(p);
  }
  for (const auto& k : generators) {
    if (!r.generators.contains(k)) step.added_generators.push_back(k);
  }
  q.ultrafilters = std::move(ultrafilters);
  q.generators = std::move(generators);
  for (const auto& p : q.ultrafilters) {
    for (const auto& k : q.generators) {
      ColumnKey key{p, k};
      if (r.columns.contains(key)) continue;
      Column column = steer && steer->key() == key ? *steer : Column::zero(p, k);
      if (!certify_coherent(column, oracles)) {
        throw IncoherentResult("new column (" + p + "," + k + ") is not coherent");
      }
      step.new_columns.push_back(column);
      q.columns.emplace(std::move(key), std::move(column));
    }
  }
  return out;
}

MeetResult meet_hit(const Condition& r, const Hit& goal, std::span<const GroupElement> stream,
                    OracleBank& oracles, std::size_t goal_index) {
  const std::unordered_set<GroupElement, GroupElementHash> avoid(goal.avoid.begin(),
                                                                 goal.avoid.end());

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& a = stream[i];
    if (avoid.contains(a) || !r.covers(a) || r.eval(a) != goal.parity) continue;
    MeetResult out{r, ChainStep{goal, {}, {}, {}, HitWitness{i, WitnessKind::reused, {}}}};
    return out;
  }

  std::set<Point> avoided_stars;
  for (const auto& b : goal.avoid) {
    for (const Point& x : b) {
      if (x.is_star()) avoided_stars.insert(x);
    }
  }
  auto outside_f = [&](const Point& x) {
    return x.is_star() && !avoided_stars.contains(x) &&
           !(r.ultrafilters.contains(x.p) && r.generators.contains(x.k));
  };

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& a = stream[i];
    if (avoid.contains(a)) continue;
    auto steer_it = std::find_if(a.begin(), a.end(), outside_f);
    if (steer_it == a.end()) continue;
    const Point steer = *steer_it;

    Bit known = 0;  // f^r on a n (P^r x K^r x (omega+1))
    std::vector<Nat> occupied;
    for (const Point& x : a) {
      if (r.ultrafilters.contains(x.p) && r.generators.contains(x.k)) {
        known ^= r.columns.at(x.column()).value_at(x.n);
      }
      if (x.column() == steer.column() && !x.is_star()) occupied.push_back(x.n.value());
    }
    const Bit l = goal.parity ^ known;
    Column steering{steer.p, steer.k,
                    l ? PeriodicSet::cofinite_missing(occupied) : PeriodicSet::empty(), l};

    std::set<UltrafilterId> ultrafilters = r.ultrafilters;
    std::set<GeneratorId> generators = r.generators;
    for (const Point& x : a) {
      ultrafilters.insert(x.p);
      generators.insert(x.k);
    }
    MeetResult out = extend(r, std::move(ultrafilters), std::move(generators), steering, oracles);
    if (out.condition.eval(a) != goal.parity) {
      throw IncoherentResult("fresh witness " + to_string(a) + " missed its parity");
    }
    out.step.goal = goal;
    out.step.witness = HitWitness{i, WitnessKind::fresh, steer};
    return out;
  }
  throw NoWitness(goal_index, "no element outside the avoided set is reached with value " +
                                  std::to_string(goal.parity) +
                                  " or carries a star point outside F");
}

}  // namespace

MeetResult meet_dense(const Condition& r, const DenseGoal& goal,
                      std::span<const GroupElement> stream, OracleBank& oracles,
                      std::size_t goal_index) {
  if (const auto* add = std::get_if<AddUltrafilter>(&goal)) {
    auto ultrafilters = r.ultrafilters;
    ultrafilters.insert(add->p);
    MeetResult out = extend(r, std::move(ultrafilters), r.generators, std::nullopt, oracles);
    out.step.goal = goal;
    return out;
  }
  if (const auto* add = std::get_if<AddGenerator>(&goal)) {
    auto generators = r.generators;
    generators.insert(add->k);
    MeetResult out = extend(r, r.ultrafilters, std::move(generators), std::nullopt, oracles);
    out.step.goal = goal;
    return out;
  }
  return meet_hit(r, std::get<Hit>(goal), stream, oracles, goal_index);
}

const ChainStep& ForcingChain::meet(const DenseGoal& goal) {
  MeetResult result = meet_dense(current_, goal, stream_, *oracles_, steps_.size());
  current_ = std::move(result.condition);
  steps_.push_back(std::move(result.step));
  return steps_.back();
}

}  // namespace cohsplit
