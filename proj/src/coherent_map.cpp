#include "cohsplit/coherent_map.hpp"

namespace cohsplit {

Bit Column::value_at(const ExtNat& n) const {
  if (n.is_omega()) return omega_value;
  return values_one_set.contains(n.value()) ? 1 : 0;
}

PeriodicSet Column::agreement_set() const {
  return omega_value ? values_one_set : complement(values_one_set);
}

Column Column::zero(UltrafilterId p, GeneratorId k) {
  return Column{std::move(p), std::move(k), PeriodicSet::empty(), 0};
}

CoherentMap::CoherentMap(std::span<const Column> columns) {
  for (const auto& c : columns) set_column(c);
}

void CoherentMap::set_column(Column column) {
  auto key = column.key();
  columns_.insert_or_assign(std::move(key), std::move(column));
}

const Column* CoherentMap::find(const ColumnKey& key) const {
  auto it = columns_.find(key);
  return it == columns_.end() ? nullptr : &it->second;
}

Bit CoherentMap::operator()(const Point& x) const {
  auto it = columns_.find(ColumnKey{x.p, x.k});
  if (it == columns_.end()) return 0;
  return it->second.value_at(x.n);
}

bool certify_coherent(const Column& column, OracleBank& oracles) {
  return oracles.at(column.p).query(column.agreement_set()) == 1;
}

std::vector<Column> extend_coherently(std::span<const ColumnSpec> columns,
                                      OracleBank& oracles) {
  std::vector<Column> out;
  out.reserve(columns.size());
  for (const auto& spec : columns) {
    auto decision = p_limit(oracles.at(spec.p), bit_partition(spec.values_one_set));
    Column column{spec.p, spec.k, spec.values_one_set, decision.label};
    if (!certify_coherent(column, oracles)) {
      throw IncoherentResult("extension of column (" + spec.p + "," + spec.k +
                             ") failed its coherence query");
    }
    out.push_back(std::move(column));
  }
  return out;
}

}  // namespace cohsplit
