#pragma once

#include <map>
#include <span>
#include <vector>

#include "cohsplit/boolean_group.hpp"
#include "cohsplit/oracle.hpp"
#include "cohsplit/periodic_set.hpp"

namespace cohsplit {

// The restriction of a map f to {p} x {k} x (omega + 1): the set of naturals
// where f is 1, and the value at omega.
struct Column {
  UltrafilterId p;
  GeneratorId k;
  PeriodicSet values_one_set;
  Bit omega_value = 0;

  ColumnKey key() const { return {p, k}; }
  Bit value_at(const ExtNat& n) const;
  // {n : f(p, k, n) = f(p, k, omega)}; the column is coherent iff this set
  // belongs to p.
  PeriodicSet agreement_set() const;

  static Column zero(UltrafilterId p, GeneratorId k);

  friend bool operator==(const Column&, const Column&) = default;
};

// A column before its omega value is fixed.
struct ColumnSpec {
  UltrafilterId p;
  GeneratorId k;
  PeriodicSet values_one_set;
};

// A map X -> Z_2 given by finitely many columns and 0 everywhere else.
class CoherentMap {
 public:
  CoherentMap() = default;
  explicit CoherentMap(std::span<const Column> columns);

  void set_column(Column column);
  const Column* find(const ColumnKey& key) const;
  const std::map<ColumnKey, Column>& columns() const noexcept { return columns_; }

  Bit operator()(const Point& x) const;

  friend bool operator==(const CoherentMap&, const CoherentMap&) = default;

 private:
  std::map<ColumnKey, Column> columns_;
};

// Queries the column's agreement set against its ultrafilter; true iff the
// oracle decides it into p.
bool certify_coherent(const Column& column, OracleBank& oracles);

// Fixes each omega value to the p-limit of the column's values, which makes
// every resulting column coherent. The extension is unique given the oracle:
// re-extending the output reproduces it.
std::vector<Column> extend_coherently(std::span<const ColumnSpec> columns,
                                      OracleBank& oracles);

}  // namespace cohsplit
