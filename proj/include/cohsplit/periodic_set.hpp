#pragma once

#include <cstdint>
#include <vector>

#include "cohsplit/core.hpp"

namespace cohsplit {

// An eventually periodic subset S of the naturals:
//
//   n in S  <=>  (n < threshold and n in prefix)
//                or (n >= threshold and n mod modulus in residues).
//
// Every constructor canonicalizes eagerly: the modulus is the minimal period
// of the tail and the threshold is the least one for which the tail rule
// holds. Two sets are equal iff their canonical fields are equal, so the
// defaulted operator== is set equality.
//
// Storage is proportional to threshold + modulus. Sets with very large
// finite parts (say, a cofinite set missing 10^7) are correct but costly.
class PeriodicSet {
 public:
  // Cap on the modulus produced by Boolean operations (lcm growth).
  static constexpr Nat kMaxModulus = Nat{1} << 22;

  // The empty set.
  PeriodicSet();

  // Throws std::invalid_argument if modulus == 0, a residue is out of
  // [0, modulus) or a prefix member is out of [0, threshold). Inputs need not
  // be sorted or canonical.
  PeriodicSet(Nat threshold, Nat modulus, std::vector<Nat> residues,
              std::vector<Nat> prefix);

  static PeriodicSet empty() { return PeriodicSet(); }
  static PeriodicSet naturals() { return PeriodicSet(0, 1, {0}, {}); }
  static PeriodicSet finite(std::vector<Nat> members);
  static PeriodicSet cofinite_missing(std::vector<Nat> excluded);
  // {n : n = residue mod modulus}
  static PeriodicSet residue_class(Nat residue, Nat modulus);

  Nat threshold() const noexcept { return threshold_; }
  Nat modulus() const noexcept { return modulus_; }
  const std::vector<Nat>& residues() const noexcept { return residues_; }
  const std::vector<Nat>& prefix() const noexcept { return prefix_; }

  bool contains(Nat n) const;
  bool tail_contains(Nat n) const;  // ignores the prefix

  bool is_empty() const noexcept { return residues_.empty() && prefix_.empty(); }
  bool is_infinite() const noexcept { return !residues_.empty(); }
  bool is_cofinite() const noexcept { return residues_.size() == modulus_; }

  friend bool operator==(const PeriodicSet&, const PeriodicSet&) = default;

  // Takes a tail bitmap (size = modulus) and a sorted prefix.
  static PeriodicSet from_parts(Nat threshold, std::vector<std::uint8_t> tail,
                                std::vector<Nat> prefix);

 private:

  Nat threshold_ = 0;
  Nat modulus_ = 1;
  std::vector<Nat> residues_;
  std::vector<Nat> prefix_;
};

bool member(const PeriodicSet& s, Nat n);
PeriodicSet complement(const PeriodicSet& s);
PeriodicSet intersect(const PeriodicSet& s, const PeriodicSet& t);
PeriodicSet unite(const PeriodicSet& s, const PeriodicSet& t);
PeriodicSet difference(const PeriodicSet& s, const PeriodicSet& t);
inline bool is_infinite(const PeriodicSet& s) { return s.is_infinite(); }
inline bool is_cofinite(const PeriodicSet& s) { return s.is_cofinite(); }
bool is_subset(const PeriodicSet& s, const PeriodicSet& t);
bool are_disjoint(const PeriodicSet& s, const PeriodicSet& t);

}  // namespace cohsplit
