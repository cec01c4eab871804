#include "cohsplit/periodic_set.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cohsplit {

namespace {

std::vector<Nat> divisors(Nat m) {
  std::vector<Nat> small, large;
  for (Nat d = 1; d * d <= m; ++d) {
    if (m % d != 0) continue;
    small.push_back(d);
    if (d != m / d) large.push_back(m / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::vector<std::uint8_t> tail_bitmap(const PeriodicSet& s) {
  std::vector<std::uint8_t> bits(s.modulus(), 0);
  for (Nat r : s.residues()) bits[r] = 1;
  return bits;
}

template <class Op>
PeriodicSet combine(const PeriodicSet& s, const PeriodicSet& t, Op op) {
  const Nat modulus = std::lcm(s.modulus(), t.modulus());
  if (modulus > PeriodicSet::kMaxModulus) {
    throw std::overflow_error("periodic set modulus exceeds " +
                              std::to_string(PeriodicSet::kMaxModulus));
  }
  const Nat threshold = std::max(s.threshold(), t.threshold());
  const auto s_bits = tail_bitmap(s);
  const auto t_bits = tail_bitmap(t);

  std::vector<std::uint8_t> tail(modulus, 0);
  for (Nat r = 0, i = 0, j = 0; r < modulus; ++r) {
    tail[r] = op(s_bits[i] != 0, t_bits[j] != 0) ? 1 : 0;
    if (++i == s.modulus()) i = 0;
    if (++j == t.modulus()) j = 0;
  }
  std::vector<Nat> prefix;
  for (Nat n = 0; n < threshold; ++n) {
    if (op(s.contains(n), t.contains(n))) prefix.push_back(n);
  }
  return PeriodicSet::from_parts(threshold, std::move(tail), std::move(prefix));
}

}  // namespace

PeriodicSet::PeriodicSet() : threshold_(0), modulus_(1) {}

PeriodicSet::PeriodicSet(Nat threshold, Nat modulus, std::vector<Nat> residues,
                         std::vector<Nat> prefix) {
  if (modulus == 0) throw std::invalid_argument("modulus must be at least 1");
  if (modulus > kMaxModulus) throw std::invalid_argument("modulus too large");
  std::vector<std::uint8_t> tail(modulus, 0);
  for (Nat r : residues) {
    if (r >= modulus) {
      throw std::invalid_argument("residue " + std::to_string(r) +
                                  " outside [0, " + std::to_string(modulus) + ")");
    }
    tail[r] = 1;
  }
  for (Nat n : prefix) {
    if (n >= threshold) {
      throw std::invalid_argument("prefix member " + std::to_string(n) +
                                  " not below threshold " + std::to_string(threshold));
    }
  }
  std::sort(prefix.begin(), prefix.end());
  prefix.erase(std::unique(prefix.begin(), prefix.end()), prefix.end());
  *this = from_parts(threshold, std::move(tail), std::move(prefix));
}

PeriodicSet PeriodicSet::from_parts(Nat threshold, std::vector<std::uint8_t> tail,
                                    std::vector<Nat> prefix) {
  const Nat modulus = tail.size();
  std::vector<Nat> ones;
  for (Nat r = 0; r < modulus; ++r) {
    if (tail[r]) ones.push_back(r);
  }
  // d | modulus is a period iff the residue set is invariant under shifting by d.
  Nat period = modulus;
  for (Nat d : divisors(modulus)) {
    bool periodic = true;
    for (std::size_t k = 0; k < ones.size() && periodic; ++k) {
      periodic = tail[(ones[k] + d) % modulus] != 0;
    }
    if (periodic) {
      period = d;
      break;
    }
  }
  tail.resize(period);

  // Lower the threshold while the tail rule already explains n = threshold-1.
  while (threshold > 0) {
    const Nat n = threshold - 1;
    const bool in_prefix = !prefix.empty() && prefix.back() == n;
    if (in_prefix != (tail[n % period] != 0)) break;
    if (in_prefix) prefix.pop_back();
    --threshold;
  }

  PeriodicSet s;
  s.threshold_ = threshold;
  s.modulus_ = period;
  s.residues_.clear();
  for (Nat r = 0; r < period; ++r) {
    if (tail[r]) s.residues_.push_back(r);
  }
  s.prefix_ = std::move(prefix);
  return s;
}

PeriodicSet PeriodicSet::finite(std::vector<Nat> members) {
  Nat threshold = 0;
  for (Nat n : members) threshold = std::max(threshold, n + 1);
  return PeriodicSet(threshold, 1, {}, std::move(members));
}

PeriodicSet PeriodicSet::cofinite_missing(std::vector<Nat> excluded) {
  return complement(finite(std::move(excluded)));
}

PeriodicSet PeriodicSet::residue_class(Nat residue, Nat modulus) {
  if (modulus == 0) throw std::invalid_argument("modulus must be at least 1");
  return PeriodicSet(0, modulus, {residue % modulus}, {});
}

bool PeriodicSet::tail_contains(Nat n) const {
  return std::binary_search(residues_.begin(), residues_.end(), n % modulus_);
}

bool PeriodicSet::contains(Nat n) const {
  if (n < threshold_) return std::binary_search(prefix_.begin(), prefix_.end(), n);
  return tail_contains(n);
}

bool member(const PeriodicSet& s, Nat n) { return s.contains(n); }

PeriodicSet complement(const PeriodicSet& s) {
  std::vector<Nat> residues;
  for (Nat r = 0; r < s.modulus(); ++r) {
    if (!std::binary_search(s.residues().begin(), s.residues().end(), r)) {
      residues.push_back(r);
    }
  }
  std::vector<Nat> prefix;
  auto it = s.prefix().begin();
  for (Nat n = 0; n < s.threshold(); ++n) {
    if (it != s.prefix().end() && *it == n) {
      ++it;
    } else {
      prefix.push_back(n);
    }
  }
  return PeriodicSet(s.threshold(), s.modulus(), std::move(residues), std::move(prefix));
}

PeriodicSet intersect(const PeriodicSet& s, const PeriodicSet& t) {
  return combine(s, t, [](bool a, bool b) { return a && b; });
}

PeriodicSet unite(const PeriodicSet& s, const PeriodicSet& t) {
  return combine(s, t, [](bool a, bool b) { return a || b; });
}

PeriodicSet difference(const PeriodicSet& s, const PeriodicSet& t) {
  return combine(s, t, [](bool a, bool b) { return a && !b; });
}

bool is_subset(const PeriodicSet& s, const PeriodicSet& t) {
  return difference(s, t).is_empty();
}

bool are_disjoint(const PeriodicSet& s, const PeriodicSet& t) {
  return intersect(s, t).is_empty();
}

}  // namespace cohsplit
