#pragma once

#include <compare>
#include <concepts>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cohsplit/core.hpp"
#include "cohsplit/errors.hpp"

namespace cohsplit {

// A natural number or the symbol omega; omega compares greater than every
// natural.
class ExtNat {
 public:
  constexpr ExtNat() = default;
  // Throws std::out_of_range for the one value reserved for omega.
  explicit ExtNat(Nat n);

  static constexpr ExtNat omega() {
    ExtNat e;
    e.value_ = kOmega;
    return e;
  }

  constexpr bool is_omega() const noexcept { return value_ == kOmega; }
  // Precondition: !is_omega().
  constexpr Nat value() const noexcept { return value_; }

  friend constexpr auto operator<=>(const ExtNat&, const ExtNat&) = default;

 private:
  static constexpr Nat kOmega = std::numeric_limits<Nat>::max();
  Nat value_ = 0;
};

// Ultrafilter id reserved for points of a flat set with no (p, k, n)
// structure; such points are written (kFlatUltrafilter, name, 0).
inline const UltrafilterId kFlatUltrafilter = "_flat";

// A point (p, k, n) of X = P x K x (omega + 1). Ordered lexicographically.
struct Point {
  UltrafilterId p;
  GeneratorId k;
  ExtNat n;

  bool is_star() const noexcept { return n.is_omega(); }
  ColumnKey column() const { return {p, k}; }

  friend auto operator<=>(const Point&, const Point&) = default;
  friend bool operator==(const Point&, const Point&) = default;
};

std::string to_string(const Point& x);

Point flat_point(const std::string& name);

// An element of the free Boolean group B(X): a finite set of points, kept
// sorted. The empty set is zero.
class GroupElement {
 public:
  GroupElement() = default;
  // Duplicated points collapse (set semantics).
  explicit GroupElement(std::vector<Point> points);
  static GroupElement singleton(Point x);

  const std::vector<Point>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  bool contains(const Point& x) const;
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  std::vector<Point> points_;
};

std::string to_string(const GroupElement& a);

struct GroupElementHash {
  std::size_t operator()(const GroupElement& a) const noexcept;
};

GroupElement sym_diff(const GroupElement& a, const GroupElement& b);
inline GroupElement operator+(const GroupElement& a, const GroupElement& b) {
  return sym_diff(a, b);
}
// The points of `a` lying in X* (n = omega).
GroupElement star_trace(const GroupElement& a);
// Set difference a \ b.
GroupElement set_minus(const GroupElement& a, const GroupElement& b);
GroupElement set_union(const GroupElement& a, const GroupElement& b);

// A map X -> Z_2 given on a finite support, optionally extended by a
// constant default.
class TwoValuedMap {
 public:
  TwoValuedMap() = default;
  explicit TwoValuedMap(std::optional<Bit> default_value) : default_(default_value) {}

  void assign(const Point& x, Bit value);
  bool is_assigned(const Point& x) const { return assignments_.contains(x); }
  std::optional<Bit> lookup(const Point& x) const;

  const std::map<Point, Bit>& assignments() const noexcept { return assignments_; }
  std::optional<Bit> default_value() const noexcept { return default_; }
  void set_default(std::optional<Bit> value) { default_ = value; }

  // Throws UnassignedPoint outside the support of a partial map.
  Bit operator()(const Point& x) const;

  friend bool operator==(const TwoValuedMap&, const TwoValuedMap&) = default;

 private:
  std::map<Point, Bit> assignments_;
  std::optional<Bit> default_;
};

template <class F>
concept PointFunction = requires(const F& f, const Point& x) {
  { f(x) } -> std::convertible_to<Bit>;
};

// The homomorphism extension of f evaluated at a: XOR of f over a's points.
template <PointFunction F>
Bit hom_eval(const F& f, const GroupElement& a) {
  Bit acc = 0;
  for (const Point& x : a) acc ^= static_cast<Bit>(f(x) & 1);
  return acc;
}

}  // namespace cohsplit
