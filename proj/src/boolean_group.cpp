#include "cohsplit/boolean_group.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <stdexcept>

namespace cohsplit {

ExtNat::ExtNat(Nat n) : value_(n) {
  if (n == kOmega) throw std::out_of_range("natural value collides with omega");
}

std::string to_string(const Point& x) {
  return "(" + x.p + "," + x.k + "," +
         (x.n.is_omega() ? std::string("omega") : std::to_string(x.n.value())) + ")";
}

Point flat_point(const std::string& name) { return Point{kFlatUltrafilter, name, ExtNat(0)}; }

GroupElement::GroupElement(std::vector<Point> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

GroupElement GroupElement::singleton(Point x) {
  GroupElement a;
  a.points_.push_back(std::move(x));
  return a;
}

bool GroupElement::contains(const Point& x) const {
  return std::binary_search(points_.begin(), points_.end(), x);
}

std::string to_string(const GroupElement& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ",";
    out += to_string(a.points()[i]);
  }
  return out + "}";
}

std::size_t GroupElementHash::operator()(const GroupElement& a) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  const std::hash<std::string> hs;
  for (const Point& x : a) {
    h = (h ^ hs(x.p)) * 0x100000001b3ULL;
    h = (h ^ hs(x.k)) * 0x100000001b3ULL;
    h = (h ^ static_cast<std::size_t>(x.n.value())) * 0x100000001b3ULL;
  }
  return h;
}

namespace {

template <class SetOp>
GroupElement apply(const GroupElement& a, const GroupElement& b, SetOp op) {
  std::vector<Point> out;
  op(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return GroupElement(std::move(out));
}

}  // namespace

GroupElement sym_diff(const GroupElement& a, const GroupElement& b) {
  return apply(a, b, [](auto... args) { return std::set_symmetric_difference(args...); });
}

GroupElement set_minus(const GroupElement& a, const GroupElement& b) {
  return apply(a, b, [](auto... args) { return std::set_difference(args...); });
}

GroupElement set_union(const GroupElement& a, const GroupElement& b) {
  return apply(a, b, [](auto... args) { return std::set_union(args...); });
}

GroupElement star_trace(const GroupElement& a) {
  std::vector<Point> stars;
  std::copy_if(a.begin(), a.end(), std::back_inserter(stars),
               [](const Point& x) { return x.is_star(); });
  return GroupElement(std::move(stars));
}

void TwoValuedMap::assign(const Point& x, Bit value) { assignments_[x] = value & 1; }

std::optional<Bit> TwoValuedMap::lookup(const Point& x) const {
  auto it = assignments_.find(x);
  if (it != assignments_.end()) return it->second;
  return default_;
}

Bit TwoValuedMap::operator()(const Point& x) const {
  if (auto v = lookup(x)) return *v;
  throw UnassignedPoint(to_string(x));
}

}  // namespace cohsplit
