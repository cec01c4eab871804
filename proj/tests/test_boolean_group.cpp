#include <random>

#include "doctest.h"

#include "cohsplit/boolean_group.hpp"
#include "reference.hpp"

using namespace cohsplit;

namespace {

Point pt(const std::string& p, const std::string& k, Nat n) { return Point{p, k, ExtNat(n)}; }
Point star(const std::string& p, const std::string& k) { return Point{p, k, ExtNat::omega()}; }

GroupElement random_element(std::mt19937_64& rng, std::size_t universe) {
  std::uniform_int_distribution<std::size_t> size(0, 5), pick(0, universe - 1);
  std::vector<Point> points;
  for (std::size_t i = size(rng); i > 0; --i) {
    const std::size_t t = pick(rng);
    points.push_back(t % 7 == 0 ? star("p" + std::to_string(t % 3), "k" + std::to_string(t % 5))
                                : pt("p" + std::to_string(t % 3), "k" + std::to_string(t % 5), t / 15));
  }
  return GroupElement(points);
}

}  // namespace

TEST_CASE("sym_diff examples") {
  const auto x = pt("p", "k", 0), y = pt("p", "k", 1), z = pt("p", "k", 2);
  CHECK(sym_diff(GroupElement({x}), GroupElement({x})).empty());
  const GroupElement a({x, z});
  CHECK(sym_diff(GroupElement(), a) == a);
  CHECK(sym_diff(GroupElement({x, y}), GroupElement({y, z})) == GroupElement({x, z}));
}

TEST_CASE("hom_eval examples") {
  const auto x = pt("p", "k", 0), y = pt("p", "k", 1);
  TwoValuedMap f(Bit{0});
  CHECK(hom_eval(f, GroupElement()) == 0);
  f.assign(x, 1);
  CHECK(hom_eval(f, GroupElement({x})) == 1);
  f.assign(y, 1);
  CHECK(hom_eval(f, GroupElement({x, y})) == 0);

  TwoValuedMap partial;
  partial.assign(x, 1);
  CHECK_THROWS_AS(hom_eval(partial, GroupElement({x, y})), UnassignedPoint);
}

TEST_CASE("star_trace examples") {
  CHECK(star_trace(GroupElement({pt("p", "k", 3), pt("q", "k", 1)})).empty());
  const GroupElement s({star("p", "k")});
  CHECK(star_trace(s) == s);
  CHECK(star_trace(GroupElement({pt("p", "k", 3), star("p", "k"), star("q", "k")})) ==
        GroupElement({star("p", "k"), star("q", "k")}));
}

TEST_CASE("points order lexicographically with omega last") {
  CHECK(pt("p", "k", 5) < star("p", "k"));
  CHECK(star("p", "k") < pt("p", "l", 0));
  CHECK(pt("a", "z", 9) < pt("b", "a", 0));
  const GroupElement a({star("p", "k"), pt("p", "k", 2), pt("p", "k", 2)});
  CHECK(a.size() == 2);
  CHECK(a.points().front() == pt("p", "k", 2));
  CHECK_THROWS_AS(ExtNat(std::numeric_limits<Nat>::max()), std::out_of_range);
}

TEST_CASE("group laws and homomorphism against the naive model") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = random_element(rng, 60), b = random_element(rng, 60), c = random_element(rng, 60);
    REQUIRE(ref::naive(a + b) == ref::naive_sym_diff(ref::naive(a), ref::naive(b)));
    REQUIRE((a + b) + c == a + (b + c));
    REQUIRE(a + b == b + a);
    REQUIRE((a + a).empty());
    REQUIRE(a + GroupElement() == a);

    TwoValuedMap f(Bit{0});
    for (const auto& x : a) f.assign(x, static_cast<Bit>(rng() & 1));
    for (const auto& x : b) f.assign(x, static_cast<Bit>(rng() & 1));
    REQUIRE(hom_eval(f, a + b) == (hom_eval(f, a) ^ hom_eval(f, b)));
    REQUIRE(hom_eval(f, a) == ref::naive_parity(f, ref::naive(a)));
  }
}

TEST_CASE("maps agreeing on singletons agree everywhere") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point> universe;
    for (Nat n = 0; n < 6; ++n) universe.push_back(pt("p", "k", n));
    TwoValuedMap f, g(Bit{1});
    for (const auto& x : universe) {
      const Bit v = static_cast<Bit>(rng() & 1);
      f.assign(x, v);
      g.assign(x, v);
    }
    for (std::uint32_t mask = 0; mask < 64; ++mask) {
      std::vector<Point> pts;
      for (std::size_t i = 0; i < 6; ++i) {
        if (mask >> i & 1) pts.push_back(universe[i]);
      }
      REQUIRE(hom_eval(f, GroupElement(pts)) == hom_eval(g, GroupElement(pts)));
    }
  }
}

TEST_CASE("set helpers") {
  const auto x = pt("p", "k", 0), y = pt("p", "k", 1), z = star("p", "k");
  CHECK(set_minus(GroupElement({x, y, z}), GroupElement({y})) == GroupElement({x, z}));
  CHECK(set_union(GroupElement({x}), GroupElement({y})) == GroupElement({x, y}));
  CHECK(flat_point("a").p == kFlatUltrafilter);
}
