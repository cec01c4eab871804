#include <random>
#include <set>

#include "doctest.h"

#include "cohsplit/generate.hpp"
#include "cohsplit/splitter.hpp"
#include "reference.hpp"

using namespace cohsplit;

TEST_CASE("three-feed example") {
  const auto x = flat_point("x"), y = flat_point("y");
  SplitterState s;

  auto r1 = s.feed(GroupElement({x}));
  CHECK(r1.kind == FeedKind::steered);
  CHECK(r1.steering == x);
  CHECK(r1.value == 0);

  auto r2 = s.feed(GroupElement({y}));
  CHECK(r2.kind == FeedKind::steered);
  CHECK(r2.steering == y);
  CHECK(r2.value == 1);

  auto r3 = s.feed(GroupElement({x, y}));
  CHECK(r3.kind == FeedKind::forced);
  CHECK_FALSE(r3.steering.has_value());
  CHECK(r3.value == 1);

  CHECK(s.count0() == 1);
  CHECK(s.count1() == 2);
  CHECK(s.steered() == 2);

  const auto f = s.finalize();
  CHECK(f(x) == 0);
  CHECK(f(y) == 1);
  CHECK(f(flat_point("z")) == 0);
  CHECK(f.default_value() == Bit{0});
  CHECK(s.finalize() == f);
}

TEST_CASE("fresh state finalizes to the zero map") {
  SplitterState s;
  const auto f = s.finalize();
  CHECK(f.assignments().empty());
  CHECK(f(flat_point("anything")) == 0);
}

TEST_CASE("co-points default to zero and the greatest point steers") {
  SplitterState s;
  const Point a{"p", "k", ExtNat(1)}, b{"p", "k", ExtNat(2)}, w{"p", "k", ExtNat::omega()};
  const auto r = s.feed(GroupElement({a, b, w}));
  CHECK(r.steering == w);
  CHECK(s.partial()(a) == 0);
  CHECK(s.partial()(b) == 0);
}

TEST_CASE("feed errors") {
  SplitterState s;
  CHECK_THROWS_AS(s.feed(GroupElement()), EmptyElement);
  s.feed(GroupElement({flat_point("x")}));
  CHECK_THROWS_AS(s.feed(GroupElement({flat_point("x")})), DuplicateElement);
  CHECK(s.total() == 1);
}

TEST_CASE("balance, consistency and forced runs on generated streams") {
  for (auto kind : {StreamKind::star_free, StreamKind::star_rich, StreamKind::mixed}) {
    const auto stream = generate_stream(kind, 3000, 1234);
    SplitterState s;
    std::set<Point> domain;
    std::size_t forced_run = 0;
    for (const auto& a : stream) {
      const auto r = s.feed(a);
      REQUIRE(std::min(s.count0(), s.count1()) >= s.steered() / 2);
      REQUIRE(s.count0() + s.count1() == s.total());
      if (r.kind == FeedKind::forced) {
        ++forced_run;
        // Only subsets of the assigned domain can be forced.
        REQUIRE((domain.size() >= 63 || forced_run <= (std::size_t{1} << domain.size())));
      } else {
        forced_run = 0;
      }
      domain.insert(a.begin(), a.end());
    }
    const auto f = s.finalize();
    for (const auto& r : s.log()) REQUIRE(hom_eval(f, r.element) == r.value);
  }
}

TEST_CASE("greedy against exhaustive search on small families") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t universe = 1 + rng() % 8;
    std::vector<Point> points;
    for (std::size_t i = 0; i < universe; ++i) points.push_back(flat_point("x" + std::to_string(i)));
    std::set<GroupElement> family_set;
    const std::size_t want = 1 + rng() % 12;
    for (int tries = 0; tries < 200 && family_set.size() < want; ++tries) {
      std::vector<Point> pts;
      for (const auto& x : points) {
        if (rng() & 1) pts.push_back(x);
      }
      if (!pts.empty()) family_set.insert(GroupElement(pts));
    }
    std::vector<GroupElement> family(family_set.begin(), family_set.end());
    std::shuffle(family.begin(), family.end(), rng);

    SplitterState s;
    for (const auto& a : family) s.feed(a);
    const auto greedy = std::min(s.count0(), s.count1());
    CHECK(greedy >= s.steered() / 2);
    CHECK(ref::best_min_class(family, points) >= greedy);
  }
}
