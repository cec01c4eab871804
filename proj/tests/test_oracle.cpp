#include <random>
#include <string>

#include "doctest.h"

#include "cohsplit/oracle.hpp"
#include "reference.hpp"

using namespace cohsplit;

namespace {

PeriodicSet evens() { return PeriodicSet::residue_class(0, 2); }
PeriodicSet odds() { return PeriodicSet::residue_class(1, 2); }

}  // namespace

TEST_CASE("query on a fresh oracle") {
  OracleState cofinite("p");
  CHECK(cofinite.query(PeriodicSet::cofinite_missing({0, 5})) == 1);
  OracleState finite("p");
  CHECK(finite.query(PeriodicSet::finite({1, 2, 3})) == 0);
  CHECK(finite.commitments().empty());
}

TEST_CASE("yes-bias trace: evens, odds, multiples of four") {
  OracleState p("p");
  CHECK(p.query(evens()) == 1);
  CHECK(p.meet() == evens());
  CHECK(p.query(odds()) == 0);
  CHECK(p.commitments().size() == 1);
  CHECK(p.query(PeriodicSet::residue_class(0, 4)) == 1);
  CHECK(p.meet() == PeriodicSet::residue_class(0, 4));

  REQUIRE(p.transcript().size() == 3);
  CHECK(p.transcript()[0].committed == evens());
  CHECK_FALSE(p.transcript()[1].committed.has_value());
  CHECK(p.transcript()[2].committed == PeriodicSet::residue_class(0, 4));
}

TEST_CASE("forced answers commit nothing") {
  OracleState p("p");
  p.query(PeriodicSet::residue_class(0, 3));
  CHECK(p.query(PeriodicSet::residue_class(0, 3)) == 1);
  CHECK(p.query(PeriodicSet::naturals()) == 1);
  CHECK(p.query(PeriodicSet::residue_class(1, 3)) == 0);
  CHECK(p.commitments().size() == 1);
}

TEST_CASE("p_limit examples") {
  OracleState p("p");
  CHECK(p_limit(p, CellPartition<std::string>{{{"c", PeriodicSet::naturals()}}}).label == "c");

  OracleState q("q");
  CHECK(p_limit(q, CellPartition<std::string>{{{"a", evens()}, {"b", odds()}}}).label == "a");

  OracleState r("r");
  const auto fin = PeriodicSet::finite({0, 1, 2, 3});
  const auto d = p_limit(r, CellPartition<std::string>{{{"a", fin}, {"b", complement(fin)}}});
  CHECK(d.label == "b");
  CHECK(d.cell == 1);
}

TEST_CASE("p_limit rejects non-partitions") {
  OracleState p("p");
  CHECK_THROWS_AS(p_limit(p, CellPartition<int>{{{0, evens()}, {1, PeriodicSet::naturals()}}}),
                  MalformedPartition);
  CHECK_THROWS_AS(p_limit(p, CellPartition<int>{{{0, evens()}}}), MalformedPartition);
  CHECK_THROWS_AS(p_limit(p, CellPartition<int>{}), MalformedPartition);
  CHECK(p.transcript().empty());
}

TEST_CASE("saved commitments must have infinite intersection") {
  CHECK_THROWS_AS(OracleState("p", {evens(), odds()}), std::invalid_argument);
  OracleState ok("p", {evens(), PeriodicSet::residue_class(0, 3)});
  CHECK(ok.meet() == PeriodicSet::residue_class(0, 6));
}

TEST_CASE("oracle laws on random queries") {
  std::mt19937_64 rng(23);
  OracleState p("p");
  std::vector<PeriodicSet> decided_in;
  for (int i = 0; i < 2000; ++i) {
    const auto s = ref::random_set(rng, 10, 10);
    const Bit a = p.query(s);
    REQUIRE(is_infinite(p.meet()));
    if (!is_infinite(s)) REQUIRE(a == 0);
    if (is_cofinite(s)) REQUIRE(a == 1);
    // Ultraness: the complement gets the other answer.
    REQUIRE(p.query(complement(s)) == (a ^ 1));
    if (a == 1) decided_in.push_back(s);
  }
  for (std::size_t i = 0; i + 1 < decided_in.size(); i += 2) {
    const auto& s = decided_in[i];
    const auto& t = decided_in[i + 1];
    CHECK(p.query(unite(s, ref::random_set(rng))) == 1);
    CHECK(p.query(intersect(s, t)) == 1);
  }
}

TEST_CASE("transcripts are deterministic and replayable") {
  auto run = [] {
    std::mt19937_64 rng(99);
    OracleState p("p");
    for (int i = 0; i < 200; ++i) p.query(ref::random_set(rng));
    return p;
  };
  const auto a = run();
  const auto b = run();
  CHECK(a.transcript() == b.transcript());

  OracleState fresh("p");
  CHECK_FALSE(replay_transcript(fresh, a.transcript()).has_value());
  CHECK(fresh.meet() == a.meet());

  auto tampered = a.transcript();
  tampered[17].answer ^= 1;
  OracleState again("p");
  CHECK(replay_transcript(again, tampered) == std::optional<std::size_t>(17));
}

TEST_CASE("bank keeps oracles independent") {
  OracleBank bank;
  bank.at("p").query(evens());
  bank.at("q").query(odds());
  CHECK(bank.at("p").meet() == evens());
  CHECK(bank.at("q").meet() == odds());
  const auto mark = bank.mark();
  bank.at("p").query(PeriodicSet::residue_class(0, 4));
  bank.at("r").query(PeriodicSet::naturals());
  const auto since = bank.transcripts_since(mark);
  CHECK(since.size() == 2);
  CHECK(since.at("p").size() == 1);
  CHECK(since.at("r").size() == 1);
}
