#include "doctest.h"

#include "cohsplit/construction_sim.hpp"
#include "sim_fixtures.hpp"

using namespace cohsplit;

namespace {

Point z(const std::string& p, const std::string& a, Nat n) { return Point{p, a, ExtNat(n)}; }

}  // namespace

TEST_CASE("build_point follows both branches") {
  auto cfg = load_sim_config(fixtures::sim_config(1, 3, 8));
  // a1 indexes b2 (target n = 1 mod 3) and b3 (target {0, 1}).
  for (Nat n = 0; n < 9; ++n) {
    const auto x = build_point(cfg, "p0", "a1", ExtNat(n));
    CHECK(x.at("b2") == (n % 3 == 1 ? 1 : 0));
    CHECK(x.at("b3") == (n < 2 ? 1 : 0));
    // b0 is outside I_a1 and has no map: f is 0 there.
    CHECK(x.at("b0") == 0);
    // b5 carries the even numbers on every column.
    CHECK(x.at("b5") == (n % 2 == 0 ? 1 : 0));
  }
  const auto limit = build_point(cfg, "p0", "a2", ExtNat::omega());
  CHECK(limit.at("b0") == 0);
  CHECK(limit.at("b4") == 1);
}

TEST_CASE("build_point needs targets") {
  auto j = fixtures::sim_config(1, 3, 4);
  j["targets"] = nlohmann::json::array();
  auto cfg = load_sim_config(j);
  CHECK_THROWS_AS(build_point(cfg, "p0", "a0", ExtNat(0)), MissingTarget);
  // a2 has an empty index set and needs no target.
  CHECK_NOTHROW(build_point(cfg, "p0", "a2", ExtNat(0)));
}

TEST_CASE("config load is strict") {
  auto bad_index = fixtures::sim_config(1, 2, 4);
  bad_index["index_sets"]["a0"].push_back("nowhere");
  CHECK_THROWS_AS(load_sim_config(bad_index), ParseError);

  auto incoherent = fixtures::sim_config(1, 2, 6);
  incoherent["coord_maps"]["b4"]["columns"][0]["omega_value"] = 0;
  CHECK_THROWS_AS(load_sim_config(incoherent), ParseError);
}

TEST_CASE("selective witness with an unconstrained box") {
  auto cfg = load_sim_config(fixtures::sim_config(1, 2, 6));
  const auto cert = witness_selective(cfg, "p0", {OpenBox{}});
  CHECK(cert.choices.size() == 1);
  CHECK(cert.support_union.empty());
  for (const auto& lc : cert.limits) {
    if (lc.which_case == 1) {
      CHECK(lc.cells[lc.decided_cell].first == lc.value);
    }
  }
}

TEST_CASE("selective witness with a pinned coordinate") {
  auto cfg = load_sim_config(fixtures::sim_config(1, 2, 6));
  std::vector<OpenBox> boxes(5, OpenBox{{{"b5", 1}}});
  const auto cert = witness_selective(cfg, "p0", boxes);
  CHECK(cert.allocated);
  CHECK(cert.index_set == std::set<CoordId>{"b5"});
  for (const auto& x : cert.choices) CHECK(x.at("b5") == 1);
  CHECK(cert.limit.at("b5") == 1);
  for (const auto& lc : cert.limits) {
    if (lc.coord != "b5") continue;
    CHECK(lc.which_case == 1);
    CHECK(lc.cells[lc.decided_cell].second == PeriodicSet::naturals());
  }
}

TEST_CASE("selective witness meets a single box") {
  auto cfg = load_sim_config(fixtures::sim_config(2, 2, 6));
  const OpenBox u{{{"b0", 1}, {"b3", 0}}};
  const auto cert = witness_selective(cfg, "p1", {u});
  for (const auto& [b, bit] : u.constraints) CHECK(cert.choices[0].at(b) == bit);
}

TEST_CASE("selective witness reuses a matching block") {
  auto cfg = load_sim_config(fixtures::sim_config(1, 2, 6));
  std::vector<OpenBox> boxes{OpenBox{{{"b0", 1}}}, OpenBox{{{"b0", 0}}}, OpenBox{{{"b0", 0}}}};
  // a0 indexes {b0, b1} with b0 = 0 mod 3 and b1 = {0, 1}; the minimal y has
  // b1 = 0, so a0 does not match and a fresh block is allocated.
  const auto first = witness_selective(cfg, "p0", boxes);
  CHECK(first.allocated);
  CHECK(first.index_set == std::set<CoordId>{"b0", "b1"});
  const auto second = witness_selective(cfg, "p0", boxes);
  CHECK_FALSE(second.allocated);
  CHECK(second.block == first.block);
}

TEST_CASE("fresh blocks respect capacity") {
  auto j = fixtures::sim_config(1, 2, 6);
  j["capacity"] = {{"generators", 2}};
  auto cfg = load_sim_config(j);
  CHECK_THROWS_AS(witness_selective(cfg, "p0", {OpenBox{{{"b5", 1}}}}), ConfigExhausted);
}

TEST_CASE("refutation needs a faithfully indexed family") {
  auto cfg = load_sim_config(fixtures::sim_config(1, 2, 6));
  const GroupElement e({z("p0", "a0", 0)});
  const std::vector<FamilyMember> family{{e, group_value(cfg, e)}, {e, group_value(cfg, e)}};
  CHECK_THROWS_AS(witness_no_convergence(cfg, family), NotFaithfullyIndexed);
}

TEST_CASE("refutation rejects a wrong sum") {
  auto cfg = load_sim_config(fixtures::sim_config(1, 2, 6));
  const GroupElement e({z("p0", "a0", 0)});
  auto g = group_value(cfg, e);
  g["b0"] ^= 1;
  CHECK_THROWS_AS(witness_no_convergence(cfg, {{e, g}}), InconsistentFamily);
}

TEST_CASE("refutation of singletons along one block") {
  auto cfg = load_sim_config(fixtures::sim_config(1, 2, 6));
  std::vector<FamilyMember> family;
  for (Nat m = 0; m < 40; ++m) {
    const GroupElement e({z("p0", "a1", m)});
    family.push_back({e, group_value(cfg, e)});
  }
  const auto cert = witness_no_convergence(cfg, family);
  CHECK(cert.blocks == std::set<GeneratorId>{"a1"});
  CHECK(cert.covered == std::set<CoordId>{"b2", "b3"});
  CHECK(cert.beta == "beta#0");
  CHECK(cert.guarantee == 40);
  CHECK(std::min(cert.class0.size(), cert.class1.size()) >= 19);
  CHECK(std::min(cert.class0.size(), cert.class1.size()) >= cert.guarantee / 2);
  for (std::size_t m = 0; m < family.size(); ++m) {
    CHECK(cert.values[m] == hom_eval(cert.split.map, family[m].support));
    CHECK(build_point(cfg, z("p0", "a1", m)).at(cert.beta) == cert.values[m]);
  }
}

TEST_CASE("single-member refutation is flagged") {
  auto cfg = load_sim_config(fixtures::sim_config(1, 2, 6));
  const GroupElement e({z("p0", "a0", 3)});
  const auto cert = witness_no_convergence(cfg, {{e, group_value(cfg, e)}});
  CHECK(cert.class0.size() == 1);
  CHECK(cert.class1.empty());
  CHECK(std::find(cert.flags.begin(), cert.flags.end(), kFlagInsufficientPrefix) != cert.flags.end());
}

TEST_CASE("group values add coordinatewise") {
  auto cfg = load_sim_config(fixtures::sim_config(2, 3, 8));
  const GroupElement e({z("p0", "a0", 1), z("p1", "a2", 4)});
  const GroupElement f({z("p1", "a1", 2), Point{"p0", "a1", ExtNat::omega()}});
  CHECK(group_value(cfg, e + f) == group_value(cfg, e) + group_value(cfg, f));
  const GroupElement both({z("p0", "a0", 1)});
  CHECK(group_value(cfg, both + both) == group_value(cfg, GroupElement()));
}
