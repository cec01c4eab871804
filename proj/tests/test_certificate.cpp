#include <random>

#include "doctest.h"

#include "cohsplit/certificate.hpp"
#include "cohsplit/generate.hpp"
#include "cohsplit/json_io.hpp"
#include "sim_fixtures.hpp"

using namespace cohsplit;

namespace {

template <class T>
T round_trip(const T& value) {
  return json::parse(json(value).dump()).get<T>();
}

RunManifest manifest(const std::string& command) { return RunManifest{command, {}, {}, std::uint64_t{1}}; }

json coherent_cert(StreamKind kind, std::size_t size, StarMode mode) {
  const auto stream = generate_stream(kind, size, 3);
  OracleBank bank;
  SplitParams params;
  params.mode = mode;
  return seal(kKindCoherentSplit, manifest("coherent-split"), json(coherent_split(stream, params, bank)));
}

}  // namespace

TEST_CASE("JSON encodings round-trip") {
  const PeriodicSet s(2, 3, {1}, {0});
  CHECK(json(s) == json::parse(R"({"threshold":2,"modulus":3,"residues":[1],"prefix":[0]})"));
  CHECK(round_trip(s) == s);

  const Point w{"p", "k", ExtNat::omega()};
  CHECK(json(w) == json::parse(R"({"p":"p","k":"k","n":"omega"})"));
  CHECK(round_trip(w) == w);
  const GroupElement a({w, Point{"p", "k", ExtNat(3)}});
  CHECK(json(a)[0]["n"] == 3);
  CHECK(round_trip(a) == a);

  TranscriptEntry e{"p", s, 1, s};
  CHECK(round_trip(e) == e);
  e.committed.reset();
  CHECK(json(e)["committed"].is_null());
  CHECK(round_trip(e) == e);

  const FeedReport steered{a, 1, FeedKind::steered, w};
  CHECK(round_trip(steered) == steered);
  const FeedReport forced{a, 0, FeedKind::forced, std::nullopt};
  CHECK(round_trip(forced) == forced);

  CoherentMap f;
  f.set_column(Column{"p", "k", s, 1});
  CHECK(round_trip(f) == f);

  const DenseGoal hit = Hit{{a}, 1};
  CHECK(round_trip(hit) == hit);
  const DenseGoal add = AddGenerator{"k"};
  CHECK(round_trip(add) == add);
}

TEST_CASE("strict decoding") {
  CHECK_THROWS_AS(decode<PeriodicSet>(json::parse(R"({"threshold":0,"modulus":0,"residues":[],"prefix":[]})"), "t"),
                  ParseError);
  CHECK_THROWS_AS(decode<Point>(json::parse(R"({"p":"p","k":"k","n":"infinity"})"), "t"), ParseError);
  CHECK_THROWS_AS(decode<Point>(json::parse(R"({"p":"p","k":"k","n":-1})"), "t"), ParseError);
  CHECK_THROWS_AS(decode<TranscriptEntry>(json::parse(R"({"oracle":"p"})"), "t"), ParseError);
  CHECK_THROWS_AS(parse_json_text("{", "t"), ParseError);
}

TEST_CASE("split certificates are deterministic and round-trip") {
  const auto stream = generate_stream(StreamKind::bucketed, 300, 2);
  OracleBank b1, b2;
  const auto c1 = split_finite_trace(stream, 0, b1);
  const auto c2 = split_finite_trace(stream, 0, b2);
  CHECK(json(c1) == json(c2));
  CHECK(round_trip(c1) == c1);

  OracleBank b3;
  SplitParams params;
  params.mode = StarMode::infinite;
  const auto rich = generate_stream(StreamKind::star_rich, 300, 2);
  const auto c3 = coherent_split(rich, params, b3);
  CHECK(round_trip(c3) == c3);
}

TEST_CASE("every kind verifies") {
  const auto stream = generate_stream(StreamKind::mixed, 200, 4);
  CHECK(verify_certificate(seal(kKindSplit, manifest("split"), run_split(stream))).ok);
  CHECK(verify_certificate(coherent_cert(StreamKind::star_rich, 300, StarMode::infinite)).ok);
  CHECK(verify_certificate(coherent_cert(StreamKind::bucketed, 300, StarMode::finite)).ok);
  CHECK(verify_certificate(coherent_cert(StreamKind::star_free, 300, StarMode::automatic)).ok);

  std::mt19937_64 rng(6);
  std::vector<ColumnSpec> specs;
  for (int i = 0; i < 20; ++i) {
    specs.push_back(ColumnSpec{"p" + std::to_string(i % 2), "k" + std::to_string(i),
                               PeriodicSet::residue_class(i % 3, 3)});
  }
  CHECK(verify_certificate(seal(kKindExtension, manifest("oracle-extend"), run_extension(specs, {}))).ok);

  const auto config = fixtures::sim_config(2, 3, 10);
  std::vector<OpenBox> boxes{OpenBox{{{"b0", 1}}}, OpenBox{{{"b7", 0}, {"b9", 1}}}};
  const auto selective = seal(kKindSelective, manifest("simulate-selective"), run_selective(config, "p1", boxes));
  const auto outcome = verify_certificate(selective);
  INFO(outcome.check << ": " << outcome.detail);
  CHECK(outcome.ok);

  std::vector<json> family;
  for (Nat m = 0; m < 30; ++m) family.push_back(json{{"E", GroupElement({Point{"p0", "a2", ExtNat(m)}})}});
  const auto refute = seal(kKindRefute, manifest("simulate-refute"), run_refute(config, family));
  const auto r = verify_certificate(refute);
  INFO(r.check << ": " << r.detail);
  CHECK(r.ok);
}

TEST_CASE("semantic tampering names the failing check") {
  auto cert = coherent_cert(StreamKind::star_rich, 200, StarMode::infinite);
  REQUIRE(verify_certificate(cert).ok);

  auto values = cert;
  values["body"]["values"][0] = 1 - values["body"]["values"][0].get<int>();
  values["digest"] = certificate_digest(values);
  CHECK(verify_certificate(values).check == "group-evaluation");

  auto transcript = cert;
  auto& oracles = transcript["body"]["transcripts"];
  const auto id = oracles.begin().key();
  oracles[id][0]["answer"] = 1 - oracles[id][0]["answer"].get<int>();
  transcript["digest"] = certificate_digest(transcript);
  CHECK(verify_certificate(transcript).check == "oracle-transcript");

  auto guarantee = cert;
  guarantee["body"]["guarantee"] = guarantee["body"]["guarantee"].get<int>() + 2;
  guarantee["digest"] = certificate_digest(guarantee);
  CHECK_FALSE(verify_certificate(guarantee).ok);

  auto manifest_only = cert;
  manifest_only["manifest"]["command"] = "other";
  CHECK(verify_certificate(manifest_only).check == "digest");

  auto unknown = cert;
  unknown["kind"] = "nothing";
  CHECK(verify_certificate(unknown).check == "schema");
}

TEST_CASE("single-bit flips are detected") {
  const auto text = coherent_cert(StreamKind::bucketed, 60, StarMode::finite).dump() + "\n";
  REQUIRE(verify_certificate_text(text).ok);
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    auto flipped = text;
    const std::size_t pos = rng() % flipped.size();
    flipped[pos] = static_cast<char>(flipped[pos] ^ (1 << (rng() % 8)));
    REQUIRE_FALSE(verify_certificate_text(flipped).ok);
  }
}
