#include "cohsplit/certificate.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>

#include "cohsplit/json_io.hpp"

namespace cohsplit {

void to_json(json& j, const RunManifest& m) {
  j = json{{"command", m.command},
           {"inputs", m.inputs},
           {"flags", m.flags},
           {"seed", m.seed ? json(*m.seed) : json(nullptr)},
           {"tool_version", m.tool_version}};
}

void from_json(const json& j, RunManifest& m) {
  m.command = j.at("command").get<std::string>();
  m.inputs = j.at("inputs").get<std::vector<std::string>>();
  m.flags = j.at("flags").get<std::map<std::string, std::string>>();
  m.seed.reset();
  if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw InvariantViolation("sha256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string certificate_digest(const json& cert) {
  const json covered{{"kind", cert.at("kind")},
                     {"manifest", cert.at("manifest")},
                     {"body", cert.at("body")}};
  return sha256_hex(covered.dump());
}

json seal(const std::string& kind, const RunManifest& manifest, json body) {
  json cert{{"kind", kind}, {"manifest", manifest}, {"body", std::move(body)}};
  cert["digest"] = certificate_digest(cert);
  return cert;
}

namespace {

json commitments_json(const std::map<UltrafilterId, std::vector<PeriodicSet>>& m) {
  json out = json::object();
  for (const auto& [id, sets] : m) out[id] = sets;
  return out;
}

json transcripts_json(const std::map<UltrafilterId, std::vector<TranscriptEntry>>& m) {
  json out = json::object();
  for (const auto& [id, entries] : m) out[id] = entries;
  return out;
}

std::map<UltrafilterId, std::vector<PeriodicSet>> commitments_from(const json& j) {
  std::map<UltrafilterId, std::vector<PeriodicSet>> out;
  for (const auto& [id, sets] : j.items()) out[id] = sets.get<std::vector<PeriodicSet>>();
  return out;
}

std::map<UltrafilterId, std::vector<TranscriptEntry>> transcripts_from(const json& j) {
  std::map<UltrafilterId, std::vector<TranscriptEntry>> out;
  for (const auto& [id, entries] : j.items()) out[id] = entries.get<std::vector<TranscriptEntry>>();
  return out;
}

OracleBank bank_from(const std::map<UltrafilterId, std::vector<PeriodicSet>>& initial) {
  OracleBank bank;
  for (const auto& [id, sets] : initial) bank.insert(OracleState(id, sets));
  return bank;
}

}  // namespace

json split_body(const std::vector<GroupElement>& elements, const SplitterState& state) {
  return json{{"elements", elements},
              {"reports", state.log()},
              {"map", state.finalize()},
              {"count0", state.count0()},
              {"count1", state.count1()},
              {"steered", state.steered()}};
}

json run_split(const std::vector<GroupElement>& elements) {
  SplitterState state;
  for (const auto& a : elements) state.feed(a);
  return split_body(elements, state);
}

json extension_body(const std::vector<ColumnSpec>& specs, const std::vector<Column>& columns,
                    const std::map<UltrafilterId, std::vector<PeriodicSet>>& initial,
                    const std::map<UltrafilterId, std::vector<TranscriptEntry>>& transcripts) {
  return json{{"specs", specs},
              {"columns", columns},
              {"initial_commitments", commitments_json(initial)},
              {"transcripts", transcripts_json(transcripts)}};
}

json run_extension(const std::vector<ColumnSpec>& specs,
                   const std::map<UltrafilterId, std::vector<PeriodicSet>>& initial) {
  OracleBank bank = bank_from(initial);
  const auto mark = bank.mark();
  const auto columns = extend_coherently(specs, bank);
  return extension_body(specs, columns, initial, bank.transcripts_since(mark));
}

json selective_body(const json& config, const SelectiveCertificate& cert) {
  return json{{"config", config}, {"certificate", cert}};
}

json refute_body(const json& config, const RefutationCertificate& cert) {
  return json{{"config", config}, {"certificate", cert}};
}

json run_selective(const json& config, const UltrafilterId& p, const std::vector<OpenBox>& boxes) {
  SimConfig cfg = load_sim_config(config);
  return selective_body(config, witness_selective(cfg, p, boxes));
}

json run_refute(const json& config, const std::vector<json>& family) {
  SimConfig cfg = load_sim_config(config);
  const auto members = load_family(cfg, family);
  return refute_body(config, witness_no_convergence(cfg, members));
}

namespace {

struct CheckFailure {
  std::string detail;
};

// Names the check that is running; any exception escaping it fails that check.
class Checker {
 public:
  void stage(std::string name) { stage_ = std::move(name); }
  const std::string& current() const noexcept { return stage_; }

  void require(bool condition, const std::string& detail) const {
    if (!condition) throw CheckFailure{detail};
  }

 private:
  std::string stage_ = "schema";
};

OracleBank replay(Checker& c, const std::map<UltrafilterId, std::vector<PeriodicSet>>& initial,
                  const std::map<UltrafilterId, std::vector<TranscriptEntry>>& transcripts) {
  c.stage("oracle-transcript");
  OracleBank bank;
  for (const auto& [id, sets] : initial) {
    try {
      bank.insert(OracleState(id, sets));
    } catch (const std::invalid_argument& e) {
      throw CheckFailure{"initial commitments of " + id + ": " + e.what()};
    }
  }
  for (const auto& [id, entries] : transcripts) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      c.require(entries[i].oracle == id, "entry " + std::to_string(i) + " of " + id +
                                             " names oracle " + entries[i].oracle);
    }
    if (auto bad = replay_transcript(bank.at(id), entries)) {
      throw CheckFailure{"oracle " + id + " diverges at entry " + std::to_string(*bad)};
    }
  }
  return bank;
}

// The replayed oracle has decided s into p.
bool settled(const OracleBank& bank, const UltrafilterId& p, const PeriodicSet& s) {
  const auto* state = bank.find(p);
  if (!state) return s == PeriodicSet::naturals();
  return is_subset(state->meet(), s);
}

void check_classes(Checker& c, const std::vector<Bit>& values, const std::vector<std::size_t>& class0,
                   const std::vector<std::size_t>& class1) {
  std::vector<std::size_t> expect[2];
  for (std::size_t i = 0; i < values.size(); ++i) expect[values[i] & 1].push_back(i);
  c.require(expect[0] == class0, "class0 does not list the elements valued 0");
  c.require(expect[1] == class1, "class1 does not list the elements valued 1");
}

std::vector<std::string> expected_flags(const SplitCertificate& cert) {
  std::vector<std::string> flags;
  if (cert.path == SplitPath::finite && cert.finite_trace &&
      cert.finite_trace->buckets.size() > default_auto_threshold(cert.elements.size())) {
    flags.push_back(kFlagManyStarTraces);
  }
  if (cert.class0.empty() || cert.class1.empty()) flags.push_back(kFlagInsufficientPrefix);
  return flags;
}

void check_finite_trace(Checker& c, const SplitCertificate& cert) {
  c.stage("finite-trace");
  c.require(cert.finite_trace.has_value(), "finite path without its trace record");
  c.require(cert.chain.empty(), "finite path with a forcing chain");
  const auto& rec = *cert.finite_trace;

  std::map<GroupElement, std::vector<std::size_t>> by_trace;
  for (std::size_t i = 0; i < cert.elements.size(); ++i) {
    by_trace[star_trace(cert.elements[i])].push_back(i);
  }
  std::vector<TraceBucket> buckets;
  auto best = by_trace.begin();
  for (auto it = by_trace.begin(); it != by_trace.end(); ++it) {
    buckets.push_back(TraceBucket{it->first, it->second.size()});
    if (it->second.size() > best->second.size()) best = it;
  }
  c.require(rec.buckets == buckets, "bucket statistics do not match the elements");
  c.require(best != by_trace.end() && rec.trace == best->first,
            "I is not the trace of the largest bucket");
  c.require(rec.dominant == best->second, "dominant positions do not match I");
  c.require(rec.trace_value == hom_eval(cert.map, rec.trace), "j is not f~(I)");

  SplitterState splitter;
  for (std::size_t i : rec.dominant) {
    const auto& a = cert.elements[i];
    const auto rest = set_minus(a, rec.trace);
    c.require(hom_eval(cert.map, a) == (hom_eval(cert.map, rest) ^ rec.trace_value),
              "f~(a) != f~(a \\ I) + j at element " + std::to_string(i));
    if (!rest.empty()) splitter.feed(rest);
  }
  c.require(splitter.log() == rec.reports, "splitter reports do not replay");
  c.require(splitter.steered() == rec.steered, "steered count does not replay");
  for (const auto& report : rec.reports) {
    c.require(hom_eval(cert.map, report.element) == report.value,
              "map disagrees with the splitter on " + to_string(report.element));
  }
  c.require(cert.guarantee == rec.steered, "guarantee is not the steered count");
}

void check_chain(Checker& c, const SplitCertificate& cert) {
  c.stage("chain");
  c.require(!cert.finite_trace.has_value(), "infinite path with a trace record");
  Condition r;
  for (std::size_t t = 0; t < cert.chain.size(); ++t) {
    const auto& step = cert.chain[t];
    const auto where = "step " + std::to_string(t);
    for (const auto& column : step.new_columns) {
      c.require(!r.columns.contains(column.key()), where + " rewrites an existing column");
    }
    Condition q = apply_step(r, step);
    c.require(q.well_formed(), where + " leaves columns off P x K");
    c.require(leq(q, r), where + " does not extend its predecessor");
    if (const auto* add = std::get_if<AddUltrafilter>(&step.goal)) {
      c.require(q.ultrafilters.contains(add->p), where + " misses its ultrafilter");
    } else if (const auto* add = std::get_if<AddGenerator>(&step.goal)) {
      c.require(q.generators.contains(add->k), where + " misses its generator");
    } else {
      const auto& hit = std::get<Hit>(step.goal);
      c.require(step.witness.has_value(), where + " has no witness");
      const auto& w = *step.witness;
      c.require(w.index < cert.elements.size(), where + " witness out of range");
      const auto& a = cert.elements[w.index];
      c.require(std::find(hit.avoid.begin(), hit.avoid.end(), a) == hit.avoid.end(),
                where + " witness lies in the avoided set");
      c.require(q.covers(a) && q.eval(a) == hit.parity, where + " witness misses its parity");
      if (w.kind == WitnessKind::reused) {
        c.require(q == r, where + " reuses a witness but changes the condition");
      } else {
        c.require(w.steering.has_value(), where + " fresh witness without steering point");
        const Point& x = *w.steering;
        c.require(x.is_star() && a.contains(x), where + " steering point is not a star point of a");
        c.require(!(r.ultrafilters.contains(x.p) && r.generators.contains(x.k)),
                  where + " steering point lies in P^r x K^r x {omega}");
        for (const auto& b : hit.avoid) {
          c.require(!b.contains(x), where + " steering point lies in the avoided set");
        }
      }
    }
    r = std::move(q);
  }
  c.require(r.as_map() == cert.map, "final condition differs from the map");
  c.require(cert.guarantee == witness_guarantee(cert.chain), "guarantee does not match witnesses");
}

void check_split_certificate(Checker& c, const SplitCertificate& cert) {
  const OracleBank bank = replay(c, cert.initial_commitments, cert.transcripts);

  c.stage("coherence");
  for (const auto& [key, column] : cert.map.columns()) {
    c.require(key == column.key(), "column stored under the wrong key");
    c.require(settled(bank, column.p, column.agreement_set()),
              "column (" + column.p + "," + column.k + ") is not decided coherent");
  }

  c.stage("group-evaluation");
  c.require(cert.values.size() == cert.elements.size(), "one value per element expected");
  std::set<GroupElement> distinct(cert.elements.begin(), cert.elements.end());
  c.require(distinct.size() == cert.elements.size(), "elements repeat");
  for (std::size_t i = 0; i < cert.elements.size(); ++i) {
    c.require(hom_eval(cert.map, cert.elements[i]) == cert.values[i],
              "value of element " + std::to_string(i) + " does not replay");
  }
  check_classes(c, cert.values, cert.class0, cert.class1);
  c.require(cert.star_points == distinct_star_points(cert.elements), "star point count is wrong");

  if (cert.path == SplitPath::finite) {
    check_finite_trace(c, cert);
  } else {
    check_chain(c, cert);
  }

  c.stage("balance");
  c.require(std::min(cert.class0.size(), cert.class1.size()) >= cert.balance_floor(),
            "a class is smaller than floor(s/2)");

  c.stage("flags");
  c.require(cert.flags == expected_flags(cert), "flags do not match the run statistics");
  if (cert.params) {
    c.require(cert.params->cutoff == cert.elements.size(), "cutoff does not match the prefix");
    c.require(cert.params->auto_threshold.has_value(), "auto threshold not recorded");
    const auto mode = cert.params->mode;
    const bool infinite =
        mode == StarMode::infinite ||
        (mode == StarMode::automatic && cert.star_points > *cert.params->auto_threshold);
    c.require(infinite == (cert.path == SplitPath::infinite), "path does not follow the mode");
  }
}

SplitCertificate reproduce_split(const SplitCertificate& cert) {
  OracleBank bank = bank_from(cert.initial_commitments);
  if (cert.params) return coherent_split(cert.elements, *cert.params, bank);
  if (cert.path == SplitPath::finite) return split_finite_trace(cert.elements, 0, bank);
  std::vector<DenseGoal> schedule;
  for (const auto& step : cert.chain) schedule.push_back(step.goal);
  return forcing_split(cert.elements, schedule, bank);
}

void verify_split(Checker& c, const json& body) {
  const auto elements = body.at("elements").get<std::vector<GroupElement>>();
  const auto reports = body.at("reports").get<std::vector<FeedReport>>();
  const auto map = body.at("map").get<TwoValuedMap>();
  const auto count0 = body.at("count0").get<std::size_t>();
  const auto count1 = body.at("count1").get<std::size_t>();
  const auto steered = body.at("steered").get<std::size_t>();

  c.stage("group-evaluation");
  c.require(reports.size() == elements.size(), "one report per element expected");
  std::size_t counts[2] = {0, 0};
  std::size_t steers = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    c.require(reports[i].element == elements[i], "report " + std::to_string(i) + " names another element");
    c.require(hom_eval(map, elements[i]) == reports[i].value,
              "value of element " + std::to_string(i) + " does not replay");
    ++counts[reports[i].value & 1];
    if (reports[i].kind == FeedKind::steered) ++steers;
  }
  c.require(counts[0] == count0 && counts[1] == count1, "class counts do not match the reports");
  c.require(steers == steered, "steered count does not match the reports");

  c.stage("balance");
  c.require(std::min(count0, count1) >= steered / 2, "a class is smaller than floor(s/2)");

  c.stage("reproduction");
  c.require(run_split(elements) == body, "re-running the splitter gives a different body");
}

void verify_extension(Checker& c, const json& body) {
  const auto specs = body.at("specs").get<std::vector<ColumnSpec>>();
  const auto columns = body.at("columns").get<std::vector<Column>>();
  const auto initial = commitments_from(body.at("initial_commitments"));
  const auto transcripts = transcripts_from(body.at("transcripts"));

  const OracleBank bank = replay(c, initial, transcripts);
  c.stage("coherence");
  c.require(specs.size() == columns.size(), "one column per spec expected");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    c.require(columns[i].p == specs[i].p && columns[i].k == specs[i].k &&
                  columns[i].values_one_set == specs[i].values_one_set,
              "column " + std::to_string(i) + " does not extend its spec");
    c.require(settled(bank, columns[i].p, columns[i].agreement_set()),
              "column " + std::to_string(i) + " is not decided coherent");
  }

  c.stage("reproduction");
  c.require(run_extension(specs, initial) == body, "re-extension gives a different body");
}

void verify_coherent_split(Checker& c, const json& body) {
  const auto cert = body.get<SplitCertificate>();
  check_split_certificate(c, cert);
  c.stage("reproduction");
  c.require(json(reproduce_split(cert)) == body, "re-running the split gives a different body");
}

void verify_selective(Checker& c, const json& body) {
  const auto& config = body.at("config");
  const auto cert = body.at("certificate").get<SelectiveCertificate>();
  const OracleBank bank = replay(c, cert.initial_commitments, cert.transcripts);

  c.stage("membership");
  c.require(!cert.boxes.empty(), "no boxes");
  c.require(cert.choices.size() == cert.boxes.size(), "one choice per box expected");
  std::set<CoordId> support;
  for (std::size_t n = 0; n < cert.boxes.size(); ++n) {
    for (const auto& [b, bit] : cert.boxes[n].constraints) {
      support.insert(b);
      auto it = cert.choices[n].find(b);
      c.require(it != cert.choices[n].end() && it->second == bit,
                "choice " + std::to_string(n) + " is outside its box at " + b);
    }
  }
  c.require(support == cert.support_union, "J is not the union of the supports");
  c.require(std::includes(cert.index_set.begin(), cert.index_set.end(), support.begin(),
                          support.end()),
            "the index set does not contain J");
  for (const auto& b : cert.index_set) {
    auto target = cert.targets.find(b);
    c.require(target != cert.targets.end(), "no target at " + b);
    for (std::size_t n = 0; n < cert.choices.size(); ++n) {
      c.require(cert.choices[n].at(b) == (target->second.contains(n) ? 1 : 0),
                "choice " + std::to_string(n) + " leaves its target at " + b);
    }
  }

  c.stage("limit-certificates");
  c.require(cert.limits.size() == cert.limit.size(), "one limit certificate per coordinate");
  for (const auto& lc : cert.limits) {
    auto it = cert.limit.find(lc.coord);
    c.require(it != cert.limit.end() && it->second == lc.value,
              "limit point disagrees at " + lc.coord);
    for (const auto& x : cert.choices) {
      c.require(x.contains(lc.coord), "choices and limit use different coordinates");
    }
    if (lc.which_case == 1) {
      c.require(cert.index_set.contains(lc.coord), lc.coord + " is certified as inside I_a");
      c.require(lc.cells == bit_partition(cert.targets.at(lc.coord)).cells,
                "cells at " + lc.coord + " are not the target's");
      c.require(lc.decided_cell < lc.cells.size(), "decided cell out of range");
      c.require(settled(bank, cert.p, lc.cells[lc.decided_cell].second),
                "cell at " + lc.coord + " is not decided into p");
      c.require(lc.cells[lc.decided_cell].first == lc.value, "limit label mismatch at " + lc.coord);
    } else {
      c.require(!cert.index_set.contains(lc.coord), lc.coord + " is certified as outside I_a");
      c.require(lc.column && lc.column->p == cert.p && lc.column->k == cert.block,
                "column at " + lc.coord + " belongs to another pair");
      c.require(settled(bank, cert.p, lc.column->agreement_set()),
                "column at " + lc.coord + " is not decided coherent");
      c.require(lc.column->omega_value == lc.value, "limit value mismatch at " + lc.coord);
      for (std::size_t n = 0; n < cert.choices.size(); ++n) {
        c.require(cert.choices[n].at(lc.coord) == lc.column->value_at(ExtNat(n)),
                  "choice " + std::to_string(n) + " leaves f_b at " + lc.coord);
      }
    }
  }

  c.stage("reproduction");
  c.require(run_selective(config, cert.p, cert.boxes) == body,
            "re-running the selection gives a different body");
}

void verify_refute(Checker& c, const json& body) {
  const auto& config = body.at("config");
  const auto cert = body.at("certificate").get<RefutationCertificate>();
  check_split_certificate(c, cert.split);

  c.stage("refutation");
  c.require(cert.split.elements.size() == cert.family.size(), "split runs on another stream");
  std::set<GeneratorId> blocks;
  for (std::size_t m = 0; m < cert.family.size(); ++m) {
    const auto& e = cert.family[m].support;
    c.require(cert.split.elements[m] == e, "split runs on another stream");
    for (const Point& x : e) blocks.insert(x.k);
    c.require(cert.values[m] == hom_eval(cert.split.map, e),
              "g_" + std::to_string(m) + "(beta) != f~_beta(E_" + std::to_string(m) + ")");
  }
  c.require(cert.values.size() == cert.family.size(), "one value per member expected");
  c.require(blocks == cert.blocks, "J is not the set of blocks used by the family");
  std::set<CoordId> covered;
  if (config.contains("index_sets")) {
    for (const auto& a : blocks) {
      if (!config.at("index_sets").contains(a)) continue;
      const auto set = config.at("index_sets").at(a).get<std::set<CoordId>>();
      covered.insert(set.begin(), set.end());
    }
  }
  c.require(covered == cert.covered, "I is not the union of the index sets over J");
  c.require(!cert.covered.contains(cert.beta), "beta lies in I");
  c.require(!config.at("coords").get<std::set<CoordId>>().contains(cert.beta), "beta is not fresh");
  check_classes(c, cert.values, cert.class0, cert.class1);
  c.require(cert.guarantee == cert.split.guarantee && cert.flags == cert.split.flags,
            "summary differs from the split");

  c.stage("balance");
  c.require(std::min(cert.class0.size(), cert.class1.size()) >= cert.guarantee / 2,
            "a class is smaller than floor(s/2)");

  c.stage("reproduction");
  std::vector<json> family;
  for (const auto& m : cert.family) family.push_back(m);
  c.require(run_refute(config, family) == body, "re-running the refutation gives a different body");
}

}  // namespace

VerifyOutcome verify_certificate(const json& cert) {
  Checker c;
  try {
    c.stage("schema");
    c.require(cert.is_object(), "certificate must be an object");
    for (const char* key : {"kind", "manifest", "body", "digest"}) {
      c.require(cert.contains(key), std::string("missing \"") + key + "\"");
    }
    c.require(cert.size() == 4, "unexpected top-level fields");
    const auto kind = cert.at("kind").get<std::string>();
    (void)cert.at("manifest").get<RunManifest>();
    const auto& body = cert.at("body");
    c.require(body.is_object(), "body must be an object");

    if (kind == kKindSplit) {
      verify_split(c, body);
    } else if (kind == kKindExtension) {
      verify_extension(c, body);
    } else if (kind == kKindCoherentSplit) {
      verify_coherent_split(c, body);
    } else if (kind == kKindSelective) {
      verify_selective(c, body);
    } else if (kind == kKindRefute) {
      verify_refute(c, body);
    } else {
      throw CheckFailure{"unknown kind " + kind};
    }

    c.stage("digest");
    c.require(cert.at("digest").is_string() && cert.at("digest").get<std::string>() ==
                                                   certificate_digest(cert),
              "digest does not match the content");
    return VerifyOutcome{};
  } catch (const CheckFailure& f) {
    return VerifyOutcome{false, c.current(), f.detail};
  } catch (const std::exception& e) {
    return VerifyOutcome{false, c.current(), e.what()};
  }
}

VerifyOutcome verify_certificate_text(const std::string& text) {
  json cert;
  try {
    cert = json::parse(text);
  } catch (const json::exception& e) {
    return VerifyOutcome{false, "parse", e.what()};
  }
  return verify_certificate(cert);
}

}  // namespace cohsplit
