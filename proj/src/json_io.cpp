#include "cohsplit/json_io.hpp"

#include <fstream>
#include <sstream>

namespace cohsplit {

Bit bit_from_json(const json& j) {
  const auto v = j.get<int>();
  if (v != 0 && v != 1) throw ParseError("expected a bit, got " + j.dump());
  return static_cast<Bit>(v);
}

namespace {

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

template <class T>
json optional_to(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void to_json(json& j, const PeriodicSet& s) {
  j = json{{"threshold", s.threshold()},
           {"modulus", s.modulus()},
           {"residues", s.residues()},
           {"prefix", s.prefix()}};
}

void from_json(const json& j, PeriodicSet& s) {
  try {
    s = PeriodicSet(j.at("threshold").get<Nat>(), j.at("modulus").get<Nat>(),
                    j.at("residues").get<std::vector<Nat>>(),
                    j.at("prefix").get<std::vector<Nat>>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("periodic set: ") + e.what());
  }
}

void to_json(json& j, const ExtNat& n) {
  if (n.is_omega()) {
    j = "omega";
  } else {
    j = n.value();
  }
}

void from_json(const json& j, ExtNat& n) {
  if (j.is_string()) {
    if (j.get<std::string>() != "omega") throw ParseError("bad extended natural " + j.dump());
    n = ExtNat::omega();
    return;
  }
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw ParseError("bad extended natural " + j.dump());
  }
  try {
    n = ExtNat(j.get<Nat>());
  } catch (const std::out_of_range& e) {
    throw ParseError(e.what());
  }
}

void to_json(json& j, const Point& x) { j = json{{"p", x.p}, {"k", x.k}, {"n", x.n}}; }

void from_json(const json& j, Point& x) {
  x.p = j.at("p").get<std::string>();
  x.k = j.at("k").get<std::string>();
  x.n = j.at("n").get<ExtNat>();
}

void to_json(json& j, const GroupElement& a) { j = a.points(); }

void from_json(const json& j, GroupElement& a) {
  if (!j.is_array()) throw ParseError("group element must be an array of points");
  a = GroupElement(j.get<std::vector<Point>>());
}

void to_json(json& j, const TwoValuedMap& f) {
  json assignments = json::array();
  for (const auto& [x, v] : f.assignments()) {
    assignments.push_back(json{{"point", x}, {"value", v}});
  }
  j = json{{"assignments", std::move(assignments)}, {"default", optional_to(f.default_value())}};
}

void from_json(const json& j, TwoValuedMap& f) {
  std::optional<Bit> fallback;
  if (j.contains("default") && !j.at("default").is_null()) {
    fallback = bit_from_json(j.at("default"));
  }
  f = TwoValuedMap(fallback);
  for (const auto& entry : j.at("assignments")) {
    f.assign(entry.at("point").get<Point>(), bit_from_json(entry.at("value")));
  }
}

void to_json(json& j, const TranscriptEntry& e) {
  j = json{{"oracle", e.oracle},
           {"query", e.query},
           {"answer", e.answer},
           {"committed", optional_to(e.committed)}};
}

void from_json(const json& j, TranscriptEntry& e) {
  e.oracle = j.at("oracle").get<std::string>();
  e.query = j.at("query").get<PeriodicSet>();
  e.answer = bit_from_json(j.at("answer"));
  e.committed = optional_from<PeriodicSet>(j, "committed");
}

void to_json(json& j, const FeedReport& r) {
  j = json{{"element", r.element},
           {"value", r.value},
           {"kind", r.kind == FeedKind::steered ? "steered" : "forced"}};
  if (r.steering) j["point"] = *r.steering;
}

void from_json(const json& j, FeedReport& r) {
  r.element = j.at("element").get<GroupElement>();
  r.value = bit_from_json(j.at("value"));
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "steered") {
    r.kind = FeedKind::steered;
    r.steering = j.at("point").get<Point>();
  } else if (kind == "forced") {
    r.kind = FeedKind::forced;
    if (j.contains("point")) throw ParseError("forced report carries a steering point");
    r.steering.reset();
  } else {
    throw ParseError("unknown feed kind " + kind);
  }
}

void to_json(json& j, const Column& c) {
  j = json{{"p", c.p},
           {"k", c.k},
           {"values_one_set", c.values_one_set},
           {"omega_value", c.omega_value}};
}

void from_json(const json& j, Column& c) {
  c.p = j.at("p").get<std::string>();
  c.k = j.at("k").get<std::string>();
  c.values_one_set = j.at("values_one_set").get<PeriodicSet>();
  c.omega_value = bit_from_json(j.at("omega_value"));
}

void to_json(json& j, const ColumnSpec& c) {
  j = json{{"p", c.p}, {"k", c.k}, {"values_one_set", c.values_one_set}};
}

void from_json(const json& j, ColumnSpec& c) {
  c.p = j.at("p").get<std::string>();
  c.k = j.at("k").get<std::string>();
  c.values_one_set = j.at("values_one_set").get<PeriodicSet>();
}

void to_json(json& j, const CoherentMap& f) {
  json columns = json::array();
  for (const auto& [key, c] : f.columns()) columns.push_back(c);
  j = json{{"columns", std::move(columns)}, {"default", 0}};
}

void from_json(const json& j, CoherentMap& f) {
  if (j.contains("default") && bit_from_json(j.at("default")) != 0) {
    throw ParseError("coherent maps default to 0 outside their columns");
  }
  f = CoherentMap();
  for (const auto& c : j.at("columns")) {
    auto column = c.get<Column>();
    if (f.find(column.key())) throw ParseError("duplicate column (" + column.p + "," + column.k + ")");
    f.set_column(std::move(column));
  }
}

void to_json(json& j, const Condition& q) {
  json columns = json::array();
  for (const auto& [key, c] : q.columns) columns.push_back(c);
  j = json{{"ultrafilters", q.ultrafilters},
           {"generators", q.generators},
           {"columns", std::move(columns)}};
}

void from_json(const json& j, Condition& q) {
  q.ultrafilters = j.at("ultrafilters").get<std::set<UltrafilterId>>();
  q.generators = j.at("generators").get<std::set<GeneratorId>>();
  q.columns.clear();
  for (const auto& c : j.at("columns")) {
    auto column = c.get<Column>();
    q.columns.emplace(column.key(), std::move(column));
  }
}

void to_json(json& j, const DenseGoal& goal) {
  if (const auto* g = std::get_if<AddUltrafilter>(&goal)) {
    j = json{{"type", "add_ultrafilter"}, {"p", g->p}};
  } else if (const auto* g = std::get_if<AddGenerator>(&goal)) {
    j = json{{"type", "add_generator"}, {"k", g->k}};
  } else {
    const auto& hit = std::get<Hit>(goal);
    j = json{{"type", "hit"}, {"parity", hit.parity}, {"avoid", hit.avoid}};
  }
}

void from_json(const json& j, DenseGoal& goal) {
  const auto type = j.at("type").get<std::string>();
  if (type == "add_ultrafilter") {
    goal = AddUltrafilter{j.at("p").get<std::string>()};
  } else if (type == "add_generator") {
    goal = AddGenerator{j.at("k").get<std::string>()};
  } else if (type == "hit") {
    goal = Hit{j.at("avoid").get<std::vector<GroupElement>>(), bit_from_json(j.at("parity"))};
  } else {
    throw ParseError("unknown goal type " + type);
  }
}

void to_json(json& j, const HitWitness& w) {
  j = json{{"index", w.index},
           {"kind", w.kind == WitnessKind::fresh ? "fresh" : "reused"},
           {"steering", optional_to(w.steering)}};
}

void from_json(const json& j, HitWitness& w) {
  w.index = j.at("index").get<std::size_t>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "fresh" && kind != "reused") throw ParseError("unknown witness kind " + kind);
  w.kind = kind == "fresh" ? WitnessKind::fresh : WitnessKind::reused;
  w.steering = optional_from<Point>(j, "steering");
}

void to_json(json& j, const ChainStep& step) {
  j = json{{"goal", step.goal},
           {"added_ultrafilters", step.added_ultrafilters},
           {"added_generators", step.added_generators},
           {"new_columns", step.new_columns},
           {"witness", optional_to(step.witness)}};
}

void from_json(const json& j, ChainStep& step) {
  step.goal = j.at("goal").get<DenseGoal>();
  step.added_ultrafilters = j.at("added_ultrafilters").get<std::vector<UltrafilterId>>();
  step.added_generators = j.at("added_generators").get<std::vector<GeneratorId>>();
  step.new_columns = j.at("new_columns").get<std::vector<Column>>();
  step.witness = optional_from<HitWitness>(j, "witness");
}

std::string to_string(StarMode mode) {
  switch (mode) {
    case StarMode::finite:
      return "finite";
    case StarMode::infinite:
      return "infinite";
    case StarMode::automatic:
      return "auto";
  }
  return "auto";
}

StarMode star_mode_from_string(const std::string& s) {
  if (s == "finite") return StarMode::finite;
  if (s == "infinite") return StarMode::infinite;
  if (s == "auto") return StarMode::automatic;
  throw ParseError("unknown star mode " + s);
}

void to_json(json& j, const SplitParams& p) {
  j = json{{"cutoff", p.cutoff},
           {"mode", to_string(p.mode)},
           {"hit_goals", optional_to(p.hit_goals)},
           {"auto_threshold", optional_to(p.auto_threshold)}};
}

void from_json(const json& j, SplitParams& p) {
  p.cutoff = j.at("cutoff").get<std::size_t>();
  p.mode = star_mode_from_string(j.at("mode").get<std::string>());
  p.hit_goals = optional_from<std::size_t>(j, "hit_goals");
  p.auto_threshold = optional_from<std::size_t>(j, "auto_threshold");
}

void to_json(json& j, const FiniteTraceRecord& r) {
  json buckets = json::array();
  for (const auto& b : r.buckets) buckets.push_back(json{{"trace", b.trace}, {"count", b.count}});
  j = json{{"trace", r.trace},
           {"trace_value", r.trace_value},
           {"buckets", std::move(buckets)},
           {"dominant", r.dominant},
           {"reports", r.reports},
           {"steered", r.steered}};
}

void from_json(const json& j, FiniteTraceRecord& r) {
  r.trace = j.at("trace").get<GroupElement>();
  r.trace_value = bit_from_json(j.at("trace_value"));
  r.buckets.clear();
  for (const auto& b : j.at("buckets")) {
    r.buckets.push_back(TraceBucket{b.at("trace").get<GroupElement>(), b.at("count").get<std::size_t>()});
  }
  r.dominant = j.at("dominant").get<std::vector<std::size_t>>();
  r.reports = j.at("reports").get<std::vector<FeedReport>>();
  r.steered = j.at("steered").get<std::size_t>();
}

namespace {

// Hit goals in a certificate name avoided stream elements by position; only
// elements outside the stream are spelled out.
json chain_to_json(const std::vector<ChainStep>& chain, const std::vector<GroupElement>& elements) {
  std::map<GroupElement, std::size_t> position;
  for (std::size_t i = 0; i < elements.size(); ++i) position.emplace(elements[i], i);
  json out = json::array();
  for (const auto& step : chain) {
    json s = step;
    if (const auto* hit = std::get_if<Hit>(&step.goal)) {
      json indices = json::array();
      json extra = json::array();
      for (const auto& b : hit->avoid) {
        auto it = position.find(b);
        if (it != position.end()) {
          indices.push_back(it->second);
        } else {
          extra.push_back(b);
        }
      }
      s["goal"] = json{{"type", "hit"},
                       {"parity", hit->parity},
                       {"avoid_indices", std::move(indices)},
                       {"avoid_extra", std::move(extra)}};
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ChainStep> chain_from_json(const json& j, const std::vector<GroupElement>& elements) {
  std::vector<ChainStep> chain;
  for (const auto& s : j) {
    const auto& goal = s.at("goal");
    if (goal.at("type") != "hit") {
      chain.push_back(s.get<ChainStep>());
      continue;
    }
    Hit hit;
    hit.parity = bit_from_json(goal.at("parity"));
    for (const auto& i : goal.at("avoid_indices")) hit.avoid.push_back(elements.at(i.get<std::size_t>()));
    for (const auto& b : goal.at("avoid_extra")) hit.avoid.push_back(b.get<GroupElement>());
    json plain = s;
    plain["goal"] = json{{"type", "add_generator"}, {"k", ""}};
    auto step = plain.get<ChainStep>();
    step.goal = std::move(hit);
    chain.push_back(std::move(step));
  }
  return chain;
}

}  // namespace

void to_json(json& j, const SplitCertificate& c) {
  json initial = json::object();
  for (const auto& [id, sets] : c.initial_commitments) initial[id] = sets;
  json transcripts = json::object();
  for (const auto& [id, entries] : c.transcripts) transcripts[id] = entries;
  j = json{{"path", c.path == SplitPath::finite ? "finite" : "infinite"},
           {"params", optional_to(c.params)},
           {"elements", c.elements},
           {"map", c.map},
           {"values", c.values},
           {"class0", c.class0},
           {"class1", c.class1},
           {"guarantee", c.guarantee},
           {"balance_floor", c.balance_floor()},
           {"star_points", c.star_points},
           {"flags", c.flags},
           {"initial_commitments", std::move(initial)},
           {"transcripts", std::move(transcripts)},
           {"chain", chain_to_json(c.chain, c.elements)},
           {"finite_trace", optional_to(c.finite_trace)}};
}

void from_json(const json& j, SplitCertificate& c) {
  const auto path = j.at("path").get<std::string>();
  if (path != "finite" && path != "infinite") throw ParseError("unknown split path " + path);
  c.path = path == "finite" ? SplitPath::finite : SplitPath::infinite;
  c.params = optional_from<SplitParams>(j, "params");
  c.elements = j.at("elements").get<std::vector<GroupElement>>();
  c.map = j.at("map").get<CoherentMap>();
  c.values.clear();
  for (const auto& v : j.at("values")) c.values.push_back(bit_from_json(v));
  c.class0 = j.at("class0").get<std::vector<std::size_t>>();
  c.class1 = j.at("class1").get<std::vector<std::size_t>>();
  c.guarantee = j.at("guarantee").get<std::size_t>();
  c.star_points = j.at("star_points").get<std::size_t>();
  c.flags = j.at("flags").get<std::vector<std::string>>();
  c.initial_commitments.clear();
  for (const auto& [id, sets] : j.at("initial_commitments").items()) {
    c.initial_commitments[id] = sets.get<std::vector<PeriodicSet>>();
  }
  c.transcripts.clear();
  for (const auto& [id, entries] : j.at("transcripts").items()) {
    c.transcripts[id] = entries.get<std::vector<TranscriptEntry>>();
  }
  c.chain = chain_from_json(j.at("chain"), c.elements);
  c.finite_trace = optional_from<FiniteTraceRecord>(j, "finite_trace");
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump() << '\n';
}

std::vector<json> read_json_lines(std::istream& in, const std::string& what) {
  std::vector<json> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_json_text(line, what + ":" + std::to_string(number)));
  }
  return out;
}

std::vector<json> read_json_lines_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_json_lines(in, path);
}

std::vector<GroupElement> read_elements_file(const std::string& path) {
  std::vector<GroupElement> out;
  for (const auto& j : read_json_lines_file(path)) out.push_back(decode<GroupElement>(j, path));
  return out;
}

}  // namespace cohsplit
