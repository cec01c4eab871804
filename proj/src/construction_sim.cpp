#include "cohsplit/construction_sim.hpp"

#include <algorithm>
#include <unordered_set>

#include "cohsplit/json_io.hpp"

namespace cohsplit {

namespace {

const std::set<CoordId> kNoCoords;

template <class Container>
std::string fresh_id(const std::string& stem, const Container& taken) {
  for (std::size_t n = 0;; ++n) {
    auto id = stem + "#" + std::to_string(n);
    if (!taken.contains(id)) return id;
  }
}

void require_oracle(const SimConfig& cfg, const UltrafilterId& p) {
  if (!cfg.oracles.find(p)) throw MissingTarget("unknown ultrafilter " + p);
}

void require_generator(const SimConfig& cfg, const GeneratorId& a) {
  if (!cfg.generators.contains(a)) throw MissingTarget("unknown block " + a);
}

}  // namespace

const std::set<CoordId>& SimConfig::index_set(const GeneratorId& a) const {
  auto it = index_sets.find(a);
  return it == index_sets.end() ? kNoCoords : it->second;
}

SimConfig load_sim_config(const json& j) {
  SimConfig cfg;
  try {
    for (const auto& [id, sets] : j.at("oracles").items()) {
      try {
        cfg.oracles.insert(OracleState(id, sets.get<std::vector<PeriodicSet>>()));
      } catch (const std::invalid_argument& e) {
        throw ParseError("oracle " + id + ": " + e.what());
      }
    }
    cfg.generators = j.at("generators").get<std::set<GeneratorId>>();
    cfg.coords = j.at("coords").get<std::set<CoordId>>();
    if (j.contains("index_sets")) {
      for (const auto& [a, coords] : j.at("index_sets").items()) {
        if (!cfg.generators.contains(a)) throw ParseError("index set for unknown block " + a);
        auto set = coords.get<std::set<CoordId>>();
        for (const auto& b : set) {
          if (!cfg.coords.contains(b)) throw ParseError("index set of " + a + " uses unknown coordinate " + b);
        }
        cfg.index_sets[a] = std::move(set);
      }
    }
    if (j.contains("targets")) {
      for (const auto& t : j.at("targets")) {
        const auto p = t.at("p").get<UltrafilterId>();
        const auto a = t.at("alpha").get<GeneratorId>();
        if (!cfg.oracles.find(p)) throw ParseError("target for unknown ultrafilter " + p);
        if (!cfg.generators.contains(a)) throw ParseError("target for unknown block " + a);
        ColumnKey key{p, a};
        if (cfg.targets.contains(key)) throw ParseError("duplicate target (" + p + "," + a + ")");
        auto& values = cfg.targets[key];
        for (const auto& [b, ones] : t.at("values").items()) {
          if (!cfg.index_set(a).contains(b)) {
            throw ParseError("target (" + p + "," + a + ") names " + b + " outside I_" + a);
          }
          values.emplace(b, ones.get<PeriodicSet>());
        }
      }
    }
    if (j.contains("coord_maps")) {
      for (const auto& [b, map] : j.at("coord_maps").items()) {
        if (!cfg.coords.contains(b)) throw ParseError("map for unknown coordinate " + b);
        cfg.coord_maps[b] = map.get<CoherentMap>();
      }
    }
    if (j.contains("capacity")) {
      const auto& cap = j.at("capacity");
      if (cap.contains("generators")) cfg.generator_capacity = cap.at("generators").get<std::size_t>();
      if (cap.contains("coords")) cfg.coord_capacity = cap.at("coords").get<std::size_t>();
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("simulation config: ") + e.what());
  }
  for (const auto& [b, map] : cfg.coord_maps) {
    for (const auto& [key, column] : map.columns()) {
      if (!cfg.oracles.find(column.p)) {
        throw ParseError("map of " + b + " has a column over unknown ultrafilter " + column.p);
      }
      if (!certify_coherent(column, cfg.oracles)) {
        throw ParseError("map of " + b + " is not coherent at (" + column.p + "," + column.k + ")");
      }
    }
  }
  return cfg;
}

Bit build_coordinate(SimConfig& cfg, const UltrafilterId& p, const GeneratorId& a,
                     const ExtNat& n, const CoordId& b) {
  if (cfg.index_set(a).contains(b)) {
    auto target = cfg.targets.find({p, a});
    if (target == cfg.targets.end()) {
      throw MissingTarget("no target for (" + p + "," + a + ")");
    }
    auto ones = target->second.find(b);
    if (ones == target->second.end()) {
      throw MissingTarget("target (" + p + "," + a + ") has no value at " + b);
    }
    if (!n.is_omega()) return ones->second.contains(n.value()) ? 1 : 0;
    return p_limit(cfg.oracles.at(p), bit_partition(ones->second)).label;
  }
  auto map = cfg.coord_maps.find(b);
  if (map == cfg.coord_maps.end()) return 0;
  return map->second(Point{p, a, n});
}

SimPoint build_point(SimConfig& cfg, const UltrafilterId& p, const GeneratorId& a,
                     const ExtNat& n) {
  require_oracle(cfg, p);
  require_generator(cfg, a);
  SimPoint z;
  for (const auto& b : cfg.coords) z[b] = build_coordinate(cfg, p, a, n, b);
  return z;
}

SimPoint operator+(const SimPoint& u, const SimPoint& v) {
  SimPoint out = u;
  for (const auto& [b, bit] : v) out[b] ^= bit;
  return out;
}

SimPoint group_value(SimConfig& cfg, const GroupElement& e) {
  SimPoint g;
  for (const auto& b : cfg.coords) g[b] = 0;
  for (const Point& x : e) g = g + build_point(cfg, x);
  return g;
}

SelectiveCertificate witness_selective(SimConfig& cfg, const UltrafilterId& p,
                                       const std::vector<OpenBox>& boxes) {
  if (boxes.empty()) throw EmptyInput();
  require_oracle(cfg, p);
  for (const auto& box : boxes) {
    for (const auto& [b, bit] : box.constraints) {
      if (!cfg.coords.contains(b)) throw MissingTarget("box constrains unknown coordinate " + b);
    }
  }

  SelectiveCertificate cert;
  cert.p = p;
  cert.boxes = boxes;
  cert.initial_commitments = cfg.oracles.commitments();
  const auto mark = cfg.oracles.mark();

  for (const auto& box : boxes) {
    for (const auto& [b, bit] : box.constraints) cert.support_union.insert(b);
  }
  // I: the least block index set containing J, else J itself.
  cert.index_set = cert.support_union;
  for (const auto& a : cfg.generators) {
    const auto& set = cfg.index_set(a);
    if (std::includes(set.begin(), set.end(), cert.support_union.begin(),
                      cert.support_union.end())) {
      cert.index_set = set;
      break;
    }
  }

  // y_n: box constraints on I, 0 on free coordinates; periodic in n.
  const Nat period = boxes.size();
  for (const auto& b : cert.index_set) {
    std::vector<Nat> residues;
    for (Nat t = 0; t < period; ++t) {
      auto it = boxes[t].constraints.find(b);
      if (it != boxes[t].constraints.end() && it->second == 1) residues.push_back(t);
    }
    cert.targets.emplace(b, PeriodicSet(0, period, std::move(residues), {}));
  }

  std::optional<GeneratorId> block;
  for (const auto& a : cfg.generators) {
    if (cfg.index_set(a) != cert.index_set) continue;
    auto target = cfg.targets.find({p, a});
    if (target != cfg.targets.end() && target->second == cert.targets) {
      block = a;
      break;
    }
  }
  if (!block) {
    if (cfg.generator_capacity && cfg.generators.size() >= *cfg.generator_capacity) {
      throw ConfigExhausted("no room for a fresh block (capacity " +
                            std::to_string(*cfg.generator_capacity) + ")");
    }
    block = fresh_id("alpha", cfg.generators);
    cfg.generators.insert(*block);
    if (!cert.index_set.empty()) cfg.index_sets[*block] = cert.index_set;
    cfg.targets[{p, *block}] = cert.targets;
    cert.allocated = true;
  }
  cert.block = *block;

  for (Nat n = 0; n < period; ++n) {
    auto x = build_point(cfg, p, cert.block, ExtNat(n));
    for (const auto& [b, bit] : boxes[n].constraints) {
      if (x.at(b) != bit) {
        throw InvariantViolation("choice " + std::to_string(n) + " misses its box at " + b);
      }
    }
    cert.choices.push_back(std::move(x));
  }

  for (const auto& b : cfg.coords) {
    LimitCertificate lc;
    lc.coord = b;
    if (cert.index_set.contains(b)) {
      lc.which_case = 1;
      const auto cells = bit_partition(cert.targets.at(b));
      const auto decision = p_limit(cfg.oracles.at(p), cells);
      lc.cells = cells.cells;
      lc.decided_cell = decision.cell;
      lc.value = decision.label;
    } else {
      lc.which_case = 2;
      const Column* column = nullptr;
      auto map = cfg.coord_maps.find(b);
      if (map != cfg.coord_maps.end()) column = map->second.find({p, cert.block});
      lc.column = column ? *column : Column::zero(p, cert.block);
      if (!certify_coherent(*lc.column, cfg.oracles)) {
        throw IncoherentResult("coordinate " + b + " has an incoherent column");
      }
      lc.value = lc.column->omega_value;
    }
    cert.limit[b] = lc.value;
    cert.limits.push_back(std::move(lc));
  }
  if (cert.limit != build_point(cfg, p, cert.block, ExtNat::omega())) {
    throw InvariantViolation("limit point disagrees with its coordinate certificates");
  }
  cert.transcripts = cfg.oracles.transcripts_since(mark);
  return cert;
}

RefutationCertificate witness_no_convergence(SimConfig& cfg,
                                             const std::vector<FamilyMember>& family) {
  if (family.empty()) throw EmptyInput();
  std::unordered_set<GroupElement, GroupElementHash> seen;
  for (std::size_t m = 0; m < family.size(); ++m) {
    if (!seen.insert(family[m].support).second) {
      throw NotFaithfullyIndexed("E_" + std::to_string(m) + " repeats an earlier support");
    }
  }

  RefutationCertificate cert;
  cert.family = family;
  std::vector<GroupElement> stream;
  for (std::size_t m = 0; m < family.size(); ++m) {
    const auto& e = family[m].support;
    for (const Point& x : e) {
      if (!cfg.oracles.find(x.p) || !cfg.generators.contains(x.k)) {
        throw InconsistentFamily("E_" + std::to_string(m) + " has point " + to_string(x) +
                                 " outside X");
      }
      cert.blocks.insert(x.k);
    }
    if (group_value(cfg, e) != family[m].value) {
      throw InconsistentFamily("g_" + std::to_string(m) + " is not the sum of its points");
    }
    stream.push_back(e);
  }
  for (const auto& a : cert.blocks) {
    const auto& set = cfg.index_set(a);
    cert.covered.insert(set.begin(), set.end());
  }

  if (cfg.coord_capacity && cfg.coords.size() >= *cfg.coord_capacity) {
    throw ConfigExhausted("no room for a fresh coordinate (capacity " +
                          std::to_string(*cfg.coord_capacity) + ")");
  }
  cert.beta = fresh_id("beta", cfg.coords);

  SplitParams params;
  cert.split = coherent_split(stream, params, cfg.oracles);
  cfg.coords.insert(cert.beta);
  cfg.coord_maps[cert.beta] = cert.split.map;

  for (std::size_t m = 0; m < family.size(); ++m) {
    Bit g = 0;
    for (const Point& x : family[m].support) g ^= build_coordinate(cfg, x.p, x.k, x.n, cert.beta);
    if (g != hom_eval(cert.split.map, family[m].support)) {
      throw InvariantViolation("g_" + std::to_string(m) + " disagrees with the split at " +
                               cert.beta);
    }
    cert.values.push_back(g);
    (g ? cert.class1 : cert.class0).push_back(m);
  }
  cert.guarantee = cert.split.guarantee;
  cert.flags = cert.split.flags;
  return cert;
}

std::vector<FamilyMember> load_family(SimConfig& cfg, const std::vector<json>& lines) {
  std::vector<FamilyMember> family;
  for (std::size_t m = 0; m < lines.size(); ++m) {
    const auto& line = lines[m];
    const auto what = "family line " + std::to_string(m);
    if (!line.is_object() || !line.contains("E")) throw ParseError(what + ": missing \"E\"");
    FamilyMember member;
    member.support = decode<GroupElement>(line.at("E"), what);
    if (line.contains("g")) {
      try {
        for (const auto& [b, bit] : line.at("g").items()) member.value[b] = bit_from_json(bit);
      } catch (const json::exception& e) {
        throw ParseError(what + ": " + e.what());
      }
    } else {
      for (const Point& x : member.support) {
        if (!cfg.oracles.find(x.p) || !cfg.generators.contains(x.k)) {
          throw InconsistentFamily(what + " has point " + to_string(x) + " outside X");
        }
      }
      member.value = group_value(cfg, member.support);
    }
    family.push_back(std::move(member));
  }
  return family;
}

void to_json(json& j, const OpenBox& box) { j = box.constraints; }

void from_json(const json& j, OpenBox& box) {
  if (!j.is_object()) throw ParseError("box must map coordinates to bits");
  box.constraints.clear();
  for (const auto& [b, bit] : j.items()) box.constraints[b] = bit_from_json(bit);
}

void to_json(json& j, const LimitCertificate& c) {
  j = json{{"coord", c.coord}, {"case", c.which_case}, {"value", c.value}};
  if (c.which_case == 1) {
    json cells = json::array();
    for (const auto& [label, set] : c.cells) cells.push_back(json{{"label", label}, {"set", set}});
    j["cells"] = std::move(cells);
    j["decided_cell"] = c.decided_cell;
  } else {
    j["column"] = *c.column;
  }
}

void from_json(const json& j, LimitCertificate& c) {
  c.coord = j.at("coord").get<CoordId>();
  c.which_case = j.at("case").get<int>();
  c.value = bit_from_json(j.at("value"));
  c.cells.clear();
  c.column.reset();
  if (c.which_case == 1) {
    for (const auto& cell : j.at("cells")) {
      c.cells.emplace_back(bit_from_json(cell.at("label")), cell.at("set").get<PeriodicSet>());
    }
    c.decided_cell = j.at("decided_cell").get<std::size_t>();
  } else if (c.which_case == 2) {
    c.column = j.at("column").get<Column>();
  } else {
    throw ParseError("limit certificate case must be 1 or 2");
  }
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

}  // namespace

void to_json(json& j, const SelectiveCertificate& c) {
  json targets = json::object();
  for (const auto& [b, ones] : c.targets) targets[b] = ones;
  j = json{{"p", c.p},
           {"boxes", c.boxes},
           {"support_union", c.support_union},
           {"block", c.block},
           {"index_set", c.index_set},
           {"allocated", c.allocated},
           {"targets", std::move(targets)},
           {"choices", c.choices},
           {"limit", c.limit},
           {"limits", c.limits},
           {"initial_commitments", commitments_json(c.initial_commitments)},
           {"transcripts", transcripts_json(c.transcripts)}};
}

void from_json(const json& j, SelectiveCertificate& c) {
  c.p = j.at("p").get<UltrafilterId>();
  c.boxes = j.at("boxes").get<std::vector<OpenBox>>();
  c.support_union = j.at("support_union").get<std::set<CoordId>>();
  c.block = j.at("block").get<GeneratorId>();
  c.index_set = j.at("index_set").get<std::set<CoordId>>();
  c.allocated = j.at("allocated").get<bool>();
  c.targets.clear();
  for (const auto& [b, ones] : j.at("targets").items()) c.targets.emplace(b, ones.get<PeriodicSet>());
  c.choices.clear();
  for (const auto& x : j.at("choices")) {
    SimPoint point;
    for (const auto& [b, bit] : x.items()) point[b] = bit_from_json(bit);
    c.choices.push_back(std::move(point));
  }
  c.limit.clear();
  for (const auto& [b, bit] : j.at("limit").items()) c.limit[b] = bit_from_json(bit);
  c.limits = j.at("limits").get<std::vector<LimitCertificate>>();
  c.initial_commitments.clear();
  for (const auto& [id, sets] : j.at("initial_commitments").items()) {
    c.initial_commitments[id] = sets.get<std::vector<PeriodicSet>>();
  }
  c.transcripts.clear();
  for (const auto& [id, entries] : j.at("transcripts").items()) {
    c.transcripts[id] = entries.get<std::vector<TranscriptEntry>>();
  }
}

void to_json(json& j, const FamilyMember& m) { j = json{{"E", m.support}, {"g", m.value}}; }

void to_json(json& j, const RefutationCertificate& c) {
  j = json{{"family", c.family},
           {"blocks", c.blocks},
           {"covered", c.covered},
           {"beta", c.beta},
           {"split", c.split},
           {"values", c.values},
           {"class0", c.class0},
           {"class1", c.class1},
           {"guarantee", c.guarantee},
           {"balance_floor", c.guarantee / 2},
           {"flags", c.flags}};
}

void from_json(const json& j, RefutationCertificate& c) {
  c.family.clear();
  for (const auto& line : j.at("family")) {
    FamilyMember m;
    m.support = line.at("E").get<GroupElement>();
    for (const auto& [b, bit] : line.at("g").items()) m.value[b] = bit_from_json(bit);
    c.family.push_back(std::move(m));
  }
  c.blocks = j.at("blocks").get<std::set<GeneratorId>>();
  c.covered = j.at("covered").get<std::set<CoordId>>();
  c.beta = j.at("beta").get<CoordId>();
  c.split = j.at("split").get<SplitCertificate>();
  c.values.clear();
  for (const auto& v : j.at("values")) c.values.push_back(bit_from_json(v));
  c.class0 = j.at("class0").get<std::vector<std::size_t>>();
  c.class1 = j.at("class1").get<std::vector<std::size_t>>();
  c.guarantee = j.at("guarantee").get<std::size_t>();
  c.flags = j.at("flags").get<std::vector<std::string>>();
}

}  // namespace cohsplit
