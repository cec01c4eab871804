#pragma once

// Finite-stage model of a dense subgroup of Z_2^C for a finite coordinate set
// C. Points z_{p,a,n} are built coordinatewise:
//
//   z_{p,a,n}(b) = y_{p,a,n}(b)   if b is in the index set I_a
//                = f_b(p, a, n)   otherwise
//
// where y_{p,a,.} are per-coordinate targets given as eventually periodic
// sets of ones and f_b are coherent maps. The coordinate pool and the block
// list grow on demand: a request that needs a new block or a new coordinate
// allocates a fresh id ("alpha#N", "beta#N").

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "cohsplit/coherent_split.hpp"

namespace cohsplit {

using CoordId = std::string;
using SimPoint = std::map<CoordId, Bit>;

struct OpenBox {
  std::map<CoordId, Bit> constraints;
};

struct SimConfig {
  OracleBank oracles;
  std::set<GeneratorId> generators;
  std::set<CoordId> coords;
  std::map<GeneratorId, std::set<CoordId>> index_sets;
  // (p, a) -> coordinate -> {n : y_{p,a,n}(coordinate) = 1}
  std::map<ColumnKey, std::map<CoordId, PeriodicSet>> targets;
  std::map<CoordId, CoherentMap> coord_maps;
  std::optional<std::size_t> generator_capacity;
  std::optional<std::size_t> coord_capacity;

  const std::set<CoordId>& index_set(const GeneratorId& a) const;
};

// Strict load: unknown ids, index sets outside the coordinate pool and
// incoherent coordinate maps are ParseErrors. Coherence is certified against
// the config's own oracles.
SimConfig load_sim_config(const nlohmann::json& j);

// One coordinate of z_{p,a,n}. At n = omega a target coordinate takes the
// p-limit of its target. Throws MissingTarget.
Bit build_coordinate(SimConfig& cfg, const UltrafilterId& p, const GeneratorId& a,
                     const ExtNat& n, const CoordId& b);
SimPoint build_point(SimConfig& cfg, const UltrafilterId& p, const GeneratorId& a,
                     const ExtNat& n);
inline SimPoint build_point(SimConfig& cfg, const Point& x) {
  return build_point(cfg, x.p, x.k, x.n);
}

// Coordinatewise XOR.
SimPoint operator+(const SimPoint& u, const SimPoint& v);

struct LimitCertificate {
  CoordId coord;
  int which_case = 1;  // 1: b in I_a, decided by p_limit; 2: b outside, f_b's column
  std::vector<std::pair<Bit, PeriodicSet>> cells;  // case 1
  std::size_t decided_cell = 0;                    // case 1
  std::optional<Column> column;                    // case 2
  Bit value = 0;
};

struct SelectiveCertificate {
  UltrafilterId p;
  std::vector<OpenBox> boxes;  // U_n = boxes[n mod boxes.size()]
  std::set<CoordId> support_union;  // J
  GeneratorId block;
  std::set<CoordId> index_set;  // I_a, contains J
  bool allocated = false;
  std::map<CoordId, PeriodicSet> targets;
  std::vector<SimPoint> choices;  // x_n for n < boxes.size()
  SimPoint limit;
  std::vector<LimitCertificate> limits;
  std::map<UltrafilterId, std::vector<PeriodicSet>> initial_commitments;
  std::map<UltrafilterId, std::vector<TranscriptEntry>> transcripts;
};

// The boxes repeat with period boxes.size(); one period of choices is
// returned, each checked against its box. Throws EmptyInput,
// ConfigExhausted.
SelectiveCertificate witness_selective(SimConfig& cfg, const UltrafilterId& p,
                                       const std::vector<OpenBox>& boxes);

struct FamilyMember {
  GroupElement support;  // E_m
  SimPoint value;        // g_m on the config's coordinates
};

struct RefutationCertificate {
  std::vector<FamilyMember> family;
  std::set<GeneratorId> blocks;  // J
  std::set<CoordId> covered;     // I
  CoordId beta;
  SplitCertificate split;  // f_beta on the stream E_0, E_1, ...
  std::vector<Bit> values;  // g_m(beta)
  std::vector<std::size_t> class0;
  std::vector<std::size_t> class1;
  std::size_t guarantee = 0;
  std::vector<std::string> flags;
};

// Throws NotFaithfullyIndexed, InconsistentFamily, ConfigExhausted and
// whatever the split raises.
RefutationCertificate witness_no_convergence(SimConfig& cfg,
                                             const std::vector<FamilyMember>& family);

// The sum of z over the points of e, on the config's coordinates.
SimPoint group_value(SimConfig& cfg, const GroupElement& e);

void to_json(nlohmann::json& j, const OpenBox& box);
void from_json(const nlohmann::json& j, OpenBox& box);
void to_json(nlohmann::json& j, const LimitCertificate& c);
void from_json(const nlohmann::json& j, LimitCertificate& c);
void to_json(nlohmann::json& j, const SelectiveCertificate& c);
void from_json(const nlohmann::json& j, SelectiveCertificate& c);
void to_json(nlohmann::json& j, const FamilyMember& m);
void to_json(nlohmann::json& j, const RefutationCertificate& c);
void from_json(const nlohmann::json& j, RefutationCertificate& c);

// Family lines are {"E": element, "g": {coord: bit}}; a missing "g" is
// computed from the config.
std::vector<FamilyMember> load_family(SimConfig& cfg, const std::vector<nlohmann::json>& lines);

}  // namespace cohsplit
