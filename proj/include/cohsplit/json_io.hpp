#pragma once

// JSON encodings of the domain types. Field names and layouts are part of the
// external interface:
//   PeriodicSet  {"threshold": N, "modulus": m, "residues": [...], "prefix": [...]}
//   Point        {"p": id, "k": id, "n": int | "omega"}
//   GroupElement sorted array of points
//   transcript   {"oracle": id, "query": set, "answer": 0|1, "committed": set|null}

#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cohsplit/coherent_split.hpp"
#include "cohsplit/forcing.hpp"
#include "cohsplit/oracle.hpp"
#include "cohsplit/periodic_set.hpp"
#include "cohsplit/splitter.hpp"

namespace cohsplit {

using json = nlohmann::json;

void to_json(json& j, const PeriodicSet& s);
void from_json(const json& j, PeriodicSet& s);

void to_json(json& j, const ExtNat& n);
void from_json(const json& j, ExtNat& n);
void to_json(json& j, const Point& x);
void from_json(const json& j, Point& x);
void to_json(json& j, const GroupElement& a);
void from_json(const json& j, GroupElement& a);
void to_json(json& j, const TwoValuedMap& f);
void from_json(const json& j, TwoValuedMap& f);

void to_json(json& j, const TranscriptEntry& e);
void from_json(const json& j, TranscriptEntry& e);

void to_json(json& j, const FeedReport& r);
void from_json(const json& j, FeedReport& r);

void to_json(json& j, const Column& c);
void from_json(const json& j, Column& c);
void to_json(json& j, const ColumnSpec& c);
void from_json(const json& j, ColumnSpec& c);
void to_json(json& j, const CoherentMap& f);
void from_json(const json& j, CoherentMap& f);
void to_json(json& j, const Condition& q);
void from_json(const json& j, Condition& q);

void to_json(json& j, const DenseGoal& goal);
void from_json(const json& j, DenseGoal& goal);
void to_json(json& j, const HitWitness& w);
void from_json(const json& j, HitWitness& w);
void to_json(json& j, const ChainStep& step);
void from_json(const json& j, ChainStep& step);

void to_json(json& j, const SplitParams& p);
void from_json(const json& j, SplitParams& p);
void to_json(json& j, const FiniteTraceRecord& r);
void from_json(const json& j, FiniteTraceRecord& r);
void to_json(json& j, const SplitCertificate& c);
void from_json(const json& j, SplitCertificate& c);

Bit bit_from_json(const json& j);
std::string to_string(StarMode mode);
StarMode star_mode_from_string(const std::string& s);

// Decodes with any JSON or validation failure rethrown as ParseError.
template <class T>
T decode(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

json parse_json_text(const std::string& text, const std::string& what);
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

// One JSON value per non-blank line.
std::vector<json> read_json_lines(std::istream& in, const std::string& what);
std::vector<json> read_json_lines_file(const std::string& path);
std::vector<GroupElement> read_elements_file(const std::string& path);

}  // namespace cohsplit
