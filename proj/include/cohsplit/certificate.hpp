#pragma once

// Self-contained certificate files:
//   {"kind": ..., "manifest": RunManifest, "body": ..., "digest": sha256 hex}
// The digest covers the compact serialization of kind, manifest and body.
// verify_certificate re-derives every claim in the body from its own inputs
// and oracle transcripts, re-runs the construction, then checks the digest.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cohsplit/coherent_split.hpp"
#include "cohsplit/construction_sim.hpp"
#include "cohsplit/core.hpp"
#include "cohsplit/splitter.hpp"

namespace cohsplit {

inline constexpr const char* kKindSplit = "split";
inline constexpr const char* kKindExtension = "extension";
inline constexpr const char* kKindCoherentSplit = "coherent-split";
inline constexpr const char* kKindSelective = "selective";
inline constexpr const char* kKindRefute = "refute";

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> flags;
  std::optional<std::uint64_t> seed;
  std::string tool_version = kToolVersion;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

std::string sha256_hex(const std::string& bytes);
std::string certificate_digest(const nlohmann::json& cert);
nlohmann::json seal(const std::string& kind, const RunManifest& manifest, nlohmann::json body);

// Bodies. Every body carries what its reproduction needs.
nlohmann::json split_body(const std::vector<GroupElement>& elements, const SplitterState& state);
nlohmann::json extension_body(const std::vector<ColumnSpec>& specs,
                              const std::vector<Column>& columns,
                              const std::map<UltrafilterId, std::vector<PeriodicSet>>& initial,
                              const std::map<UltrafilterId, std::vector<TranscriptEntry>>& transcripts);
nlohmann::json selective_body(const nlohmann::json& config, const SelectiveCertificate& cert);
nlohmann::json refute_body(const nlohmann::json& config, const RefutationCertificate& cert);

// Runs that build a body straight from inputs; verify re-runs them.
nlohmann::json run_split(const std::vector<GroupElement>& elements);
nlohmann::json run_extension(const std::vector<ColumnSpec>& specs,
                             const std::map<UltrafilterId, std::vector<PeriodicSet>>& initial);
nlohmann::json run_selective(const nlohmann::json& config, const UltrafilterId& p,
                             const std::vector<OpenBox>& boxes);
nlohmann::json run_refute(const nlohmann::json& config, const std::vector<nlohmann::json>& family);

struct VerifyOutcome {
  bool ok = true;
  std::string check;  // name of the first failing check
  std::string detail;
};

VerifyOutcome verify_certificate(const nlohmann::json& cert);
// Any text that does not parse fails the "parse" check.
VerifyOutcome verify_certificate_text(const std::string& text);

}  // namespace cohsplit
