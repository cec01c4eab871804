// Command-line entry point. Exit status: 0 success, 2 unparseable input,
// 3 precondition failure (including NoWitness), 4 internal error or a
// certificate that fails verification.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cohsplit/certificate.hpp"
#include "cohsplit/coherent_split.hpp"
#include "cohsplit/construction_sim.hpp"
#include "cohsplit/generate.hpp"
#include "cohsplit/json_io.hpp"
#include "cohsplit/splitter.hpp"

using namespace cohsplit;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitInternal = 4;

int exit_code(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::parse:
      return kExitParse;
    case ErrorCategory::precondition:
      return kExitPrecondition;
    case ErrorCategory::internal:
      return kExitInternal;
  }
  return kExitInternal;
}

json summary_of(const SplitCertificate& cert) {
  return json{{"path", cert.path == SplitPath::finite ? "finite" : "infinite"},
              {"elements", cert.elements.size()},
              {"class0", cert.class0.size()},
              {"class1", cert.class1.size()},
              {"guarantee", cert.guarantee},
              {"balance_floor", cert.balance_floor()},
              {"star_points", cert.star_points},
              {"flags", cert.flags}};
}

struct SplitArgs {
  std::string input;
  std::optional<std::string> out;
};

int run_split_command(const SplitArgs& args) {
  const auto elements = read_elements_file(args.input);
  SplitterState state;
  for (const auto& a : elements) std::cout << json(state.feed(a)).dump() << '\n';
  std::cout << json{{"count0", state.count0()}, {"count1", state.count1()}, {"steered", state.steered()}}
                   .dump()
            << '\n';
  if (args.out) {
    RunManifest manifest{"split", {args.input}, {}, std::nullopt};
    write_json_file(*args.out, seal(kKindSplit, manifest, split_body(elements, state)));
  }
  return 0;
}

struct CoherentArgs {
  std::string input;
  std::size_t cutoff = 0;
  std::string mode = "auto";
  std::optional<std::size_t> schedule_length;
  std::optional<std::size_t> auto_threshold;
  std::optional<std::string> out;
};

int run_coherent_command(const CoherentArgs& args) {
  const auto elements = read_elements_file(args.input);
  SplitParams params;
  params.cutoff = args.cutoff;
  params.mode = star_mode_from_string(args.mode);
  params.hit_goals = args.schedule_length;
  params.auto_threshold = args.auto_threshold;
  OracleBank bank;
  const auto cert = coherent_split(elements, params, bank);

  RunManifest manifest{"coherent-split", {args.input}, {{"cutoff", std::to_string(args.cutoff)}, {"mode", args.mode}}, std::nullopt};
  if (args.schedule_length) manifest.flags["schedule-length"] = std::to_string(*args.schedule_length);
  if (args.auto_threshold) manifest.flags["auto-threshold"] = std::to_string(*args.auto_threshold);
  const json sealed = seal(kKindCoherentSplit, manifest, json(cert));
  if (args.out) {
    write_json_file(*args.out, sealed);
    std::cout << summary_of(cert).dump() << '\n';
  } else {
    std::cout << sealed.dump() << '\n';
  }
  return 0;
}

struct OracleArgs {
  std::optional<std::string> queries;
  std::optional<std::string> replay;
  std::optional<std::string> extend;
  std::optional<std::string> commitments;
  std::optional<std::string> transcript;
  std::optional<std::string> out;
};

OracleBank initial_bank(const std::optional<std::string>& path) {
  OracleBank bank;
  if (!path) return bank;
  const auto j = read_json_file(*path);
  if (!j.is_object()) throw ParseError(*path + ": expected {id: [sets]}");
  for (const auto& [id, sets] : j.items()) {
    auto list = decode<std::vector<PeriodicSet>>(sets, *path);
    try {
      bank.insert(OracleState(id, std::move(list)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(*path + ": " + e.what());
    }
  }
  return bank;
}

int run_oracle_command(const OracleArgs& args) {
  const int modes = (args.queries ? 1 : 0) + (args.replay ? 1 : 0) + (args.extend ? 1 : 0);
  if (modes != 1) throw ParseError("give exactly one of --queries, --replay, --extend");
  OracleBank bank = initial_bank(args.commitments);

  if (args.replay) {
    const auto lines = read_json_lines_file(*args.replay);
    std::vector<TranscriptEntry> entries;
    for (const auto& j : lines) entries.push_back(decode<TranscriptEntry>(j, *args.replay));
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto& state = bank.at(entries[i].oracle);
      if (replay_transcript(state, std::span(&entries[i], 1))) {
        std::cout << json{{"ok", false}, {"mismatch", i}}.dump() << '\n';
        std::cerr << "transcript diverges at line " << i << '\n';
        return kExitInternal;
      }
    }
    std::cout << json{{"ok", true}, {"entries", entries.size()}}.dump() << '\n';
    return 0;
  }

  if (args.extend) {
    std::vector<ColumnSpec> specs;
    for (const auto& j : read_json_lines_file(*args.extend)) specs.push_back(decode<ColumnSpec>(j, *args.extend));
    const auto initial = bank.commitments();
    const auto body = run_extension(specs, initial);
    for (const auto& c : body.at("columns")) std::cout << c.dump() << '\n';
    if (args.out) {
      std::vector<std::string> inputs{*args.extend};
      if (args.commitments) inputs.push_back(*args.commitments);
      write_json_file(*args.out, seal(kKindExtension, RunManifest{"oracle-extend", inputs, {}, std::nullopt}, body));
    }
    return 0;
  }

  std::vector<TranscriptEntry> log;
  for (const auto& j : read_json_lines_file(*args.queries)) {
    const auto id = decode<std::string>(j.at("oracle"), *args.queries);
    auto& state = bank.at(id);
    if (j.contains("query")) {
      state.query(decode<PeriodicSet>(j.at("query"), *args.queries));
      log.push_back(state.transcript().back());
      std::cout << json(log.back()).dump() << '\n';
    } else if (j.contains("cells")) {
      CellPartition<json> seq;
      for (const auto& cell : j.at("cells")) {
        seq.cells.emplace_back(cell.at("label"), decode<PeriodicSet>(cell.at("set"), *args.queries));
      }
      const std::size_t before = state.transcript().size();
      const auto decision = p_limit(state, seq);
      for (std::size_t i = before; i < state.transcript().size(); ++i) log.push_back(state.transcript()[i]);
      std::cout << json{{"oracle", id}, {"label", decision.label}, {"cell", decision.cell}}.dump() << '\n';
    } else {
      throw ParseError("query line needs \"query\" or \"cells\"");
    }
  }
  if (args.transcript) {
    std::ofstream out(*args.transcript);
    if (!out) throw ParseError("cannot write " + *args.transcript);
    for (const auto& e : log) out << json(e).dump() << '\n';
  }
  return 0;
}

struct SimulateArgs {
  std::string config;
  std::string boxes;
  std::string family;
  std::string p;
  std::optional<std::string> out;
};

int run_selective_command(const SimulateArgs& args) {
  const auto config = read_json_file(args.config);
  const auto boxes = decode<std::vector<OpenBox>>(read_json_file(args.boxes), args.boxes);
  const auto body = run_selective(config, args.p, boxes);
  RunManifest manifest{"simulate-selective", {args.config, args.boxes}, {{"p", args.p}}, std::nullopt};
  const auto cert = seal(kKindSelective, manifest, body);
  const auto& c = body.at("certificate");
  std::cout << json{{"block", c.at("block")},
                    {"allocated", c.at("allocated")},
                    {"choices", c.at("choices").size()},
                    {"limit", c.at("limit")}}
                   .dump()
            << '\n';
  if (args.out) write_json_file(*args.out, cert);
  return 0;
}

int run_refute_command(const SimulateArgs& args) {
  const auto config = read_json_file(args.config);
  const auto family = read_json_lines_file(args.family);
  const auto body = run_refute(config, family);
  RunManifest manifest{"simulate-refute", {args.config, args.family}, {}, std::nullopt};
  const auto cert = seal(kKindRefute, manifest, body);
  const auto& c = body.at("certificate");
  std::cout << json{{"beta", c.at("beta")},
                    {"class0", c.at("class0").size()},
                    {"class1", c.at("class1").size()},
                    {"guarantee", c.at("guarantee")},
                    {"flags", c.at("flags")}}
                   .dump()
            << '\n';
  if (args.out) write_json_file(*args.out, cert);
  return 0;
}

struct GenerateArgs {
  std::string kind;
  std::size_t size = 0;
  std::uint64_t seed = 0;
  GenerateOptions options;
  std::optional<std::string> out;
};

int run_generate_command(const GenerateArgs& args) {
  if (args.size == 0) throw ParseError("--size must be at least 1");
  const auto stream = generate_stream(stream_kind_from_string(args.kind), args.size, args.seed, args.options);
  std::ostringstream text;
  for (const auto& a : stream) text << json(a).dump() << '\n';
  if (args.out) {
    std::ofstream out(*args.out);
    if (!out) throw ParseError("cannot write " + *args.out);
    out << text.str();
  } else {
    std::cout << text.str();
  }
  return 0;
}

int run_verify_command(const std::vector<std::string>& paths) {
  int status = 0;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto outcome = verify_certificate_text(buffer.str());
    if (outcome.ok) {
      std::cout << "ok " << path << '\n';
    } else {
      std::cout << "FAIL " << path << " check=" << outcome.check << ": " << outcome.detail << '\n';
      status = kExitInternal;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent splitting maps, ultrafilter oracles and replayable certificates"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SplitArgs split_args;
  auto* split = app.add_subcommand("split", "Greedy online splitter over a JSON-lines stream");
  split->add_option("--input", split_args.input, "elements, one per line")->required();
  split->add_option("--out", split_args.out, "certificate path");

  CoherentArgs coherent_args;
  auto* coherent = app.add_subcommand("coherent-split", "Coherent splitting map for a stream prefix");
  coherent->add_option("--input", coherent_args.input, "elements, one per line")->required();
  coherent->add_option("--cutoff", coherent_args.cutoff, "prefix length (0 = whole stream)");
  coherent->add_option("--mode", coherent_args.mode, "auto | finite | infinite")
      ->check(CLI::IsMember({"auto", "finite", "infinite"}));
  coherent->add_option("--schedule-length", coherent_args.schedule_length,
                       "number of Hit goals (default: until no witness is left)");
  coherent->add_option("--auto-threshold", coherent_args.auto_threshold,
                       "star points above which auto takes the infinite path");
  coherent->add_option("--out", coherent_args.out, "certificate path");

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Query, replay or extend against ultrafilter oracles");
  oracle->add_option("--queries", oracle_args.queries, "JSON lines {oracle, query} or {oracle, cells}");
  oracle->add_option("--replay", oracle_args.replay, "transcript to replay");
  oracle->add_option("--extend", oracle_args.extend, "column specs to extend coherently");
  oracle->add_option("--commitments", oracle_args.commitments, "initial commitments {id: [sets]}");
  oracle->add_option("--transcript", oracle_args.transcript, "write the transcript here");
  oracle->add_option("--out", oracle_args.out, "extension certificate path");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Finite-stage construction witnesses");
  simulate->require_subcommand(1);
  auto* selective = simulate->add_subcommand("selective", "Selective limit witness for a box sequence");
  selective->add_option("--config", sim_args.config)->required();
  selective->add_option("--boxes", sim_args.boxes, "JSON array of {coord: bit} boxes")->required();
  selective->add_option("--p", sim_args.p, "ultrafilter id")->required();
  selective->add_option("--out", sim_args.out);
  auto* refute = simulate->add_subcommand("refute", "Convergence refutation for a family");
  refute->add_option("--config", sim_args.config)->required();
  refute->add_option("--family", sim_args.family, "JSON lines {E, g?}")->required();
  refute->add_option("--out", sim_args.out);

  GenerateArgs gen_args;
  auto* generate = app.add_subcommand("generate", "Deterministic element streams");
  generate->add_option("--kind", gen_args.kind, "star-free | star-rich | mixed | bucketed")
      ->required()
      ->check(CLI::IsMember({"star-free", "star-rich", "mixed", "bucketed"}));
  generate->add_option("--size", gen_args.size)->required();
  generate->add_option("--seed", gen_args.seed);
  generate->add_option("--ultrafilters", gen_args.options.ultrafilters);
  generate->add_option("--generators", gen_args.options.generators);
  generate->add_option("--pool", gen_args.options.pool);
  generate->add_option("--max-points", gen_args.options.max_points);
  generate->add_option("--out", gen_args.out);

  std::vector<std::string> verify_paths;
  auto* verify = app.add_subcommand("verify", "Replay certificates");
  verify->add_option("certificates", verify_paths)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*split) return run_split_command(split_args);
    if (*coherent) return run_coherent_command(coherent_args);
    if (*oracle) return run_oracle_command(oracle_args);
    if (*selective) return run_selective_command(sim_args);
    if (*refute) return run_refute_command(sim_args);
    if (*generate) return run_generate_command(gen_args);
    if (*verify) return run_verify_command(verify_paths);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ParseError: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
