#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "cohsplit/json_io.hpp"
#include "sim_fixtures.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("cohsplit_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run cli(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const std::string cmd = std::string(COHSPLIT_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Run{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, buffer.str()};
}

std::string write(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

std::string last_line(const std::string& text) {
  auto end = text.find_last_not_of('\n');
  auto start = text.rfind('\n', end);
  return text.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

}  // namespace

TEST_CASE("split on a three-element stream") {
  const auto input = write("three.jsonl",
                           R"([{"p":"_flat","k":"x","n":0}])" "\n"
                           R"([{"p":"_flat","k":"y","n":0}])" "\n"
                           R"([{"p":"_flat","k":"x","n":0},{"p":"_flat","k":"y","n":0}])" "\n");
  const auto cert = (scratch() / "three.json").string();
  const auto r = cli("split --input " + input + " --out " + cert);
  CHECK(r.status == 0);
  CHECK(json::parse(last_line(r.out)) == json{{"count0", 1}, {"count1", 2}, {"steered", 2}});
  CHECK(cli("verify " + cert).status == 0);
}

TEST_CASE("exit statuses") {
  CHECK(cli("split --input " + write("bad.jsonl", "[{]\n")).status == 2);
  CHECK(cli("split").status == 2);
  CHECK(cli("split --input /nonexistent/file").status == 2);
  const auto point = R"([{"p":"_flat","k":"x","n":0}])";
  const auto dup = write("dup.jsonl", std::string(point) + "\n" + point + "\n");
  CHECK(cli("coherent-split --input " + dup).status == 3);

  const auto free_stream = (scratch() / "free.jsonl").string();
  REQUIRE(cli("generate --kind star-free --size 20 --seed 1 --out " + free_stream).status == 0);
  CHECK(cli("coherent-split --input " + free_stream + " --mode infinite --schedule-length 3").status == 3);
}

TEST_CASE("verify flags a tampered certificate with status 4") {
  const auto stream = (scratch() / "rich.jsonl").string();
  REQUIRE(cli("generate --kind star-rich --size 200 --seed 5 --out " + stream).status == 0);
  const auto cert = (scratch() / "rich.json").string();
  REQUIRE(cli("coherent-split --input " + stream + " --mode infinite --schedule-length 40 --out " + cert).status == 0);
  CHECK(cli("verify " + cert).status == 0);

  std::ifstream in(cert);
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto j = json::parse(buffer.str());
  j["body"]["class0"].push_back(9999);
  const auto tampered = write("tampered.json", j.dump());
  const auto r = cli("verify " + tampered);
  CHECK(r.status == 4);
  CHECK(r.out.find("check=") != std::string::npos);
}

TEST_CASE("generate is deterministic and distinct") {
  for (const std::string kind : {"star-free", "star-rich", "mixed", "bucketed"}) {
    const auto a = cli("generate --kind " + kind + " --size 10 --seed 3");
    const auto b = cli("generate --kind " + kind + " --size 10 --seed 3");
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    std::istringstream lines(a.out);
    std::set<std::string> seen;
    std::string line;
    while (std::getline(lines, line)) {
      seen.insert(line);
      const auto e = json::parse(line);
      bool has_star = false;
      for (const auto& x : e) has_star = has_star || x["n"] == "omega";
      if (kind == "star-free") CHECK_FALSE(has_star);
      if (kind == "star-rich") CHECK(has_star);
    }
    CHECK(seen.size() == 10);
  }
  CHECK(cli("generate --kind star-rich --size 0").status == 2);
}

TEST_CASE("star-rich elements carry fresh star points while the pool lasts") {
  const auto r = cli("generate --kind star-rich --size 10 --seed 9");
  std::istringstream lines(r.out);
  std::set<std::string> stars;
  std::string line;
  while (std::getline(lines, line)) {
    for (const auto& x : json::parse(line)) {
      if (x["n"] == "omega") CHECK(stars.insert(x.dump()).second);
    }
  }
  CHECK(stars.size() == 10);
}

TEST_CASE("oracle queries, p-limits and replay") {
  const auto queries = write(
      "queries.jsonl",
      R"({"oracle":"p","query":{"threshold":0,"modulus":2,"residues":[0],"prefix":[]}})" "\n"
      R"({"oracle":"p","query":{"threshold":0,"modulus":2,"residues":[1],"prefix":[]}})" "\n"
      R"({"oracle":"q","cells":[{"label":"a","set":{"threshold":3,"modulus":1,"residues":[],"prefix":[0,1]}},)"
      R"({"label":"b","set":{"threshold":3,"modulus":1,"residues":[0],"prefix":[]}},)"
      R"({"label":"c","set":{"threshold":3,"modulus":1,"residues":[],"prefix":[2]}}]})" "\n");
  const auto transcript = (scratch() / "transcript.jsonl").string();
  const auto r = cli("oracle --queries " + queries + " --transcript " + transcript);
  REQUIRE(r.status == 0);
  std::istringstream lines(r.out);
  std::string l1, l2, l3;
  std::getline(lines, l1);
  std::getline(lines, l2);
  std::getline(lines, l3);
  CHECK(json::parse(l1)["answer"] == 1);
  CHECK(json::parse(l2)["answer"] == 0);
  CHECK(json::parse(l3)["label"] == "b");
  CHECK(cli("oracle --replay " + transcript).status == 0);

  std::ifstream in(transcript);
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto text = buffer.str();
  text.replace(text.find("\"answer\":1"), 10, "\"answer\":0");
  CHECK(cli("oracle --replay " + write("bad_transcript.jsonl", text)).status == 4);

  const auto overlap = write(
      "overlap.jsonl",
      R"({"oracle":"p","cells":[{"label":0,"set":{"threshold":0,"modulus":1,"residues":[0],"prefix":[]}},)"
      R"({"label":1,"set":{"threshold":0,"modulus":2,"residues":[0],"prefix":[]}}]})" "\n");
  CHECK(cli("oracle --queries " + overlap).status == 3);
}

TEST_CASE("oracle extension certificate") {
  const auto specs = write("specs.jsonl",
                           R"({"p":"p","k":"k","values_one_set":{"threshold":0,"modulus":2,"residues":[0],"prefix":[]}})" "\n"
                           R"({"p":"p","k":"l","values_one_set":{"threshold":2,"modulus":1,"residues":[],"prefix":[1]}})" "\n");
  const auto cert = (scratch() / "ext.json").string();
  const auto r = cli("oracle --extend " + specs + " --out " + cert);
  REQUIRE(r.status == 0);
  std::istringstream lines(r.out);
  std::string l1, l2;
  std::getline(lines, l1);
  std::getline(lines, l2);
  CHECK(json::parse(l1)["omega_value"] == 1);
  CHECK(json::parse(l2)["omega_value"] == 0);
  CHECK(cli("verify " + cert).status == 0);
}

TEST_CASE("simulate subcommands") {
  const auto config = write("config.json", fixtures::sim_config(2, 3, 10).dump());
  const auto boxes = write("boxes.json", R"([{"b0":1},{"b0":0,"b8":1}])");
  const auto sel = (scratch() / "sel.json").string();
  REQUIRE(cli("simulate selective --config " + config + " --boxes " + boxes + " --p p0 --out " + sel).status == 0);
  CHECK(cli("verify " + sel).status == 0);

  const auto family = write("family.jsonl",
                            R"({"E":[{"p":"p0","k":"a2","n":0}]})" "\n"
                            R"({"E":[{"p":"p0","k":"a2","n":1}]})" "\n"
                            R"({"E":[{"p":"p1","k":"a2","n":0},{"p":"p0","k":"a2","n":"omega"}]})" "\n");
  const auto ref = (scratch() / "refute.json").string();
  REQUIRE(cli("simulate refute --config " + config + " --family " + family + " --out " + ref).status == 0);
  CHECK(cli("verify " + ref).status == 0);

  const auto twice = write("twice.jsonl",
                           R"({"E":[{"p":"p0","k":"a2","n":0}]})" "\n"
                           R"({"E":[{"p":"p0","k":"a2","n":0}]})" "\n");
  CHECK(cli("simulate refute --config " + config + " --family " + twice).status == 3);
  CHECK(cli("simulate selective --config " + boxes + " --boxes " + boxes + " --p p0").status == 2);
}
