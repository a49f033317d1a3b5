#include "amrkit/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "amrkit/corpus.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace amrkit;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = AMRKIT_FIXTURES;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "amrkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("amrkit_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("validate") != std::string::npos);
  const auto missing = run({"smatch", fixture("gold.amr"), "/nonexistent.amr"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("amrkit:") == 0);
  CHECK(run({"merge", "--strategy", "smatch-avg", "--out", "x", fixture("sys_a.amr")}).code == 2);
}

TEST_CASE("validate") {
  const auto dir = scratch("validate");
  const auto clean = run({"validate", "--strict", fixture("gold.amr")});
  CHECK(clean.code == 0);
  CHECK(clean.out.find("3 graphs, 0 corrupted") != std::string::npos);

  const auto report = (dir / "report.json").string();
  const auto bad = run({"validate", fixture("merged.amr"), "--report", report});
  CHECK(bad.code == 0);
  CHECK(bad.out.find("merged\tArgOnNonPredicate\tz3\t:ARG0") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j["corrupted"] == 1);
  CHECK(j["graphs"][0]["violations"].size() == 2);
  CHECK(j["graphs"][0]["violations"][1]["role"] == ":ARG1");
  CHECK(run({"validate", "--strict", fixture("merged.amr")}).code == 1);
}

TEST_CASE("smatch") {
  const auto self = run({"smatch", fixture("gold.amr"), fixture("gold.amr"), "--breakdown"});
  CHECK(self.code == 0);
  CHECK(self.out.find("F1 100.0") != std::string::npos);
  CHECK(self.out.find("srl 100.0") != std::string::npos);
  const auto hill = run({"smatch", fixture("sys_a.amr"), fixture("gold.amr"), "--jobs", "2"});
  const auto exact = run({"smatch", fixture("sys_a.amr"), fixture("gold.amr"), "--exact"});
  CHECK(hill.out.find("F1 77.1") != std::string::npos);
  CHECK(exact.out == hill.out);
}

TEST_CASE("merge and select write corpora") {
  const auto dir = scratch("merge");
  const auto merged = (dir / "merged.amr").string();
  const auto r = run({"merge", "--strategy", "graphene-base", "--out", merged, fixture("sys_a.amr"),
                      fixture("sys_b.amr"), fixture("sys_c.amr")});
  CHECK(r.code == 0);
  const auto entries = read_corpus(merged);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].id == "premiere");
  CHECK(entries[0].sentence.size() > 0);

  const auto by_scores = (dir / "scores.amr").string();
  CHECK(run({"select", "--strategy", "ppl-avg", "--scores", fixture("scores.jsonl"), "--out", by_scores,
             fixture("sys_a.amr"), fixture("sys_b.amr"), fixture("sys_c.amr")})
            .code == 0);
  CHECK(read_corpus(by_scores).size() == 3);

  CHECK(run({"select", "--strategy", "ppl-zero", "--out", by_scores, fixture("sys_a.amr"), fixture("sys_b.amr")})
            .code == 2);

  const auto avg = (dir / "avg.amr").string();
  const auto zero = (dir / "zero.amr").string();
  CHECK(run({"select", "--strategy", "smatch-avg", "--out", avg, fixture("sys_a.amr"), fixture("sys_b.amr"),
             fixture("sys_c.amr")})
            .code == 0);
  ::setenv(kScorerEnv, (std::string(AMRKIT_MOCK_SCORER) + " --mode reverse").c_str(), 1);
  CHECK(run({"select", "--strategy", "ppl-zero", "--out", zero, fixture("sys_a.amr"), fixture("sys_b.amr"),
             fixture("sys_c.amr")})
            .code == 0);
  ::unsetenv(kScorerEnv);
  CHECK(slurp(zero) == slurp(avg));

  const auto failing = run({"select", "--strategy", "ppl-zero", "--scorer-cmd",
                            std::string(AMRKIT_MOCK_SCORER) + " --mode negative", "--out", zero,
                            fixture("sys_a.amr"), fixture("sys_b.amr")});
  CHECK(failing.code == 2);
  CHECK(failing.err.find("premiere") != std::string::npos);
}

TEST_CASE("evaluate is reproducible") {
  const auto dir = scratch("evaluate");
  const std::vector<std::string> base = {"evaluate", "--gold", fixture("gold.amr"), "--strategies",
                                         "graphene-base,smatch-avg,ppl-avg,oracle-best", "--scores",
                                         fixture("scores.jsonl"), "--seed", "11"};
  auto args = base;
  args.insert(args.end(), {"--report", (dir / "a.json").string(), fixture("sys_a.amr"), fixture("sys_b.amr"),
                           fixture("sys_c.amr")});
  const auto first = run(args);
  CHECK(first.code == 0);
  CHECK(first.out.find("oracle-best") != std::string::npos);
  args = base;
  args.insert(args.end(), {"--jobs", "1", "--report", (dir / "b.json").string(), fixture("sys_a.amr"),
                           fixture("sys_b.amr"), fixture("sys_c.amr")});
  CHECK(run(args).code == 0);
  auto a = nlohmann::json::parse(slurp(dir / "a.json"));
  auto b = nlohmann::json::parse(slurp(dir / "b.json"));
  for (auto* j : {&a, &b})
    for (auto& row : (*j)["rows"]) row["time_seconds"] = nullptr;
  CHECK(a == b);
  CHECK(a["rows"].size() == 7);
}

TEST_CASE("split writes k fold pairs deterministically") {
  const auto one = scratch("split1");
  const auto two = scratch("split2");
  const auto r = run({"split", "--folds", "3", "--seed", "5", "--out-dir", one.string(), fixture("gold.amr")});
  CHECK(r.code == 0);
  CHECK(r.out == "fold 1: 2 train, 1 test\nfold 2: 2 train, 1 test\nfold 3: 2 train, 1 test\n");
  CHECK(run({"split", "--folds", "3", "--seed", "5", "--out-dir", two.string(), fixture("gold.amr")}).code == 0);
  for (int f = 1; f <= 3; ++f)
    for (const auto* part : {"train", "test"}) {
      const auto name = "gold.fold" + std::to_string(f) + "." + part + ".amr";
      CHECK(fs::exists(one / name));
      CHECK(slurp(one / name) == slurp(two / name));
    }
  CHECK(run({"split", "--folds", "4", "--seed", "5", "--out-dir", one.string(), fixture("gold.amr")}).code == 2);
}
