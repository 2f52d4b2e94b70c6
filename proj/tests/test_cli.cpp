#include <doctest.h>

#include <filesystem>

#include "pipeline.hpp"
#include "ttskill/persist.hpp"

using namespace ttskill;
using namespace ttskill::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("ttskill_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
};

}  // namespace

TEST_CASE("staged pipeline runs and is byte-for-byte repeatable") {
  TempDir a("run_a"), b("run_b");
  const auto first = run_pipeline(a.path, 10);
  for (const auto& s : first) {
    CAPTURE(s.args.front());
    CAPTURE(s.err);
    CHECK(s.code == 0);
    const auto summary = Json::parse(s.out);
    CHECK(summary["status"] == "ok");
    CHECK(summary["command"] == s.args.front());
  }
  REQUIRE(first.size() == 13);
  const auto second = run_pipeline(b.path, 10);
  REQUIRE(second.size() == 13);

  auto files_a = snapshot(a.path);
  auto files_b = snapshot(b.path);
  CHECK(files_a.size() == files_b.size());
  for (const auto& [name, bytes] : files_a) {
    CAPTURE(name);
    REQUIRE(files_b.count(name) == 1);
    CHECK(files_b[name] == bytes);
  }
  for (const char* name : {"series.csv", "labels.csv", "clean.csv", "gate.json", "windows.csv", "features.csv",
                           "pca.json", "mlp.json", "dag.json", "pred.csv", "profiles.json", "scores.json",
                           "scores.csv", "report/report.json", "report/confusion.csv", "report/confusion.svg"}) {
    CHECK(files_a.count(name) == 1);
  }
  CHECK(files_a["scores.csv"].rfind("stroke,Q1,Q2,Q3,Q4,Q5,Q\n", 0) == 0);
  CHECK(files_a["pred.csv"].rfind("start_index,true_label,predicted_label\n", 0) == 0);
  const auto report = Json::parse(files_a["report/report.json"]);
  CHECK(report["accuracy"].get<double>() >= 0.9);
}

TEST_CASE("usage errors exit 1 without writing") {
  TempDir d("usage");
  const auto out = (d.path / "x").string();
  CHECK(run_cli({"synth", "--out", out, "--bogus"}).code == cli::kExitUsage);
  CHECK(run_cli({"nonsense"}).code == cli::kExitUsage);
  CHECK(run_cli({"synth"}).code == cli::kExitUsage);
  CHECK(run_cli({"train", "--features", (d.path / "missing.csv").string(), "--out", out}).code == cli::kExitUsage);
  CHECK(run_cli({"train", "--model", "forest", "--out", out}).code == cli::kExitUsage);
  CHECK_FALSE(fs::exists(out));
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
  const auto version = run_cli({"--version"});
  CHECK(version.code == cli::kExitOk);
  CHECK(version.out.find("ttskill") != std::string::npos);
}

TEST_CASE("data errors exit 2 with a message") {
  TempDir d("data");
  const auto bad = (d.path / "bad.csv").string();
  write_text_file(bad, "t,ax,ay,az,gx,gy,gz,rx,ry,rz\n0,1,2\n");
  const auto r = run_cli({"preprocess", "--in", bad, "--out", (d.path / "clean.csv").string()});
  CHECK(r.code == cli::kExitData);
  CHECK_FALSE(r.err.empty());
  CHECK_FALSE(fs::exists(d.path / "clean.csv"));

  const auto bad_cfg = run_cli({"synth", "--noise", "-1", "--out", (d.path / "s").string()});
  CHECK(bad_cfg.code == cli::kExitData);
}

TEST_CASE("config files supply options and reject unknown keys") {
  TempDir d("config");
  const auto good = (d.path / "good.toml").string();
  write_text_file(good, "[synth]\nseed = 9\nstrokes-per-class = 2\n");
  const auto out = (d.path / "gen").string();
  const auto r = run_cli({"--config", good, "synth", "--out", out});
  CAPTURE(r.err);
  REQUIRE(r.code == cli::kExitOk);
  const auto labels = read_text_file((fs::path(out) / "labels.csv").string());
  CHECK(std::count(labels.begin(), labels.end(), '\n') == 1 + 12 + 13);

  const auto flagged = run_cli({"--config", good, "synth", "--strokes-per-class", "1", "--out", out});
  REQUIRE(flagged.code == cli::kExitOk);
  const auto fewer = read_text_file((fs::path(out) / "labels.csv").string());
  CHECK(std::count(fewer.begin(), fewer.end(), '\n') == 1 + 6 + 7);

  const auto unknown = (d.path / "unknown.toml").string();
  write_text_file(unknown, "[synth]\nsed = 9\n");
  CHECK(run_cli({"--config", unknown, "synth", "--out", out}).code == cli::kExitUsage);
}
