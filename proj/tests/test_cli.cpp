#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "lrdfield/cli.hpp"
#include "lrdfield/report_io.hpp"

using namespace lrdfield;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

int run(std::vector<std::string> args) {
  std::vector<const char*> argv{"lrdfield"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(int(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

const char* kSmallExperiment = R"({
  "model": {"kind": "power_law_iso", "eta": 0.4, "dim": 1},
  "subordinator": {"kind": "identity"},
  "level": 0.0,
  "windows": [{"extents": [64], "mesh": [1]}, {"extents": [128], "mesh": [1]}],
  "replicates": 200,
  "seed": 42,
  "normalization": {"method": "quadrature"},
  "rank": 1
})";

}  // namespace

TEST_CASE("config schema: strictness and round trip") {
  json good = json::parse(kSmallExperiment);
  ExperimentConfig cfg = parse_experiment_config(good);
  CHECK(cfg.replicates == 200);
  CHECK(cfg.windows.size() == 2);

  // canonical form is reparse-stable
  CHECK(config_hash(good) == config_hash(json::parse(canonical_json(good))));

  json extra = good;
  extra["typo_key"] = 1;
  CHECK_THROWS_AS(parse_experiment_config(extra), config_error);

  json missing = good;
  missing.erase("replicates");
  CHECK_THROWS_AS(parse_experiment_config(missing), config_error);

  json bad_model = good;
  bad_model["model"]["zzz"] = 1;
  CHECK_THROWS_AS(parse_experiment_config(bad_model), config_error);
}

TEST_CASE("model and subordinator JSON round trips") {
  for (const char* text :
       {R"({"kind":"power_law_iso","eta":0.4,"dim":1})", R"({"kind":"fgn_product","hurst":[0.3,0.8]})",
        R"({"kind":"gneiting","alpha":0.25,"gamma":0.5,"dim":2})",
        R"({"kind":"exponential","theta":1.5,"dim":2})", R"({"kind":"example29_3d","alpha":0.4})"}) {
    json j = json::parse(text);
    CovarianceModel m = parse_model(j);
    CHECK(parse_model(model_to_json(m)).name() == m.name());
  }
  for (const char* text : {R"({"kind":"identity"})", R"({"kind":"signed_exp","beta":2.1})",
                           R"({"kind":"square"})", R"({"kind":"two_branch","c":0.8})"}) {
    json j = json::parse(text);
    Subordinator f = parse_subordinator(j);
    CHECK(canonical_json(subordinator_to_json(f)) == canonical_json(j));
  }
}

TEST_CASE("hermite subcommand exit codes") {
  CHECK(run({"hermite", "--f", "identity", "--u", "0", "--k", "1"}) == 0);
  CHECK(run({"hermite", "--f", "square", "--u", "4", "--rank"}) == 0);
  CHECK(run({"hermite", "--f", "identity", "--k", "-1"}) == 2);
  CHECK(run({"hermite", "--f", "nonsense"}) == 2);
}

TEST_CASE("experiment subcommand writes a full output set and gates") {
  TempDir tmp("lrd_cli_exp");
  write_text_file(tmp.file("cfg.json"), kSmallExperiment);
  int rc = run({"experiment", "--config", tmp.file("cfg.json"), "--out", tmp.file("out"),
                "--threads", "2", "--plot"});
  CHECK(rc == 0);  // small run passes the KS gate comfortably at N=200
  CHECK(fs::exists(tmp.file("out") + "/report.json"));
  CHECK(fs::exists(tmp.file("out") + "/replicates.csv"));
  CHECK(fs::exists(tmp.file("out") + "/manifest.json"));
  CHECK(fs::exists(tmp.file("out") + "/hist.svg"));
  CHECK(fs::exists(tmp.file("out") + "/qq.svg"));

  json report = json::parse(read_text_file(tmp.file("out") + "/report.json"));
  CHECK(report.at("experiment") == "clt");
  CHECK(report.at("windows").size() == 2);

  json manifest = json::parse(read_text_file(tmp.file("out") + "/manifest.json"));
  CHECK(manifest.at("seed") == 42);
  CHECK(manifest.at("config_hash").get<std::string>().size() == 16);
}

TEST_CASE("determinism: identical seed, different thread counts, identical CSV") {
  TempDir tmp("lrd_cli_det");
  write_text_file(tmp.file("cfg.json"), kSmallExperiment);
  CHECK(run({"experiment", "--config", tmp.file("cfg.json"), "--out", tmp.file("a"), "--seed", "7",
             "--threads", "1"}) == 0);
  CHECK(run({"experiment", "--config", tmp.file("cfg.json"), "--out", tmp.file("b"), "--seed", "7",
             "--threads", "2"}) == 0);
  CHECK(read_text_file(tmp.file("a") + "/replicates.csv") ==
        read_text_file(tmp.file("b") + "/replicates.csv"));
  CHECK(read_text_file(tmp.file("a") + "/report.json") ==
        read_text_file(tmp.file("b") + "/report.json"));
}

TEST_CASE("schema violations exit 2") {
  TempDir tmp("lrd_cli_bad");
  json bad = json::parse(kSmallExperiment);
  bad.erase("replicates");
  write_text_file(tmp.file("bad.json"), bad.dump());
  CHECK(run({"experiment", "--config", tmp.file("bad.json"), "--out", tmp.file("out")}) == 2);
  write_text_file(tmp.file("trash.json"), "not json at all {");
  CHECK(run({"experiment", "--config", tmp.file("trash.json"), "--out", tmp.file("out")}) == 2);
}

TEST_CASE("check subcommand verdict exit codes") {
  TempDir tmp("lrd_cli_check");
  write_text_file(tmp.file("lrd.json"), R"({
    "model": {"kind": "power_law_iso", "eta": 0.4, "dim": 1},
    "check": "delta_ratio",
    "probes": {"lo": 100, "hi": 100000, "per_decade": 8}
  })");
  CHECK(run({"check", "--config", tmp.file("lrd.json")}) == 0);

  write_text_file(tmp.file("srd.json"), R"({
    "model": {"kind": "exponential", "theta": 1.0, "dim": 1},
    "check": "delta_ratio",
    "probes": {"lo": 100, "hi": 100000, "per_decade": 8}
  })");
  CHECK(run({"check", "--config", tmp.file("srd.json")}) == 1);

  write_text_file(tmp.file("short.json"), R"({
    "model": {"kind": "power_law_iso", "eta": 0.4, "dim": 1},
    "check": "delta_ratio",
    "probes": {"lo": 100, "hi": 200, "per_decade": 4}
  })");
  CHECK(run({"check", "--config", tmp.file("short.json")}) == 4);

  write_text_file(tmp.file("cls.json"), R"({
    "model": {"kind": "fgn_product", "hurst": [0.75]},
    "check": "lrd_classify",
    "probes": {"lo": 10, "hi": 10000, "per_decade": 8}
  })");
  CHECK(run({"check", "--config", tmp.file("cls.json")}) == 0);
}

TEST_CASE("fgn, volatility, and rosenblatt subcommands run end to end") {
  TempDir tmp("lrd_cli_other");

  write_text_file(tmp.file("fgn.json"), R"({
    "hurst": [0.75],
    "ladder": [16, 32],
    "level": 0.0,
    "replicates": 150,
    "seed": 5
  })");
  int rc_fgn = run({"fgn", "--config", tmp.file("fgn.json"), "--out", tmp.file("fgn_out"),
                    "--threads", "2"});
  CHECK(fs::exists(tmp.file("fgn_out") + "/report.json"));
  json fgn_report = json::parse(read_text_file(tmp.file("fgn_out") + "/report.json"));
  CHECK(fgn_report.at("experiment") == "fgn");
  CHECK(fgn_report.at("variance_slope_target").get<double>() == doctest::Approx(4.5));
  CHECK((rc_fgn == 0 || rc_fgn == 1));  // tiny ladders may miss the slope gate

  write_text_file(tmp.file("vol.json"), R"({
    "model": {"kind": "exponential", "theta": 1.0, "dim": 1},
    "level": 1.0,
    "windows": [{"extents": [512], "mesh": [1]}],
    "replicates": 300,
    "seed": 6
  })");
  CHECK(run({"volatility", "--config", tmp.file("vol.json"), "--out", tmp.file("vol_out"),
             "--xi", "constant", "--xi-c", "2"}) == 0);
  json vol_report = json::parse(read_text_file(tmp.file("vol_out") + "/report.json"));
  CHECK(vol_report.at("experiment") == "volatility");

  write_text_file(tmp.file("rb.json"), R"({
    "model": {"kind": "power_law_iso", "eta": 0.4, "dim": 1},
    "subordinator": {"kind": "square"},
    "level": 4.0,
    "windows": [{"extents": [256], "mesh": [1]}, {"extents": [512], "mesh": [1]},
                {"extents": [1024], "mesh": [1]}],
    "replicates": 300,
    "seed": 7,
    "normalization": {"method": "quadrature"},
    "rank": 2
  })");
  int rc_rb = run({"rosenblatt", "--config", tmp.file("rb.json"), "--out", tmp.file("rb_out"),
                   "--oracle-draws", "400", "--threads", "2"});
  CHECK((rc_rb == 0 || rc_rb == 1));
  json rb_report = json::parse(read_text_file(tmp.file("rb_out") + "/report.json"));
  CHECK(rb_report.at("experiment") == "rank_m");
  CHECK(rb_report.contains("ks_vs_oracle"));
  CHECK(rb_report.at("sigma_ratio").size() == 3);
}

TEST_CASE("sigma subcommand prints plans") {
  TempDir tmp("lrd_cli_sigma");
  write_text_file(tmp.file("s.json"), R"({
    "model": {"kind": "fgn_product", "hurst": [0.5]},
    "windows": [{"extents": [2], "mesh": [1]}],
    "m": 1
  })");
  CHECK(run({"sigma", "--config", tmp.file("s.json")}) == 0);
}

TEST_SUITE_END();
