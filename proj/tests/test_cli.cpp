#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "causalshift");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = causalshift::cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / "causalshift_cli_tests";
  fs::create_directories(p);
  return p;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("ratio report") {
  const auto o = run_cli({"ratio"});
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["metadata"]["command"] == "ratio");
  CHECK(j["metadata"]["constants_version"] == "CODATA-2018");
  CHECK(j["metadata"]["notes"].contains("ratio_sign"));
  const double m = j["results"]["ratio_magnitude"].get<double>();
  CHECK(m >= 0.050);
  CHECK(m <= 0.060);
  CHECK(j["results"]["ratio"].get<double>() < 0.0);
}

TEST_CASE("gamma report and CSV form") {
  const auto o = run_cli({"gamma"});
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(std::abs(j["results"]["gamma_leading_s"].get<double>() - 6.26e8) <= 0.02 * 6.26e8);
  const auto c = run_cli({"gamma", "--format", "csv"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("# command: gamma", 0) == 0);
  CHECK(c.out.find("quantity,value") != std::string::npos);
  CHECK(c.out.find("gamma_leading_s,") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"ratio"}, {"shift"}, {"split-check", "--points", "6"}}) {
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("split-check rows and thread invariance") {
  const auto one = run_cli({"split-check", "--points", "12", "--format", "csv", "--threads", "1"});
  const auto four =
      run_cli({"split-check", "--points", "12", "--format", "csv", "--threads", "4"});
  REQUIRE(one.code == 0);
  REQUIRE(four.code == 0);
  CHECK(one.out == four.out);
  const auto rows = data_rows(one.out);
  CHECK(rows.size() == 12);
  CHECK(one.out.find("u,re_closed,im_closed,re_numeric,im_numeric,im_rel_err") !=
        std::string::npos);
  const auto j = nlohmann::json::parse(run_cli({"split-check", "--points", "12"}).out);
  CHECK(j["results"]["max_im_rel_err"].get<double>() <= 1e-8);
}

TEST_CASE("report files round-trip as presets") {
  const fs::path report = scratch_dir() / "gamma_report.json";
  const auto w = run_cli({"gamma", "--out", report.string()});
  REQUIRE(w.code == 0);
  CHECK(w.out.empty());
  const auto again = run_cli({"gamma", "--preset", report.string()});
  REQUIRE(again.code == 0);
  std::ifstream in(report);
  const auto first = nlohmann::json::parse(in);
  const auto second = nlohmann::json::parse(again.out);
  CHECK(first["results"] == second["results"]);
  CHECK(first["atom"] == second["atom"]);
  CHECK(second["metadata"]["preset"] == report.string());
}

TEST_CASE("shipped preset file") {
  const auto a = run_cli({"ratio", "--preset", CAUSALSHIFT_SOURCE_DIR "/presets/hydrogen-1s2p.json"});
  const auto b = run_cli({"ratio"});
  REQUIRE(a.code == 0);
  CHECK(nlohmann::json::parse(a.out)["results"] == nlohmann::json::parse(b.out)["results"]);
}

TEST_CASE("series-check and wavepacket-check") {
  const auto s = run_cli({"series-check", "--random", "2"});
  REQUIRE(s.code == 0);
  const auto js = nlohmann::json::parse(s.out);
  CHECK(js["results"].contains("triples"));
  const auto w = run_cli({"wavepacket-check", "--plateau-periods", "10,100", "--format", "csv"});
  REQUIRE(w.code == 0);
  CHECK(w.out.find("t_g,rel_error,regime_flag") != std::string::npos);
  CHECK(data_rows(w.out).size() == 2);
}

TEST_CASE("ww-sim trace and summary") {
  const fs::path summary = scratch_dir() / "ww_summary.json";
  const auto o = run_cli({"ww-sim", "--n-modes", "1000", "--bandwidth-gamma", "50",
                          "--dt-gamma", "1e-3", "--stride", "100", "--format", "csv",
                          "--summary", summary.string()});
  REQUIRE(o.code == 0);
  CHECK(o.out.find("t,pop_e,re_c_e,im_c_e") != std::string::npos);
  CHECK(data_rows(o.out).size() == 61);  // 6000 steps / 100, plus t = 0
  std::ifstream in(summary);
  const auto j = nlohmann::json::parse(in);
  const double rate = j["summary"]["rate_over_gamma"].get<double>();
  CHECK(std::abs(rate - 1.0) <= 0.05);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({"gamma", "--format", "xml"}).code == 2);
  CHECK(run_cli({"gamma", "--denominator-power", "3"}).code == 2);
  CHECK(run_cli({"split-check", "--closed-form", "other"}).code == 2);
  CHECK(run_cli({"gamma", "--preset", "/nonexistent/preset.json"}).code == 2);
  CHECK(run_cli({"ww-sim", "--detuning-lo-gamma", "-10"}).code == 2);
  const fs::path bad = scratch_dir() / "bad_preset.json";
  {
    std::ofstream f(bad);
    f << R"({"m_g_kg": 1.67e-27, "omega_eg_rad_s": 1.5e16, "d_eg_Cm": 6e-30, "t_g_s": 1e-6, "spin": 1})";
  }
  const auto o = run_cli({"gamma", "--preset", bad.string()});
  CHECK(o.code == 2);
  CHECK(o.err.find("spin") != std::string::npos);
}

TEST_CASE("computation and output failures exit with 1 and a diagnostic") {
  const auto o = run_cli({"ratio", "--out", "/nonexistent_dir/x/report.json"});
  CHECK(o.code == 1);
  const auto j = nlohmann::json::parse(o.err);
  CHECK(j.contains("error"));
  CHECK(j.contains("message"));
  const auto w = run_cli({"ww-sim", "--n-modes", "1000", "--bandwidth-gamma", "2000"});
  CHECK(w.code == 1);
  CHECK(nlohmann::json::parse(w.err)["error"] == "domain");
}

TEST_CASE("help exits with 0") {
  const auto o = run_cli({"--help"});
  CHECK(o.code == 0);
  CHECK(o.out.find("split-check") != std::string::npos);
}

}
