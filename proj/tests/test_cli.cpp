#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "safebox/dataset.hpp"

// Exercises the installed command surface end to end: exit codes per the
// contract (0 success, 1 claim failed, 2 usage/I-O error) and the files the
// commands produce.

namespace {

const std::string kCli = SAFEBOX_CLI_PATH;
const std::string kData = SAFEBOX_DATA_DIR;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  const auto out_path =
      std::filesystem::temp_directory_path() / "sbx_cli_out.txt";
  const std::string command = kCli + " " + args + " > " + out_path.string() +
                              " 2>&1";
  const int status = std::system(command.c_str());
  std::ifstream in(out_path);
  std::string output((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
  return {WEXITSTATUS(status), std::move(output)};
}

std::filesystem::path tmp(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("learn writes the expected ratios") {
  const auto ratios = tmp("sbx_cli_ratios.json");
  const auto r = run("learn " + kData + "/pedestrians.json -o " +
                     ratios.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("rw = 1.9") != std::string::npos);

  std::ifstream in(ratios);
  nlohmann::json j;
  in >> j;
  CHECK(j["rw"].get<double>() == 1.9);
  CHECK(j["rh"].get<double>() == 1.2);
  CHECK(j["pairs"].get<int>() == 3);
}

TEST_CASE("apply enlarges every prediction") {
  const auto ratios = tmp("sbx_cli_ratios.json");
  run("learn " + kData + "/pedestrians.json -o " + ratios.string());
  const auto out = tmp("sbx_cli_applied.json");
  const auto r = run("apply " + kData + "/pedestrians.json --ratios " +
                     ratios.string() + " -o " + out.string());
  CHECK(r.exit_code == 0);

  const auto before = safebox::load_dataset(kData + "/pedestrians.json");
  const auto after = safebox::load_dataset(out);
  REQUIRE(after.size() == before.size());
  for (std::size_t i = 0; i < after.size(); ++i) {
    REQUIRE(after[i].predictions.size() == before[i].predictions.size());
    for (std::size_t p = 0; p < after[i].predictions.size(); ++p) {
      CHECK(after[i].predictions[p].bbox.width() ==
            doctest::Approx(before[i].predictions[p].bbox.width() * 1.9));
      CHECK(after[i].predictions[p].bbox.height() ==
            doctest::Approx(before[i].predictions[p].bbox.height() * 1.2));
    }
  }
}

TEST_CASE("eval reports the raw and post-processed safe rates") {
  const auto ratios = tmp("sbx_cli_ratios.json");
  run("learn " + kData + "/pedestrians.json -o " + ratios.string());
  const auto report = tmp("sbx_cli_report.json");
  const auto r = run("eval " + kData + "/pedestrians.json --ratios " +
                     ratios.string() + " -o " + report.string());
  CHECK(r.exit_code == 0);
  std::ifstream in(report);
  nlohmann::json j;
  in >> j;
  CHECK(j["safe_rate_post"].get<double>() == 1.0);
  CHECK(j["safe_rate_raw"].get<double>() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("quadrants prints all four fixtures") {
  const auto r = run("quadrants");
  CHECK(r.exit_code == 0);
  for (const char* needle : {"a ", "b ", "c ", "d "}) {
    CHECK(r.output.find(needle) != std::string::npos);
  }
}

TEST_CASE("prove accepts the bundled scripts") {
  const auto e5 = run("prove " + kData + "/axioms.json E5 " + kData +
                      "/proof_e5.txt --use E2,E3,E4 --quiet");
  CHECK(e5.exit_code == 0);
  CHECK(e5.output.find("accepted") != std::string::npos);

  CHECK(run("prove " + kData + "/axioms.json G1 " + kData +
            "/proof_g1.txt --quiet")
            .exit_code == 0);
  CHECK(run("prove " + kData + "/axioms.json G1 " + kData +
            "/proof_g1_explicit.txt --quiet")
            .exit_code == 0);
}

TEST_CASE("prove exits 1 when the script cannot close") {
  const auto r = run("prove " + kData + "/axioms.json G1 " + kData +
                     "/proof_g1.txt --use E1,E2 --quiet");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("rejected") != std::string::npos);
}

TEST_CASE("derive exit codes follow the verdict") {
  const auto full = run("derive " + kData +
                        "/axioms.json G1 --use E1,E2,E3,E4 --quiet");
  CHECK(full.exit_code == 0);
  CHECK(full.output.find("derivable at depth 3") != std::string::npos);
  CHECK(full.output.find("skolem 1") != std::string::npos);

  const auto partial =
      run("derive " + kData + "/axioms.json G1 --use E1,E2 --quiet");
  CHECK(partial.exit_code == 1);
  CHECK(partial.output.find("not derivable") != std::string::npos);
}

TEST_CASE("case assess reports the soundness flag") {
  const auto upper = run("case assess " + kData + "/case_upper_bound.json");
  CHECK(upper.exit_code == 0);
  CHECK(upper.output.find("upper-bound-only") != std::string::npos);

  const auto report = tmp("sbx_cli_case.json");
  const auto sound =
      run("case assess " + kData + "/case_sound.json -o " + report.string());
  CHECK(sound.exit_code == 0);
  CHECK(sound.output.find("[sound]") != std::string::npos);
  std::ifstream in(report);
  nlohmann::json j;
  in >> j;
  CHECK(j["goals"][0]["soundness"].get<std::string>() == "sound");
}

TEST_CASE("identical invocations produce identical output") {
  const std::string args = "derive " + kData + "/axioms.json G1 --use E1,E2,E3,E4";
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.output == b.output);
}

TEST_CASE("usage and I/O failures exit 2") {
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("learn").exit_code == 2);  // missing required argument
  CHECK(run("learn /nonexistent/data.json").exit_code == 2);
  CHECK(run("prove " + kData + "/axioms.json G1 /nonexistent/script.txt")
            .exit_code == 2);
  CHECK(run("derive " + kData + "/axioms.json G1 --use E9").exit_code == 2);
  CHECK(run("--help").exit_code == 0);
}
