#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <varcert/varcert.hpp>
#include <varcert_cli/cli.hpp>
#include <varcert_cli/config.hpp>
#include <varcert_cli/suite.hpp>

using namespace varcert;
using namespace varcert::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  nlohmann::json report() const { return nlohmann::json::parse(out); }
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "varcert_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, SvcZeroOne) {
  const auto r = invoke({"certify", "svc", "--model", "gallery:zero_one", "--sigma", "1", "--center", "0", "--cstar",
                         "0", "--eps", "0.5"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = r.report();
  EXPECT_EQ(j.at("verdict"), "CERTIFIED_ON_SAMPLES");
  EXPECT_EQ(j.at("schema_version"), kSchemaVersion);
  EXPECT_EQ(j.at("command"), "certify svc");
  EXPECT_TRUE(j.contains("timing"));
  EXPECT_TRUE(j.contains("margin"));
}

TEST(Cli, EnvelopeAbs) {
  const auto r = invoke({"envelope", "--model", "gallery:abs", "--lambda", "1", "--x", "2", "--p", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.report();
  EXPECT_EQ(j.at("verdict"), "COMPUTED");
  EXPECT_NEAR(j.at("result").at("value").get<double>(), 1.5, 1e-8);
  EXPECT_NEAR(j.at("result").at("minimizers").at(0).at(0).get<double>(), 1.0, 1e-8);
}

TEST(Cli, RefutedExitsOne) {
  const auto r = invoke({"certify", "proxreg", "--model", "gallery:staircase", "--r2", "2"});
  EXPECT_EQ(r.code, 1) << r.err;
  const auto j = r.report();
  EXPECT_EQ(j.at("verdict"), "REFUTED");
  EXPECT_FALSE(j.at("witnesses").empty());
}

TEST(Cli, ExitCodeMatchesVerdict) {
  for (const auto& v : {"CERTIFIED_ON_SAMPLES", "VACUOUS", "COMPUTED"}) EXPECT_EQ(exit_code_for(v), 0);
  EXPECT_EQ(exit_code_for("REFUTED"), 1);
  const std::vector<std::vector<std::string>> runs = {
      {"certify", "vc", "--model", "gallery:abs"},
      {"certify", "pointbased", "--model", "gallery:abs"},
      {"certify", "psd", "--model", "gallery:zero_one", "--sigma", "1", "--eps", "0.5", "--flavor", "limiting"},
      {"certify", "tilt", "--model", "gallery:staircase"},
      {"certify", "growth", "--model", "gallery:quadratic", "--sigma", "1"},
      {"certify", "epi", "--problem", "moving_spike"},
      {"certify", "epi", "--problem", "moving_spike", "--recovery"},
  };
  for (const auto& args : runs) {
    const auto r = invoke(args);
    ASSERT_NE(r.code, 2) << r.err;
    EXPECT_EQ(r.code, exit_code_for(r.report().at("verdict"))) << args[1];
  }
}

TEST(Cli, GalleryListAndVerify) {
  const auto l = invoke({"gallery", "list"});
  ASSERT_EQ(l.code, 0);
  for (const auto& n : gallery_names()) EXPECT_NE(l.out.find(n), std::string::npos);
  const auto v = invoke({"gallery", "verify", "--name", "staircase"});
  EXPECT_EQ(v.code, 0) << v.out;
  for (const auto& c : run_gallery_suite("staircase")) EXPECT_TRUE(c.matches()) << c.label;
}

TEST(Cli, GalleryVerifyAll) {
  for (const auto& m : suite_models())
    for (const auto& c : run_gallery_suite(m)) EXPECT_TRUE(c.matches()) << m << " " << c.label;
}

TEST(Cli, ErrorsExitTwoWithOneLine) {
  const std::vector<std::vector<std::string>> bad = {
      {"certify", "vc", "--model", "gallery:nope"},
      {"certify", "frobnicate"},
      {"envelope", "--lambda", "-1"},
      {"certify", "vc", "--r1", "abc"},
      {"certify", "vc", "--config", "/nonexistent/config.json"},
      {},
  };
  for (const auto& args : bad) {
    const auto r = invoke(args);
    EXPECT_EQ(r.code, 2);
    ASSERT_FALSE(r.err.empty());
    EXPECT_EQ(r.err.find('\n'), r.err.size() - 1) << r.err;
    EXPECT_EQ(r.err.rfind("varcert: ", 0), 0u) << r.err;
  }
}

TEST(Cli, MalformedConfigExitsTwo) {
  const auto path = scratch("broken.json");
  std::ofstream(path) << "{\"command\": \"certify vc\", \"r1\": ";
  const auto r = invoke({"certify", "vc", "--config", path.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, ConfigRoundTripReproducesReport) {
  const auto cfg = scratch("svc.json");
  const auto first = invoke({"certify", "svc", "--model", "gallery:huber_source", "--sigma", "0.5", "--r1", "0.4",
                             "--seed", "17", "--qmc", "64", "--save-config", cfg.string()});
  ASSERT_NE(first.code, 2) << first.err;
  const auto again = invoke({"certify", "svc", "--config", cfg.string()});
  ASSERT_NE(again.code, 2) << again.err;
  EXPECT_EQ(strip_timing(first.report()).dump(), strip_timing(again.report()).dump());
  const RunConfig loaded = load_config(cfg.string());
  EXPECT_EQ(loaded.seed, 17u);
  EXPECT_EQ(loaded.params.at("sigma"), 0.5);
}

TEST(Cli, FlagsOverrideConfig) {
  const auto cfg = scratch("override.json");
  invoke({"certify", "svc", "--model", "gallery:quadratic", "--sigma", "0.5", "--save-config", cfg.string()});
  const auto r = invoke({"certify", "svc", "--config", cfg.string(), "--sigma", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.report().at("config").at("params").at("sigma"), 3.0);
}

TEST(Cli, RunConfigJsonRoundTrip) {
  RunConfig c;
  c.command = "certify mono";
  c.seed = 99;
  c.box = Box::cube(1, -2.0, 3.0);
  c.params = {{"sigma", 0.25}, {"kind", "duality"}};
  c.tolerances.cert_tol = 1e-7;
  nlohmann::json j = c;
  const RunConfig back = j.get<RunConfig>();
  EXPECT_EQ(nlohmann::json(back), j);
  EXPECT_EQ(back.eps, std::numeric_limits<double>::infinity());
}

TEST(Cli, OutFileAndCsv) {
  const auto out = scratch("tilt.json");
  const auto csv = scratch("tilt.csv");
  fs::remove(out);
  fs::remove(csv);
  const auto r = invoke({"certify", "tilt", "--model", "gallery:quadratic", "--out", out.string(), "--csv",
                         csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j.at("verdict"), "CERTIFIED_ON_SAMPLES");
  std::istringstream lines(slurp(csv));
  std::string header, row;
  std::getline(lines, header);
  EXPECT_NE(header.find("ratio"), std::string::npos);
  std::size_t rows = 0;
  while (std::getline(lines, row)) ++rows;
  EXPECT_EQ(rows, j.at("result").at("modulus_table").size());
}

TEST(Cli, ThreadCountDoesNotChangeReport) {
  const std::vector<std::string> base = {"certify", "mono", "--model", "gallery:huber_source", "--sigma", "0.5",
                                         "--r1", "0.8", "--r2", "0.8", "--grid", "301"};
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  auto a = strip_timing(invoke(one).report());
  auto b = strip_timing(invoke(four).report());
  a["config"].erase("threads");
  b["config"].erase("threads");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Cli, ListParsingAndBroadcast) {
  EXPECT_EQ(parse_list("1,2.5,-3"), (std::vector<double>{1.0, 2.5, -3.0}));
  EXPECT_THROW(parse_list("1,,2"), InputError);
  EXPECT_EQ(broadcast({0.5}, 3, "center"), (Vec{0.5, 0.5, 0.5}));
  EXPECT_THROW(broadcast({1.0, 2.0}, 3, "center"), InputError);
}

TEST(Cli, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("certify"), std::string::npos);
}
