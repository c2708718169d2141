#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "conecalc/cli.hpp"
#include "conecalc/io.hpp"
#include "conecalc/sampling.hpp"

namespace conecalc {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "conecalc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(CONECALC_TEST_DATA) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("conecalc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, CheckExitCodes) {
  EXPECT_EQ(invoke({"check", "cp", data("E_n2.json")}).code, cli::kExitMember);
  const CliResult ppt = invoke({"check", "ppt", data("E_n2.json")});
  EXPECT_EQ(ppt.code, cli::kExitNotMember);
  EXPECT_NE(ppt.out.find("witness value: -1\n"), std::string::npos) << ppt.out;
  EXPECT_EQ(invoke({"check", "kpos:2", data("phi_lambda_0.55_n3.json")}).code, cli::kExitNotMember);
  EXPECT_EQ(invoke({"check", "psd", data("E_n2.json"), "--dims", "2,2"}).code, cli::kExitMember);
}

TEST_F(CliTest, InconclusiveExitCode) {
  // A unitary rotation of the 2-positive boundary map at n = 3: the Schmidt
  // minimum is exactly 0, so no witness exists, and the rotation hides the
  // isotropic closed form.
  Rng rng(4);
  const LinMap edge = compose(ad_map(random_isometry(3, 3, rng)), reduction_map(3, 0.5));
  save_document(map_document(edge), path("edge.json"));
  const CliResult r = invoke({"check", "kpos:2", path("edge.json")});
  EXPECT_EQ(r.code, cli::kExitInconclusive) << r.out << r.err;
}

TEST_F(CliTest, ErrorsMapToExitCodes) {
  EXPECT_EQ(invoke({"check", "nonsense", data("E_n2.json")}).code, cli::kExitError);
  EXPECT_EQ(invoke({"check", "cp", path("missing.json")}).code, cli::kExitError);
  EXPECT_EQ(invoke({"verify", "--suite", "Z99"}).code, cli::kExitError);
  EXPECT_EQ(invoke({"check", "kpos:4", data("phi_lambda_0.55_n3.json")}).code, cli::kExitError);
  EXPECT_EQ(invoke({"check", "psd", data("E_n2.json"), "--dims", "3,2"}).code, cli::kExitError);
  EXPECT_EQ(invoke({}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"check", "cp"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"convert", data("E_n2.json"), "--to", "svd"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, cli::kExitMember);
}

TEST_F(CliTest, ConvertRoundTrip) {
  const CliResult id = invoke({"convert", data("E_n2.json"), "--to", "kraus"});
  EXPECT_EQ(id.code, 0);
  const std::string tag = "round-trip residual: ";
  ASSERT_EQ(id.err.rfind(tag, 0), 0u) << id.err;
  EXPECT_LE(std::stod(id.err.substr(tag.size())), 1e-15);
  const Document doc = parse_document(id.out);
  EXPECT_EQ(doc.rep, "kraus");
  EXPECT_LE((doc.map->choi() - max_entangled(2)).norm(), 1e-15);

  Rng rng(3);
  save_document(map_document(ad_map(random_gaussian(3, 3, rng))), path("ad.json"));
  const CliResult ad = invoke({"convert", path("ad.json"), "--to", "kraus", "-o", path("ad_kraus.json")});
  EXPECT_EQ(ad.code, 0);
  const std::string line = "round-trip residual: ";
  const auto pos = ad.out.find(line);
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::stod(ad.out.substr(pos + line.size())), 1e-10);
  EXPECT_TRUE(fs::exists(path("ad_kraus.json")));

  save_document(matrix_document(CMat::Identity(2, 3)), path("rect.json"));
  EXPECT_EQ(invoke({"convert", path("rect.json")}).code, cli::kExitError);
}

TEST_F(CliTest, VerifyReportsAreByteIdentical) {
  const std::vector<std::string> args = {"--json", "--seed", "5", "verify", "--suite", "L21", "--n", "2", "--trials", "20"};
  const CliResult a = invoke(args);
  const CliResult b = invoke(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const Json j = Json::parse(a.out);
  EXPECT_EQ(j.at("suite"), "L21");
  EXPECT_EQ(j.at("status"), "pass");
  EXPECT_EQ(j.at("seed"), 5);
  EXPECT_FALSE(j.contains("timings"));
  EXPECT_TRUE(Json::parse(invoke({"--json", "--timings", "verify", "--suite", "L21", "--trials", "5"}).out)
                  .contains("timings"));
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  ::setenv("CONECALC_SEED", "31", 1);
  const CliResult env = invoke({"--json", "verify", "--suite", "P41", "--trials", "10"});
  const CliResult flag = invoke({"--json", "--seed", "31", "verify", "--suite", "P41", "--trials", "10"});
  ::unsetenv("CONECALC_SEED");
  EXPECT_EQ(Json::parse(env.out).at("seed"), 31);
  EXPECT_EQ(env.out, flag.out);
}

TEST_F(CliTest, CheckJsonIsDeterministic) {
  const std::vector<std::string> args = {"--json", "check", "kpos:2", data("phi_lambda_0.55_n3.json")};
  const CliResult a = invoke(args);
  EXPECT_EQ(a.out, invoke(args).out);
  const Json j = Json::parse(a.out);
  EXPECT_EQ(j.at("verdict").at("status"), "NotMember");
  EXPECT_NEAR(j.at("verdict").at("witness").at("value").get<double>(), -0.1, 1e-6);
}

TEST_F(CliTest, MakeWritesLoadableDocuments) {
  for (const std::string what : {"E", "F", "identity", "transpose", "reduction", "random-cp", "omin", "omaxk", "ppt"}) {
    const CliResult r = invoke({"make", what, "--n", "3", "--k", "2", "--lambda", "0.4"});
    ASSERT_EQ(r.code, 0) << what << r.err;
    EXPECT_NO_THROW(parse_document(r.out)) << what;
  }
  EXPECT_EQ(invoke({"make", "widget", "--n", "2"}).code, cli::kExitError);
  const CliResult t = invoke({"make", "transpose", "--n", "2", "-o", path("t.json")});
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(invoke({"check", "cocp", path("t.json")}).code, 0);
  EXPECT_EQ(invoke({"check", "cp", path("t.json")}).code, 1);
}

}  // namespace
}  // namespace conecalc
