#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ringlab/cli.hpp"
#include "ringlab/ensembles.hpp"
#include "ringlab/io.hpp"

namespace ringlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ringlab_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    ::unsetenv("RINGLAB_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name)) << content;
    return path(name);
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

TEST_F(CliTest, TransformAToSOnGinibre) {
  const auto in = write("a.json", R"({"kind": "A", "coeffs": [1, 0, 0, 0, 0, 0]})");
  const auto r = run_cli({"transform", "--from", "A", "--to", "S", "-i", in});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = series_document_from_json(json::parse(r.out));
  EXPECT_EQ(doc.kind, "S");
  ASSERT_EQ(doc.series.order(), 5u);
  for (std::size_t n = 0; n <= 5; ++n) EXPECT_NEAR(doc.series[n].real(), n % 2 ? -1.0 : 1.0, 1e-15);
}

TEST_F(CliTest, TransformZeroMeanIsInputError) {
  const auto in = write("r.json", R"({"kind": "R", "coeffs": [0, 1, 0, 0]})");
  const auto r = run_cli({"transform", "--from", "R", "--to", "S", "-i", in});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("ZeroMean"), std::string::npos) << r.err;
}

TEST_F(CliTest, TransformHaarRoundTripThroughR) {
  const auto haar = determining_sequence(EnsembleSpec::haar(), 14);
  const auto in = write("haar.json", to_json(SeriesDocument{"A", haar.a}).dump());
  ASSERT_EQ(run_cli({"transform", "--to", "R", "-i", in, "-o", path("r.json")}).code, 0);
  ASSERT_EQ(run_cli({"transform", "--to", "A", "-i", path("r.json"), "-o", path("a.json")}).code, 0);
  const auto back = series_document_from_json(read_json_file(path("a.json")));
  EXPECT_EQ(back.kind, "A");
  EXPECT_LT(back.series.max_abs_diff(haar.a), 1e-10);
}

TEST_F(CliTest, TransformMomentsToCumulants) {
  // Semicircle moments: 0, 1, 0, 2, 0, 5.
  const auto in = write("m.json", R"({"kind": "moments", "coeffs": [0, 1, 0, 2, 0, 5]})");
  const auto r = run_cli({"transform", "--to", "cumulants", "-i", in});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = series_document_from_json(json::parse(r.out));
  EXPECT_EQ(doc.kind, "cumulants");
  EXPECT_LT(doc.series.max_abs_diff(TruncatedSeries{0.0, 1.0, 0.0, 0.0, 0.0, 0.0}), 1e-14);
}

TEST_F(CliTest, TransformKindMismatchAndBadFiles) {
  const auto in = write("a.json", R"({"kind": "A", "coeffs": [1]})");
  EXPECT_EQ(run_cli({"transform", "--from", "R", "--to", "S", "-i", in}).code, 2);
  EXPECT_EQ(run_cli({"transform", "--to", "S", "-i", path("missing.json")}).code, 2);
  const auto bad = write("bad.json", R"({"kind": "A", "coeffs": [1, "x"]})");
  EXPECT_EQ(run_cli({"transform", "--to", "S", "-i", bad}).code, 2);
}

TEST_F(CliTest, RingGinibreRadiiAndCsv) {
  const auto r = run_cli({"ring", "--ensemble", "ginibre", "-o", path("g.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "r_in=0 r_out=1\n");
  std::ifstream in(path("g.csv"));
  const auto table = read_profile_csv(in);
  ASSERT_EQ(table.s.size(), 512u);
  EXPECT_EQ(table.header["r_out"].get<double>(), 1.0);
  EXPECT_EQ(table.header["ensemble"]["variant"], "ginibre");
  for (std::size_t i = 0; i < table.s.size(); i += 37) {
    const double s = table.s[i];
    EXPECT_NEAR(table.F[i], std::min(1.0, s * s), 1e-10) << s;
  }
}

TEST_F(CliTest, RingPoissonMatchesClosedForm) {
  const auto r = run_cli({"ring", "--ensemble", "poisson", "--q", "2", "--points", "64", "-o", path("p.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("p.csv"));
  const auto table = read_profile_csv(in);
  const double q = 2.0;
  for (std::size_t i = 0; i < table.s.size(); ++i) {
    const double s = table.s[i];
    if (s >= std::sqrt(q)) continue;
    const double f = (1.0 - q + std::sqrt((q - 1.0) * (q - 1.0) + 4.0 * s * s)) / 2.0;
    EXPECT_NEAR(table.F[i], f, 1e-10) << s;
  }
}

TEST_F(CliTest, RingHaarWarnsButSucceeds) {
  const auto r = run_cli({"ring", "--ensemble", "haar"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "r_in=1 r_out=1\n");
  EXPECT_NE(r.err.find("degenerate"), std::string::npos);
}

TEST_F(CliTest, RingFromSSeries) {
  // S = 1/(1+z) truncated: Ginibre.
  const auto in = write("s.json", R"({"kind": "S", "coeffs": [1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1,
                                      1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1]})");
  const auto r = run_cli({"ring", "--s-series", in, "--points", "16", "-o", path("s.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("r_out=1"), std::string::npos) << r.out;
}

TEST_F(CliTest, RingRejectsUnknownEnsemble) {
  EXPECT_EQ(run_cli({"ring", "--ensemble", "wishart"}).code, 2);
  EXPECT_EQ(run_cli({"ring", "--ensemble", "poisson", "--q", "-1"}).code, 2);
}

TEST_F(CliTest, McNeedsSeed) {
  const auto r = run_cli({"mc", "--n", "16", "--samples", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("RINGLAB_SEED"), std::string::npos);
  ::setenv("RINGLAB_SEED", "17", 1);
  const auto with_env = run_cli({"mc", "--n", "32", "--samples", "2"});
  EXPECT_NE(with_env.code, 2) << with_env.err;
  EXPECT_EQ(json::parse(with_env.out)["config"]["seed"], 17);
  ::setenv("RINGLAB_SEED", "abc", 1);
  EXPECT_EQ(run_cli({"mc", "--n", "16", "--samples", "1"}).code, 2);
}

TEST_F(CliTest, McReportIsDeterministic) {
  const std::vector<std::string> args = {"mc", "--n", "48", "--samples", "3", "--seed", "42", "-o", path("r.json")};
  run_cli(args);
  const auto first = slurp(path("r.json"));
  auto serial = args;
  serial.insert(serial.end(), {"--threads", "1"});
  run_cli(serial);
  EXPECT_EQ(slurp(path("r.json")), first);
  EXPECT_FALSE(first.empty());
}

TEST_F(CliTest, McPassesWithDeskTolerancesAtSmallN) {
  const auto r = run_cli({"mc", "--n", "256", "--samples", "4", "--seed", "5", "--no-overlaps", "--ks-tol", "0.05",
                          "--radius-tol", "0.2", "--dump", path("d.csv")});
  EXPECT_EQ(r.code, 0) << r.out;
  const auto report = json::parse(r.out);
  EXPECT_TRUE(report["pass"].get<bool>());
  EXPECT_FALSE(report["result"]["overlap_checked"].get<bool>());
  std::ifstream dump(path("d.csv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(dump, line)) ++rows;
  EXPECT_EQ(rows, 256u * 4 + 1);
}

TEST_F(CliTest, McWrongProfileIsToleranceFailure) {
  const auto r = run_cli({"mc", "--n", "64", "--samples", "2", "--seed", "42", "--profile-ensemble", "haar", "-o",
                          path("r.json")});
  EXPECT_EQ(r.code, 4);
  const auto report = read_json_file(path("r.json"));
  EXPECT_FALSE(report["pass"].get<bool>());
  EXPECT_GT(report["result"]["ks_statistic"].get<double>(), 0.5);
  EXPECT_EQ(report["profile"]["variant"], "haar");
}

TEST_F(CliTest, McConfigOverridesFlags) {
  const auto cfg = write("cfg.json", R"({"n": 24, "samples": 2, "overlaps": false})");
  const auto r = run_cli({"mc", "--n", "999", "--seed", "1", "--config", cfg});
  ASSERT_NE(r.code, 2) << r.err;
  EXPECT_EQ(json::parse(r.out)["config"]["n"], 24);
  const auto typo = write("typo.json", R"({"samplez": 2})");
  EXPECT_EQ(run_cli({"mc", "--seed", "1", "--config", typo}).code, 2);
}

TEST_F(CliTest, McCommutatorReportsConvention) {
  const auto r = run_cli({"mc", "--ensemble", "commutator", "--n", "64", "--samples", "2", "--seed", "3"});
  ASSERT_NE(r.code, 2) << r.err;
  const auto report = json::parse(r.out);
  EXPECT_EQ(report["check"], "hermitian_spectrum");
  EXPECT_EQ(report["result"]["kurtosis_derived"].get<double>(), 2.5);
  EXPECT_FALSE(report["result"]["convention_note"].get<std::string>().empty());
}

TEST_F(CliTest, VerifyDefaultAndLongOrder) {
  const auto r = run_cli({"verify"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS triangle_identity"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  const auto long_order = run_cli({"verify", "--order", "32"});
  EXPECT_EQ(long_order.code, 0) << long_order.out;
  EXPECT_NE(long_order.out.find("tol=1e-08"), std::string::npos);
}

TEST_F(CliTest, VerifyInputFile) {
  const auto haar = determining_sequence(EnsembleSpec::haar(), 10);
  const auto good = write("haar.json", to_json(SeriesDocument{"A", haar.a}).dump());
  EXPECT_EQ(run_cli({"verify", "-i", good}).code, 0);
  const auto corrupted = write("bad.json", R"({"kind": "A", "coeffs": [1, 2)");
  const auto r = run_cli({"verify", "-i", corrupted});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Parse"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"mc", "--n", "abc"}).code, 2);
  const auto help = run_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("transform"), std::string::npos);
}

TEST(Io, SeriesJsonRoundTripIsExact) {
  const TruncatedSeries s{cplx(0.1, -1.0 / 3.0), cplx(1e-300, 2.0), cplx(-7.25, 0.0)};
  const auto text = to_json(SeriesDocument{"K", s}).dump();
  const auto back = series_document_from_json(json::parse(text));
  EXPECT_EQ(back.kind, "K");
  for (std::size_t n = 0; n <= 2; ++n) EXPECT_EQ(back.series[n], s[n]);
}

TEST(Io, ProfileCsvRoundTripIsExact) {
  const auto profile = build_profile(single_ring_model(EnsembleSpec::free_poisson(0.5)), {32, 0.1});
  std::stringstream csv;
  write_profile_csv(csv, profile, {{"note", "x"}});
  const auto table = read_profile_csv(csv);
  EXPECT_EQ(table.header["note"], "x");
  EXPECT_EQ(table.header["zero_mode_fraction"].get<double>(), 0.5);
  EXPECT_EQ(table.s, profile.s_grid);
  EXPECT_EQ(table.F, profile.F);
  EXPECT_EQ(table.rho, profile.rho);
  EXPECT_EQ(table.O, profile.O);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 2.0 / 7.0, 1e-310, 6.02214076e23}) {
    EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  }
}

}  // namespace
}  // namespace ringlab
