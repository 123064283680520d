#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "first/cli/commands.hpp"
#include "first/synthetic.hpp"

using namespace first;
using namespace first::cli;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const std::string& name) {
  fs::create_directories(FIRST_TEST_TMP);
  return fs::path(FIRST_TEST_TMP) / name;
}

fs::path write_text(const std::string& name, const std::string& text) {
  const auto path = tmp_file(name);
  std::ofstream(path) << text;
  return path;
}

int run_exe(const std::string& args) {
  const std::string cmd = std::string("\"") + FIRST_EXE + "\" " + args + " >" +
                          tmp_file("stdout.txt").string() + " 2>" + tmp_file("stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

// Eight predictors shaped like a mollusc-measurement table: one three-level
// categorical plus seven correlated size measurements.
fs::path shellfish_csv() {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::uniform_int_distribution<int> level(0, 2);
  std::ostringstream out;
  out << "sex,length,diameter,height,whole,shucked,viscera,shell,rings\n";
  const char* sexes[] = {"M", "F", "I"};
  for (int r = 0; r < 600; ++r) {
    const int s = level(rng);
    const double size = 0.5 + 0.1 * z(rng) - (s == 2 ? 0.1 : 0.0);
    out << sexes[s] << ',' << size << ',' << 0.8 * size + 0.02 * z(rng) << ','
        << 0.3 * size + 0.02 * z(rng) << ',' << size * size * size + 0.01 * z(rng) << ','
        << 0.4 * size + 0.03 * z(rng) << ',' << 0.2 * size + 0.01 * z(rng) << ','
        << 0.3 * size + 0.02 * z(rng) << ',' << 10 * size + z(rng) << '\n';
  }
  return write_text("shellfish.csv", out.str());
}

}  // namespace

TEST(CmdEstimate, MissingFileIsInputError) {
  CsvRunOptions o;
  o.data = "/nonexistent/data.csv";
  o.response = "y";
  const auto r = cmd_estimate(o);
  EXPECT_EQ(r.exit_code, exit_input_error);
  EXPECT_TRUE(r.output.is_null());
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(CmdEstimate, ConstantResponseReportsZeroSignal) {
  CsvRunOptions o;
  o.data = write_text("constant.csv", "a,b,y\n1,2,5\n2,1,5\n3,7,5\n4,4,5\n");
  o.response = "y";
  const auto r = cmd_estimate(o);
  EXPECT_EQ(r.exit_code, exit_degenerate);
  const auto report = r.output.get<EstimateReport>();
  EXPECT_EQ(report.s_tot, std::vector<double>(2, 0.0));
  EXPECT_NE(std::ranges::find(report.notes, "signal variance zero"), report.notes.end());
}

TEST(CmdEstimate, EightPredictorTableRunsEndToEnd) {
  CsvRunOptions o;
  o.data = shellfish_csv();
  o.response = "rings";
  o.categoricals = {"sex"};
  const auto r = cmd_estimate(o);
  ASSERT_EQ(r.exit_code, exit_ok) << (r.diagnostics.empty() ? "" : r.diagnostics.front());
  const auto report = r.output.get<EstimateReport>();
  EXPECT_EQ(report.factors.size(), 8u);
  EXPECT_EQ(report.s_tot.size(), 8u);
  EXPECT_EQ(report.settings.rows, 600u);
  EXPECT_FALSE(r.table.empty());
}

TEST(CmdEstimate, BadInnerCountIsInputError) {
  CsvRunOptions o;
  o.data = write_text("small.csv", "a,y\n1,2\n2,3\n3,1\n");
  o.response = "y";
  o.n_inner = 9;
  EXPECT_EQ(cmd_estimate(o).exit_code, exit_input_error);
}

TEST(CmdSelect, IshigamiCsvSelectsFirstThree) {
  const auto f = benchmark_function(BenchmarkId::ishigami);
  const Dataset d = generate_regression(CopulaSpec::autoregressive(6, 0.5), f, 1.0, 1000, 3);
  const auto path = tmp_file("ishigami.csv");
  write_csv(d, path);
  SelectOptions o;
  o.data = path;
  o.response = "y";
  o.standardize = false;
  const auto r = cmd_select(o);
  ASSERT_EQ(r.exit_code, exit_ok);
  const auto report = r.output.get<SelectReport>();
  EXPECT_EQ(report.selected, (std::vector<std::string>{"x1", "x2", "x3"}));
}

TEST(CmdSelect, PureNoiseSelectsNothing) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  std::ostringstream out;
  out << "a,b,c,y\n";
  for (int r = 0; r < 1000; ++r) out << z(rng) << ',' << z(rng) << ',' << z(rng) << ',' << z(rng) << '\n';
  SelectOptions o;
  o.data = write_text("noise.csv", out.str());
  o.response = "y";
  o.seed = 4;
  const auto report = cmd_select(o).output.get<SelectReport>();
  EXPECT_TRUE(report.selected.empty());
  EXPECT_EQ(report.trace.importance, std::vector<double>(3, 0.0));
}

TEST(CmdSelect, FastOnSingleFactorMatchesFirst) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  std::ostringstream out;
  out << "a,y\n";
  for (int r = 0; r < 400; ++r) {
    const double a = z(rng);
    out << a << ',' << a + 0.5 * z(rng) << '\n';
  }
  SelectOptions o;
  o.data = write_text("single.csv", out.str());
  o.response = "y";
  const auto slow = cmd_select(o).output.get<SelectReport>();
  o.fast = true;
  const auto fast = cmd_select(o).output.get<SelectReport>();
  EXPECT_EQ(slow.trace, fast.trace);
  EXPECT_EQ(fast.method, "first-fast");
}

TEST(CmdSelect, ConstantResponseIsDegenerate) {
  SelectOptions o;
  o.data = write_text("constant_sel.csv", "a,b,y\n1,2,5\n2,1,5\n3,7,5\n4,4,5\n");
  o.response = "y";
  EXPECT_EQ(cmd_select(o).exit_code, exit_degenerate);
}

TEST(Reports, JsonRoundTrip) {
  BenchmarkOptions o;
  o.function = BenchmarkId::friedman;
  o.p = 12;
  o.rho = 0.3;
  o.n = 400;
  o.reps = 3;
  o.seed = 8;
  o.groundtruth_outer = 5000;
  const BenchmarkReport report = run_benchmark(o);
  EXPECT_EQ(report.runs.size(), 3u);
  const auto text = nlohmann::json(report).dump();
  EXPECT_EQ(nlohmann::json::parse(text).get<BenchmarkReport>(), report);

  o.response = ResponseKind::binary;
  o.function = BenchmarkId::ishigami;
  o.p = 6;
  const BenchmarkReport binary = run_benchmark(o);
  EXPECT_FALSE(binary.mean_tau.has_value());
  EXPECT_EQ(binary.n_inner, 3u);
  EXPECT_EQ(nlohmann::json::parse(nlohmann::json(binary).dump()).get<BenchmarkReport>(), binary);

  SelectOptions s;
  s.data = shellfish_csv();
  s.response = "rings";
  s.categoricals = {"sex"};
  s.n_outer = 300;
  const auto sel = run_select(s);
  EXPECT_EQ(nlohmann::json::parse(nlohmann::json(sel).dump()).get<SelectReport>(), sel);
  const auto est = run_estimate(s);
  EXPECT_EQ(nlohmann::json::parse(nlohmann::json(est).dump()).get<EstimateReport>(), est);
}

TEST(CmdBenchmark, IshigamiExactSelection) {
  BenchmarkOptions o;
  o.p = 6;
  o.reps = 20;
  o.seed = 1;
  o.groundtruth_outer = 20'000;
  const auto report = run_benchmark(o);
  EXPECT_EQ(report.replications, 20u);
  EXPECT_GE(report.exact_rate, 0.95);
  ASSERT_TRUE(report.mean_tau.has_value());
  EXPECT_GE(*report.mean_tau, -1.0);
  EXPECT_LE(*report.mean_tau, 1.0);
  EXPECT_EQ(report.true_set, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(CmdBenchmark, RejectsTooFewInputs) {
  BenchmarkOptions o;
  o.function = BenchmarkId::friedman;
  o.p = 9;
  EXPECT_EQ(cmd_benchmark(o).exit_code, exit_input_error);
}

TEST(Executable, ExitCodes) {
  EXPECT_EQ(run_exe("estimate --data /nonexistent.csv --response y"), 2);
  EXPECT_EQ(run_exe("estimate --response y"), 2);
  EXPECT_EQ(run_exe("benchmark --function sobol --p 6"), 2);
  const auto constant = write_text("constant_exe.csv", "a,y\n1,3\n2,3\n3,3\n");
  EXPECT_EQ(run_exe("estimate --data " + constant.string() + " --response y"), 1);
  const auto ok = write_text("ok_exe.csv", "a,y\n1,1\n2,2.5\n3,2.9\n4,4.2\n5,5\n6,6.1\n");
  EXPECT_EQ(run_exe("estimate --data " + ok.string() + " --response y --no all --seed 3"), 0);
  std::ifstream in(tmp_file("stdout.txt"));
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("factors"), nlohmann::json::array({"a"}));
  EXPECT_EQ(run_exe("benchmark --function ishigami --p 6 --n 200 --reps 2 --groundtruth-no 2000"), 0);
}
