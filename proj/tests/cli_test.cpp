#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "currsim/experiments.hpp"

namespace currsim::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "currsim");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::map<std::string, std::string> report(const std::string& text) {
  std::map<std::string, std::string> kv;
  for (const auto& l : lines(text)) {
    const auto sp = l.find(' ');
    kv[l.substr(0, sp)] = l.substr(sp + 1);
  }
  return kv;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("currsim_cli_" + name); }

std::string fixture(const std::string& name) { return std::string(CURRSIM_FIXTURE_DIR) + "/" + name; }

TEST(Grid, RangesAndLists) {
  EXPECT_EQ(parse_real_grid("0:0.3:0.1"), (std::vector<double>{0.0, 0.1, 0.2, 0.3}));
  EXPECT_EQ(parse_real_grid("0.5"), (std::vector<double>{0.5}));
  EXPECT_EQ(parse_real_grid("0.1,0.2"), (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(parse_count_grid("10,100,1000"), (std::vector<unsigned long long>{10, 100, 1000}));
  EXPECT_EQ(parse_count_grid("10:30:10"), (std::vector<unsigned long long>{10, 20, 30}));
}

TEST(Grid, Malformed) {
  for (const char* s : {"", "a", "0:1", "0:1:0", "1:0:0.1", "0.1,,0.2", "0.1,", "0:1:x"}) {
    EXPECT_THROW(parse_real_grid(s), std::invalid_argument) << s;
  }
  for (const char* s : {"", "0", "-5", "1.5", "10:5:1", "x"}) {
    EXPECT_THROW(parse_count_grid(s), std::invalid_argument) << s;
  }
}

TEST(Generate, CompleteGraph) {
  const Result r = invoke({"generate", "--n", "4", "--p", "1.0"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"n 4", "0 1", "0 2", "0 3", "1 2", "1 3", "2 3"}));
}

TEST(Generate, TwoCommunitiesCarryLabels) {
  const Result r = invoke({"generate", "--n", "6", "--p-intra", "1", "--p-inter", "0"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_GE(l.size(), 2u);
  EXPECT_EQ(l[1], "communities 0 0 0 1 1 1");
  EXPECT_EQ(l.size(), 2u + 6u);
}

TEST(Generate, DeterministicAndWritesFile) {
  const auto a = invoke({"generate", "--n", "30", "--p", "0.2", "--seed", "5"});
  const auto b = invoke({"generate", "--n", "30", "--p", "0.2", "--seed", "5"});
  const auto c = invoke({"generate", "--n", "30", "--p", "0.2", "--seed", "6"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  const fs::path path = temp_file("graph.edges");
  ASSERT_EQ(invoke({"generate", "--n", "30", "--p", "0.2", "--seed", "5", "--out", path.string()}).code, kOk);
  std::ifstream in(path);
  std::stringstream file;
  file << in.rdbuf();
  EXPECT_EQ(file.str(), a.out);
  fs::remove(path);
}

TEST(Generate, UsageErrors) {
  EXPECT_EQ(invoke({"generate", "--n", "4"}).code, kUsageError);
  EXPECT_EQ(invoke({"generate", "--n", "4", "--p", "2"}).code, kUsageError);
  EXPECT_EQ(invoke({"generate", "--n", "4", "--p", "0.5", "--p-intra", "0.5", "--p-inter", "0.1"}).code,
            kUsageError);
  EXPECT_EQ(invoke({"generate", "--n", "4", "--p-intra", "0.5"}).code, kUsageError);
  EXPECT_EQ(invoke({"generate", "--n", "4", "--p", "1.0", "--bogus", "1"}).code, kUsageError);
  EXPECT_EQ(invoke({"generate", "--n", "four", "--p", "1.0"}).code, kUsageError);
  EXPECT_EQ(invoke({"frobnicate"}).code, kUsageError);
}

TEST(Generate, UnwritableOutputIsRuntimeError) {
  EXPECT_EQ(invoke({"generate", "--n", "4", "--p", "1", "--out", "/nonexistent/dir/g.edges"}).code,
            kRuntimeError);
}

TEST(Help, ExitsZero) { EXPECT_EQ(invoke({"--help"}).code, kOk); }

TEST(Run, EmptyGraphReport) {
  const Result r = invoke({"run", "--n", "20", "--p", "0"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto kv = report(r.out);
  EXPECT_EQ(kv.at("n"), "20");
  EXPECT_EQ(kv.at("edges"), "0");
  EXPECT_EQ(kv.at("switches"), "0");
  EXPECT_EQ(kv.at("converged"), "true");
  EXPECT_EQ(kv.at("currencies"), "20");
  EXPECT_EQ(kv.at("components"), "20");
  EXPECT_EQ(kv.at("social_utility"), "0");
}

TEST(Run, TraceIsStrictlyIncreasing) {
  const fs::path trace = temp_file("trace.csv");
  const fs::path state = temp_file("state.txt");
  const Result r = invoke({"run", "--n", "100", "--p", "0.05", "--seed", "3", "--trace", trace.string(),
                           "--state-out", state.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::ifstream in(trace);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,utility");
  long long prev_step = -1;
  long long prev_utility = std::numeric_limits<long long>::min();
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const long long step = std::stoll(line.substr(0, comma));
    const long long utility = std::stoll(line.substr(comma + 1));
    EXPECT_GT(step, prev_step);
    EXPECT_GT(utility, prev_utility);
    prev_step = step;
    prev_utility = utility;
    ++rows;
  }
  const auto kv = report(r.out);
  EXPECT_EQ(std::to_string(rows - 1), kv.at("switches"));
  EXPECT_EQ(std::to_string(prev_utility), kv.at("social_utility"));
  std::ifstream st(state);
  const CurrencyState final_state = read_state(st);
  EXPECT_EQ(final_state.size(), 100u);
  fs::remove(trace);
  fs::remove(state);
}

TEST(Run, K22SynchronousCycle) {
  const Result r = invoke({"run", "--graph", fixture("k22.edges"), "--schedule", "synchronous",
                           "--initial", "unified"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto kv = report(r.out);
  EXPECT_EQ(kv.at("cycle_detected"), "true");
  EXPECT_EQ(kv.at("converged"), "false");
}

TEST(Run, BridgedTrianglesFixture) {
  const Result r = invoke({"run", "--graph", fixture("two_triangles.edges")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto kv = report(r.out);
  EXPECT_EQ(kv.at("n"), "6");
  EXPECT_EQ(kv.at("edges"), "7");
  EXPECT_EQ(kv.at("converged"), "true");
}

TEST(Run, MissingGraphFileIsRuntimeError) {
  EXPECT_EQ(invoke({"run", "--graph", "/nonexistent.edges"}).code, kRuntimeError);
}

TEST(Run, SeedFromEnvironmentAndFlagPrecedence) {
  ::setenv("SIM_SEED", "77", 1);
  const auto env = report(invoke({"run", "--n", "30", "--p", "0.1"}).out);
  const auto flag = report(invoke({"run", "--n", "30", "--p", "0.1", "--seed", "5"}).out);
  ::unsetenv("SIM_SEED");
  const auto plain = report(invoke({"run", "--n", "30", "--p", "0.1", "--seed", "77"}).out);
  EXPECT_EQ(env.at("seed"), "77");
  EXPECT_EQ(flag.at("seed"), "5");
  EXPECT_EQ(env, plain);
}

TEST(Run, ConfigFileThenFlags) {
  const fs::path cfg = temp_file("exp.cfg");
  {
    std::ofstream out(cfg);
    out << "n = 40\np = 0.1\nseed = 12\nschedule = synchronous\n";
  }
  const auto from_file = report(invoke({"run", "--config", cfg.string()}).out);
  EXPECT_EQ(from_file.at("n"), "40");
  EXPECT_EQ(from_file.at("seed"), "12");
  EXPECT_EQ(from_file.at("schedule"), "synchronous");
  const auto overridden = report(invoke({"run", "--config", cfg.string(), "--seed", "13"}).out);
  EXPECT_EQ(overridden.at("seed"), "13");
  EXPECT_EQ(overridden.at("n"), "40");
  {
    std::ofstream out(cfg);
    out << "n = 40\nwat = 1\n";
  }
  EXPECT_EQ(invoke({"run", "--config", cfg.string()}).code, kUsageError);
  fs::remove(cfg);
}

TEST(SweepOne, ExtremesOfDensity) {
  const Result r = invoke({"sweep-one", "--n", "20", "--values", "0,1", "--replications", "5", "--workers", "2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream in(r.out);
  const auto pts = read_sweep_csv(in);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].mean_currencies, 20.0);
  EXPECT_EQ(pts[0].frac_single, 0.0);
  EXPECT_EQ(pts[1].frac_single, 1.0);
  EXPECT_EQ(pts[1].replications, 5u);
  EXPECT_EQ(lines(r.out).front(), kSweepCsvHeader);
}

TEST(SweepOne, RangeMatchesValues) {
  const auto a = invoke({"sweep-one", "--n", "15", "--range", "0:0.2:0.1", "--replications", "3"});
  const auto b = invoke({"sweep-one", "--n", "15", "--values", "0,0.1,0.2", "--replications", "3"});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(SweepOne, GridErrors) {
  EXPECT_EQ(invoke({"sweep-one", "--n", "10", "--replications", "2"}).code, kUsageError);
  EXPECT_EQ(invoke({"sweep-one", "--values", "0.1,abc"}).code, kUsageError);
  EXPECT_EQ(invoke({"sweep-one", "--range", "0.3"}).code, kUsageError);
  EXPECT_EQ(invoke({"sweep-one", "--values", "0.2,0.1"}).code, kUsageError);
  EXPECT_EQ(invoke({"sweep-one", "--values", "0.1", "--range", "0:1:0.5"}).code, kUsageError);
}

TEST(SweepTwo, UnifiedStartWithoutCrossLinks) {
  const Result r = invoke({"sweep-two", "--n", "20", "--p-intra", "0.5", "--values", "0", "--initial",
                           "unified", "--replications", "4"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream in(r.out);
  const auto pts = read_sweep_csv(in);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].frac_single, 0.0);
  EXPECT_EQ(pts[0].param, "p_inter");
}

TEST(Bounds, RowsAreConsistent) {
  const Result r = invoke({"bounds", "--p-intra", "0.3", "--p-inter", "0.1", "--n", "100,200,400,800"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], "N,p_intra,p_inter,p_av,k_N,flip_exact,rho_a,rho_r,geom_bound,union_bound");
  double prev_union = 1e300;
  for (std::size_t i = 1; i < l.size(); ++i) {
    std::vector<std::string> f;
    std::istringstream row(l[i]);
    for (std::string cell; std::getline(row, cell, ',');) f.push_back(cell);
    ASSERT_EQ(f.size(), 10u);
    EXPECT_EQ(f[1], "0.3");
    EXPECT_EQ(f[3], "0.2");
    const double flip = std::stod(f[5]);
    EXPECT_GT(flip, 0.0);
    EXPECT_LT(flip, 1.0);
    const double union_bound = std::stod(f[9]);
    EXPECT_LT(union_bound, prev_union);
    prev_union = union_bound;
  }
}

TEST(Bounds, ExactHalvesAccepted) {
  EXPECT_EQ(invoke({"bounds", "--p-intra", "0.3", "--p-inter", "0.1", "--n", "10", "--trials", "exact_halves"}).code,
            kOk);
  EXPECT_EQ(invoke({"bounds", "--p-intra", "0.3", "--p-inter", "0.1", "--n", "10", "--trials", "nope"}).code,
            kUsageError);
}

TEST(Bounds, RejectsInvalidRates) {
  const Result equal = invoke({"bounds", "--p-intra", "0.3", "--p-inter", "0.3", "--n", "10"});
  EXPECT_EQ(equal.code, kUsageError);
  EXPECT_TRUE(equal.out.empty());
  EXPECT_EQ(invoke({"bounds", "--p-intra", "0.1", "--p-inter", "0.3", "--n", "10"}).code, kUsageError);
  EXPECT_EQ(invoke({"bounds", "--p-intra", "0.3", "--p-inter", "0.1", "--n", "ten"}).code, kUsageError);
  EXPECT_EQ(invoke({"bounds", "--p-intra", "0.3", "--n", "10"}).code, kUsageError);
}

}  // namespace
}  // namespace currsim::cli
