#include "nashflow/experiment.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "nashflow/errors.h"

using namespace nashflow;
namespace fs = std::filesystem;

namespace {

const char* kRps = R"({"run_id": "rps", "seed": 5, "rounds": 300,
  "game": {"generator": "rock_paper_scissors"},
  "learners": {"type": "da", "regularizer": {"kind": "entropy", "epsilon": 0.2}},
  "feedback": {"kind": "individual", "noise": {"type": "uniform", "half_width": 0.25}}})";

std::vector<std::string> Violations(const std::string& text) {
  try {
    ParseConfig(text);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool HasPrefix(const std::vector<std::string>& v, const std::string& prefix) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ParseConfig, BroadcastsLearnerAndFillsDefaults) {
  const auto c = ParseConfig(kRps);
  EXPECT_EQ(c.run_id, "rps");
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.rounds, 300);
  ASSERT_EQ(c.learners.size(), 2u);
  EXPECT_EQ(c.learners[1].type, LearnerType::kDa);
  EXPECT_DOUBLE_EQ(c.learners[1].regularizer.epsilon, 0.2);
  EXPECT_EQ(c.feedback.noise.kind, NoiseKind::kUniform);
  EXPECT_EQ(BuildGame(c.game).num_actions(0), 3);
}

TEST(ParseConfig, InlineGame) {
  const auto c = ParseConfig(R"({"game": {"players": 2, "actions": [2, 3],
      "payoffs": [[1, 2, 3, 4, 5, 6], [6, 5, 4, 3, 2, 1]]}, "learners": {"type": "fp"},
      "feedback": {"kind": "global"}})");
  const auto g = BuildGame(c.game);
  EXPECT_EQ(g.payoff(0, {1, 2}), 6.0);
  EXPECT_EQ(g.payoff(1, {0, 1}), 5.0);
}

TEST(ParseConfig, CollectsEveryViolation) {
  const auto v = Violations(R"({"rounds": -3, "bogus": 1,
      "game": {"players": 2, "actions": [2, 2], "payoffs": [[1, 2, 3], [1, 2, 3, 4]]},
      "learners": {"type": "hedge"}})");
  EXPECT_TRUE(HasPrefix(v, "/rounds"));
  EXPECT_TRUE(HasPrefix(v, "/bogus"));
  EXPECT_TRUE(HasPrefix(v, "/game/payoffs/0"));
  EXPECT_TRUE(HasPrefix(v, "/learners/type"));
  const auto it = std::find_if(v.begin(), v.end(),
                               [](const std::string& s) { return s.rfind("/game/payoffs/0", 0) == 0; });
  ASSERT_NE(it, v.end());
  EXPECT_NE(it->find("has length 3, expected 4"), std::string::npos);
}

TEST(ParseConfig, FeedbackCompatibility) {
  auto v = Violations(R"({"game": {"generator": "matching_pennies"},
      "learners": {"type": "fp"}, "feedback": {"kind": "individual"}})");
  EXPECT_FALSE(v.empty());
  v = Violations(R"({"game": {"generator": "matching_pennies"},
      "learners": {"type": "da", "estimator": "expected"},
      "feedback": {"kind": "local", "graph": "path"}})");
  EXPECT_FALSE(v.empty());
  v = Violations(R"({"game": {"generator": "matching_pennies"},
      "learners": {"type": "br", "mu": {"kind": "inverse_k"}, "lambda": {"kind": "inverse_k"}}})");
  EXPECT_TRUE(HasPrefix(v, "/learners"));
  v = Violations(R"({"game": {"generator": "matching_pennies"},
      "learners": {"type": "da", "p_floor": 0.5}})");
  EXPECT_TRUE(HasPrefix(v, "/learners/p_floor"));
}

TEST(ParseConfig, EffectiveConfigRoundTrips) {
  const auto c = ParseConfig(kRps);
  const auto text = EffectiveConfigJson(c);
  const auto again = ParseConfig(text);
  EXPECT_EQ(EffectiveConfigJson(again), text);
  EXPECT_EQ(ConfigHash(again), ConfigHash(c));
  EXPECT_EQ(ConfigHash(c).size(), 16u);
  auto other = c;
  other.seed = 6;
  EXPECT_NE(ConfigHash(other), ConfigHash(c));
}

TEST(Csv, RoundTrip) {
  const auto c = ParseConfig(kRps);
  const auto t = RunRepeatedGame(BuildGame(c.game), c.learners, c.feedback, 50, c.seed);
  const auto csv = TrajectoryCsv(t, "rps");
  const auto parsed = ParseTrajectoryCsv(csv);
  EXPECT_EQ(parsed.run_id, "rps");
  EXPECT_EQ(parsed.action_counts, (std::vector<int>{3, 3}));
  ASSERT_EQ(parsed.profiles.size(), 51u);
  for (std::size_t k = 0; k < parsed.profiles.size(); ++k) {
    EXPECT_EQ(parsed.profiles[k], t.ProfileAt(static_cast<std::int64_t>(k)));
  }
  EXPECT_EQ(TrajectoryCsv(parsed.trajectory, "rps"), csv);
  EXPECT_THROW(ParseTrajectoryCsv("run_id,round\nx,1\n"), InvalidInputError);
}

TEST(Csv, FormatsSeventeenDigits) {
  EXPECT_EQ(FormatDouble(0.1), "0.10000000000000001");
  EXPECT_EQ(FormatDouble(0.5), "0.5");
  EXPECT_EQ(std::stod(FormatDouble(1.0 / 3)), 1.0 / 3);
}

TEST(RunExperiment, WritesFilesAndSummary) {
  const auto dir = fs::temp_directory_path() / "nashflow_experiment_test";
  fs::remove_all(dir);
  const auto c = ParseConfig(kRps);
  const auto out = RunExperiment(c, dir);
  EXPECT_TRUE(fs::exists(out.csv));
  const auto summary = nlohmann::json::parse(Slurp(out.summary));
  EXPECT_EQ(summary["run_id"], "rps");
  EXPECT_EQ(summary["config_hash"], ConfigHash(c));
  EXPECT_EQ(summary["csv_schema"], kCsvSchema);
  EXPECT_EQ(summary["dynamics"][0], "DA-d");
  EXPECT_TRUE(summary.contains("timing"));
  const auto csv = Slurp(out.csv);
  const auto lines = std::count(csv.begin(), csv.end(), '\n');
  EXPECT_EQ(lines, 1 + 301 * 2);
  fs::remove_all(dir);
}

TEST(RunExperiment, BytesIdenticalAcrossThreads) {
  const auto c = ParseConfig(kRps);
  const auto base = fs::temp_directory_path() / "nashflow_threads_test";
  fs::remove_all(base);
  const auto serial = RunExperiment(c, base / "serial");
  const std::string expect = Slurp(serial.csv);
  std::vector<std::thread> pool;
  for (int j = 0; j < 4; ++j) {
    pool.emplace_back([&, j] { RunExperiment(c, base / ("t" + std::to_string(j))); });
  }
  for (auto& th : pool) th.join();
  for (int j = 0; j < 4; ++j) {
    EXPECT_EQ(Slurp(base / ("t" + std::to_string(j)) / "trajectory.csv"), expect);
  }
  fs::remove_all(base);
}

TEST(Instances, ParseAndReject) {
  const auto r = ParseRoutingInstance(R"({"nodes": 3, "source": 0, "destination": 2,
      "edges": [{"from": 0, "to": 1, "q": 0.9, "tau": 1}, {"from": 1, "to": 2, "q": 0.8, "tau": 2}],
      "jammers": [[1]], "lambda": 0.1})");
  EXPECT_EQ(r.edges.size(), 2u);
  EXPECT_EQ(r.jammer_nodes[0], (std::vector<int>{1}));
  EXPECT_DOUBLE_EQ(r.tradeoff, 0.1);
  EXPECT_THROW(ParseRoutingInstance(R"({"nodes": 3, "edges": "x"})"), ConfigError);

  const auto g = ParseGridInstance(R"({"s": [[1]], "load": [1], "cap": [2],
      "unit_cost": [0.5], "price": 1, "weight": [1]})");
  EXPECT_EQ(g.num_buses(), 1);
  EXPECT_THROW(ParseGridInstance(R"({"s": 3})"), ConfigError);

  const auto d = ParseDmlInstance(R"({"dim": 1, "nodes": [{"features": [[1], [2]], "targets": [1, 2]}]})");
  EXPECT_EQ(d.nodes.size(), 1u);
  EXPECT_THROW(ParseDmlInstance(R"({"nodes": 4})"), ConfigError);

  const auto p = ParseProfile("[[0.5, 0.5], [1, 0, 0]]");
  EXPECT_EQ(p[1], Simplex::Vertex(3, 0));
  EXPECT_THROW(ParseProfile("[[0.5, 0.6]]"), ConfigError);
}
