#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include <json.hpp>

#include "support.hpp"

using namespace acid;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "acid");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("acid_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    write_text_file(path, text);
    return path.string();
  }
  std::string plan_file(const std::string& name, const Graph& g, const Plan& plan) {
    PlanFile file;
    file.graph = g;
    file.plan = plan;
    return write(name, write_plan(file));
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(CliTest, RepairNonCollidingPlan) {
  const Plan plan = Plan::from_paths({{0, 1, 2}, {3, 4, 5}});
  const auto file = plan_file("ok.json", fixtures::graph_from_paths(plan.paths), plan);
  const auto r = run({"repair", file, "--graph", "cg", "--solver", "cbs", "--out", path("out.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("added_soc: 0"), std::string::npos);
  const PlanFile back = read_plan(read_text_file(path("out.json")));
  EXPECT_EQ(back.plan, plan);
}

TEST_F(CliTest, RepairSwapIsInfeasible) {
  const Plan plan = Plan::from_paths({{0, 1}, {1, 0}});
  const auto file = plan_file("swap.json", fixtures::graph_from_paths(plan.paths), plan);
  EXPECT_EQ(run({"repair", file, "--graph", "cg"}).code, 3);
  EXPECT_EQ(run({"oracle", file}).code, 3);
}

TEST_F(CliTest, RepairExampleReportsOptimum) {
  const auto f = fixtures::example_postponed_delay();
  PlanFile pf;
  pf.graph = f.graph;
  pf.plan = f.plan;
  pf.permitted = f.permitted;
  const auto file = write("ex.json", write_plan(pf));
  for (const char* mode : {"cg", "icg"}) {
    const auto r = run({"repair", file, "--graph", mode});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("added_soc: 1"), std::string::npos) << r.out;
  }
}

TEST_F(CliTest, CorruptPlanNamesTheField) {
  const Plan plan = Plan::from_paths({{0, 1, 2}});
  std::string text = write_plan({fixtures::graph_from_paths(plan.paths), plan, {}, {}, {}, {}});
  nlohmann::json doc = nlohmann::json::parse(text);
  doc["agents"][0]["path"] = "oops";
  const auto file = write("bad.json", doc.dump());
  const auto r = run({"repair", file});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("agents[0].path"), std::string::npos) << r.err;
  EXPECT_EQ(run({"repair", path("missing.json")}).code, 1);
  EXPECT_EQ(run({"repair", file, "--graph", "zz"}).code, 1);
}

TEST_F(CliTest, ValidateListsConflicts) {
  const Plan plan = Plan::from_paths({{0, 1, 2}, {3, 1, 4}});
  const auto file = plan_file("c.json", fixtures::graph_from_paths(plan.paths), plan);
  const auto r = run({"validate", file});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("vertex agents 0,1 timestep 1 at 1"), std::string::npos) << r.out;
  const Plan ok = Plan::from_paths({{0, 1}, {2, 3}});
  EXPECT_EQ(run({"validate", plan_file("ok.json", fixtures::graph_from_paths(ok.paths), ok)}).code, 0);
}

TEST_F(CliTest, ReduceThenOracle) {
  const auto graph = write("g.json", R"({"vertex_count": 4, "edges": [[0,1],[1,2],[0,2],[2,3]]})");
  const auto r = run({"reduce-msc", graph, "--threshold", "3", "--start-only", "--out", path("h.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("agents: 4"), std::string::npos);
  EXPECT_NE(r.out.find("blocks: 4"), std::string::npos);
  EXPECT_NE(r.out.find("path_vertices: 17"), std::string::npos);
  const auto o = run({"oracle", path("h.json")});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("min_delay: 3"), std::string::npos) << o.out;
  EXPECT_EQ(run({"reduce-msc", graph, "--threshold", "60"}).code, 1);
}

TEST_F(CliTest, SolveInjectRepairPipeline) {
  const std::string map = ACID_TEST_DATA "/tiny-8-8.map";
  const std::string scen = ACID_TEST_DATA "/tiny-8-8.scen";
  const auto s = run({"solve", "--map", map, "--scen", scen, "--agents", "6", "--out", path("seed.json")});
  ASSERT_EQ(s.code, 0) << s.out << s.err;
  const auto i = run({"inject", path("seed.json"), "--seed", "3", "--out", path("delayed.json")});
  if (i.code == 3) GTEST_SKIP() << "no collision-inducing delay for this seed";
  ASSERT_EQ(i.code, 0) << i.err;
  const auto again = run({"inject", path("seed.json"), "--seed", "3", "--out", path("again.json")});
  EXPECT_EQ(read_text_file(path("delayed.json")), read_text_file(path("again.json")));
  EXPECT_EQ(run({"validate", path("delayed.json")}).code, 4);
  for (const char* mode : {"og", "cg", "icg"}) {
    const auto r = run({"repair", path("delayed.json"), "--graph", mode, "--out", path("fixed.json")});
    EXPECT_EQ(r.code, 0) << mode << r.err;
    EXPECT_EQ(run({"validate", path("fixed.json")}).code, 0);
  }
}

TEST_F(CliTest, BenchWritesCsv) {
  const auto config = write("bench.json", std::string(R"({"map": ")") + ACID_TEST_DATA +
                                              R"(/tiny-8-8.map", "scenario": ")" + ACID_TEST_DATA +
                                              R"(/tiny-8-8.scen", "agent_counts": [5], "iterations": 2,
    "modes": ["cg", "icg"], "time_limit": 20, "seed": 1})");
  const auto r = run({"bench", config, "--out", path("m.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = read_text_file(path("m.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), metrics_header());
}

TEST_F(CliTest, NoSubcommandIsAnError) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}
