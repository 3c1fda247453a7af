#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include <json.hpp>

#include "support.hpp"

using namespace acid;

namespace {

std::string map_text(std::size_t height, std::size_t width, const std::vector<std::string>& rows) {
  std::ostringstream out;
  out << "type octile\nheight " << height << "\nwidth " << width << "\nmap\n";
  for (const auto& row : rows) out << row << '\n';
  return out.str();
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvariantViolation;
}

const char* kScenarioRow = "0\tm.map\t4\t3\t1\t0\t2\t2\t3.0";

}  // namespace

TEST(ParseMap, MixedCells) {
  const GridMap map = parse_map(map_text(2, 2, {".@", ".."}));
  EXPECT_EQ(map.passable_count(), 3u);
  EXPECT_FALSE(map.is_passable({0, 1}));
  EXPECT_TRUE(map.is_passable({1, 1}));
}

TEST(ParseMap, HeightDisagreesWithRows) {
  EXPECT_EQ(code_of([] { parse_map(map_text(3, 2, {"..", ".."})); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { parse_map(map_text(2, 3, {"..", ".."})); }), ErrorCode::DimensionMismatch);
}

TEST(ParseMap, OpenEightByEight) {
  const GridMap map = parse_map(map_text(8, 8, std::vector<std::string>(8, "........")));
  EXPECT_EQ(map.passable_count(), 64u);
}

TEST(ParseMap, HeaderAndCharacterErrors) {
  EXPECT_EQ(code_of([] { parse_map("type octile\nheight 1\nmap\n.\n"); }), ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([] { parse_map("type octile\nheight x\nwidth 1\nmap\n.\n"); }),
            ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([] { parse_map(map_text(1, 2, {".?"})); }), ErrorCode::UnknownCellChar);
}

TEST(ParseMap, RenderRoundTrip) {
  const GridMap map = parse_map(map_text(3, 4, {"..@.", "@...", "..T."}));
  EXPECT_EQ(parse_map(render_map(map)), map);
}

TEST(GridToGraph, SmallestConnectedGrid) {
  GridMap map{1, 2, {true, true}};
  const GridGraph g = grid_to_graph(map, DelayPolicy::AllVertices);
  EXPECT_EQ(g.graph.vertex_count(), 2u);
  EXPECT_EQ(g.graph.edges(), (std::vector<Edge>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(GridToGraph, EmptySubsetMeansNoLoops) {
  GridMap map{1, 1, {true}};
  const GridGraph g = grid_to_graph(map, DelayPolicy::SubsetList, {});
  EXPECT_EQ(g.graph.vertex_count(), 1u);
  EXPECT_EQ(g.graph.edge_count(), 0u);
}

TEST(GridToGraph, TwoByTwoCounts) {
  GridMap map{2, 2, std::vector<bool>(4, true)};
  const GridGraph g = grid_to_graph(map, DelayPolicy::AllVertices);
  EXPECT_EQ(g.graph.vertex_count(), 4u);
  EXPECT_EQ(g.graph.edge_count(), 12u);
  EXPECT_EQ(g.graph.delay_vertices().size(), 4u);
}

TEST(GridToGraph, BlockedCellsAndSubset) {
  const GridMap map = parse_map(map_text(2, 3, {".@.", "..."}));
  const std::vector<Cell> subset{{1, 1}};
  const GridGraph g = grid_to_graph(map, DelayPolicy::SubsetList, subset);
  EXPECT_EQ(g.graph.vertex_count(), 5u);
  EXPECT_FALSE(g.vertex_at({0, 1}).has_value());
  const VertexId mid = *g.vertex_at({1, 1});
  EXPECT_EQ(g.cell_of[mid], (Cell{1, 1}));
  EXPECT_EQ(g.graph.delay_vertices(), (std::vector<VertexId>{mid}));
  const std::vector<Cell> blocked{{0, 1}};
  EXPECT_EQ(code_of([&] { grid_to_graph(map, DelayPolicy::SubsetList, blocked); }),
            ErrorCode::SubsetOutOfBounds);
  const std::vector<Cell> outside{{5, 0}};
  EXPECT_EQ(code_of([&] { grid_to_graph(map, DelayPolicy::SubsetList, outside); }),
            ErrorCode::SubsetOutOfBounds);
}

TEST(Scenario, OneRow) {
  const auto entries = parse_scenario(std::string("version 1\n") + kScenarioRow + "\n");
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].map_name, "m.map");
  EXPECT_EQ(entries[0].start, (Cell{0, 1}));
  EXPECT_EQ(entries[0].goal, (Cell{2, 2}));
  EXPECT_DOUBLE_EQ(entries[0].optimal_length_hint, 3.0);
}

TEST(Scenario, Errors) {
  EXPECT_EQ(code_of([] { parse_scenario("version 1\n0\tm.map\t4\t3\t1\t0\t2\t2\n"); }),
            ErrorCode::MalformedRow);
  EXPECT_EQ(code_of([] { parse_scenario(""); }), ErrorCode::VersionUnsupported);
  EXPECT_EQ(code_of([] { parse_scenario("version 2\n"); }), ErrorCode::VersionUnsupported);
  try {
    parse_scenario(std::string("version 1\n") + kScenarioRow + "\n0\tm\t1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Scenario, CheckAgainstMap) {
  const GridMap map = parse_map(map_text(3, 4, {"....", "....", "..@."}));
  auto entries = parse_scenario(std::string("version 1\n") + kScenarioRow + "\n");
  EXPECT_THROW(check_scenario(map, entries), Error);
  entries[0].goal = {1, 2};
  EXPECT_NO_THROW(check_scenario(map, entries));
}

TEST(PlanFile, RoundTrip) {
  PlanFile file;
  const auto f = fixtures::example_postponed_delay();
  file.graph = f.graph;
  file.plan = f.plan;
  file.semantics = TailSemantics::DisappearAtGoal;
  file.permitted = f.permitted;
  file.delays = {DelayAssignment{}, DelayAssignment{{4, 1}}, DelayAssignment{{2, 1}}};
  file.injections = {InjectionRecord{0, 1, 1, 4}};
  const PlanFile back = read_plan(write_plan(file));
  EXPECT_EQ(back.graph, file.graph);
  EXPECT_EQ(back.plan, file.plan);
  EXPECT_EQ(back.semantics, file.semantics);
  EXPECT_EQ(back.permitted, file.permitted);
  EXPECT_EQ(back.delays, file.delays);
  EXPECT_EQ(back.injections, file.injections);
}

TEST(PlanFileProperty, RandomPlansRoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto seed = fixtures::random_seed_plan(rng, 5, 1, 4, TailSemantics::StayAtGoal);
    if (!seed) continue;
    PlanFile file;
    file.graph = seed->first;
    file.plan = seed->second;
    const PlanFile back = read_plan(write_plan(file));
    EXPECT_EQ(back.plan, file.plan);
    EXPECT_EQ(back.graph, file.graph);
    EXPECT_TRUE(back.permitted.empty());
    EXPECT_EQ(back.effective_permissions(), all_indices(file.plan));
  }
}

TEST(PlanFile, TamperedPathRejected) {
  PlanFile file;
  file.graph = fixtures::grid_graph(2, 2);
  file.plan = Plan::from_paths({{0, 1, 3}});
  std::string text = write_plan(file);
  const auto pos = text.find("\"source\": 0");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 11, "\"source\": 2");
  EXPECT_EQ(code_of([&] { read_plan(text); }), ErrorCode::InvariantViolation);
}

TEST(PlanFile, EmptyAgentListRejected) {
  PlanFile file;
  file.graph = fixtures::grid_graph(2, 2);
  file.plan = Plan::from_paths({{0}});
  std::string text = write_plan(file);
  nlohmann::json doc = nlohmann::json::parse(text);
  doc["agents"] = nlohmann::json::array();
  EXPECT_EQ(code_of([&] { read_plan(doc.dump()); }), ErrorCode::InvariantViolation);
  doc = nlohmann::json::parse(text);
  doc["version"] = 2;
  EXPECT_EQ(code_of([&] { read_plan(doc.dump()); }), ErrorCode::SchemaVersionMismatch);
  doc = nlohmann::json::parse(text);
  doc["agents"][0].erase("path");
  try {
    read_plan(doc.dump());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("agents[0].path"), std::string::npos);
  }
}

TEST(MetricsCsv, HeaderOnly) {
  EXPECT_EQ(write_metrics_csv({}), metrics_header() + "\n");
}

TEST(MetricsCsv, SolvedAndTimedOutRows) {
  MetricsRow ok;
  ok.map = "grid";
  ok.n_agents = 3;
  ok.seed = 9;
  ok.solver = "cbs";
  ok.status = SolveStatus::Solved;
  ok.wall_ms = 1.5;
  ok.added_soc = 2;
  ok.delays_injected = 1;
  MetricsRow late = ok;
  late.status = SolveStatus::Timeout;
  const std::vector<MetricsRow> rows{ok, late};
  std::istringstream in(write_metrics_csv(rows));
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_EQ(first, "grid,0,3,0,9,cg,cbs,1,solved,1.500,0.000,2,1,0,0");
  EXPECT_EQ(second, "grid,0,3,0,9,cg,cbs,0,timeout,1.500,0.000,,1,0,0");
}
