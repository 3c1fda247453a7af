#include "acid/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace acid {

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::optional<double> parse_decimal(const std::string& text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) return std::nullopt;
    return value;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::size_t header_value(const std::string& line, std::string_view key) {
  std::istringstream in(line);
  std::string word, value, extra;
  in >> word >> value;
  if (word != key || (in >> extra)) {
    throw Error(ErrorCode::MalformedHeader, "expected '" + std::string(key) + " <n>', got '" + line + "'");
  }
  auto n = parse_number<std::size_t>(value);
  if (!n) throw Error(ErrorCode::MalformedHeader, "bad " + std::string(key) + " '" + value + "'");
  return *n;
}

}  // namespace

std::size_t GridMap::passable_count() const {
  return static_cast<std::size_t>(std::count(passable.begin(), passable.end(), true));
}

GridMap parse_map(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.size() < 4) throw Error(ErrorCode::MalformedHeader, "map header is incomplete");
  {
    std::istringstream in(lines[0]);
    std::string word, type;
    in >> word >> type;
    if (word != "type" || type != "octile") {
      throw Error(ErrorCode::MalformedHeader, "expected 'type octile', got '" + lines[0] + "'");
    }
  }
  GridMap map;
  map.height = header_value(lines[1], "height");
  map.width = header_value(lines[2], "width");
  if (lines[3] != "map") {
    throw Error(ErrorCode::MalformedHeader, "expected 'map', got '" + lines[3] + "'");
  }
  std::size_t body_end = lines.size();
  while (body_end > 4 && lines[body_end - 1].empty()) --body_end;
  if (body_end - 4 != map.height) {
    throw Error(ErrorCode::DimensionMismatch,
                "height " + std::to_string(map.height) + " but " +
                    std::to_string(body_end - 4) + " rows");
  }
  map.passable.reserve(map.height * map.width);
  for (std::size_t r = 0; r < map.height; ++r) {
    const std::string& row = lines[4 + r];
    if (row.size() != map.width) {
      throw Error(ErrorCode::DimensionMismatch,
                  "row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                      " cells, width is " + std::to_string(map.width));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      switch (row[c]) {
        case '.': case 'G': map.passable.push_back(true); break;
        case '@': case 'O': case 'T': case 'S': case 'W': map.passable.push_back(false); break;
        default:
          throw Error(ErrorCode::UnknownCellChar,
                      std::string("'") + row[c] + "' at row " + std::to_string(r) +
                          ", column " + std::to_string(c));
      }
    }
  }
  return map;
}

std::string render_map(const GridMap& map) {
  std::ostringstream out;
  out << "type octile\nheight " << map.height << "\nwidth " << map.width << "\nmap\n";
  for (std::size_t r = 0; r < map.height; ++r) {
    for (std::size_t c = 0; c < map.width; ++c) {
      out << (map.passable[r * map.width + c] ? '.' : '@');
    }
    out << '\n';
  }
  return out.str();
}

std::optional<VertexId> GridGraph::vertex_at(Cell cell) const {
  if (cell.row >= height || cell.col >= width) return std::nullopt;
  return vertex_of[cell.row * width + cell.col];
}

GridGraph grid_to_graph(const GridMap& map, DelayPolicy policy, std::span<const Cell> subset) {
  GridGraph out;
  out.height = map.height;
  out.width = map.width;
  out.vertex_of.assign(map.height * map.width, std::nullopt);
  for (std::size_t r = 0; r < map.height; ++r) {
    for (std::size_t c = 0; c < map.width; ++c) {
      if (!map.is_passable({r, c})) continue;
      out.vertex_of[r * map.width + c] = static_cast<VertexId>(out.cell_of.size());
      out.cell_of.push_back({r, c});
    }
  }
  std::vector<Edge> edges;
  for (VertexId v = 0; v < out.cell_of.size(); ++v) {
    const Cell cell = out.cell_of[v];
    const Cell neighbours[] = {{cell.row - 1, cell.col}, {cell.row, cell.col - 1},
                               {cell.row, cell.col + 1}, {cell.row + 1, cell.col}};
    for (const Cell& n : neighbours) {
      // Unsigned wrap-around lands outside the map.
      if (auto u = out.vertex_at(n)) edges.emplace_back(v, *u);
    }
  }
  if (policy == DelayPolicy::AllVertices) {
    for (VertexId v = 0; v < out.cell_of.size(); ++v) edges.emplace_back(v, v);
  } else {
    std::vector<VertexId> loops;
    for (const Cell& cell : subset) {
      auto v = out.vertex_at(cell);
      if (!v) {
        throw Error(ErrorCode::SubsetOutOfBounds,
                    "cell (" + std::to_string(cell.row) + "," + std::to_string(cell.col) +
                        ") is not a passable cell of the map");
      }
      loops.push_back(*v);
    }
    std::sort(loops.begin(), loops.end());
    loops.erase(std::unique(loops.begin(), loops.end()), loops.end());
    for (VertexId v : loops) edges.emplace_back(v, v);
  }
  out.graph = Graph(out.cell_of.size(), edges);
  return out;
}

std::vector<ScenarioEntry> parse_scenario(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t first = 0;
  while (first < lines.size() && lines[first].empty()) ++first;
  if (first == lines.size()) throw Error(ErrorCode::VersionUnsupported, "scenario is empty");
  {
    std::istringstream in(lines[first]);
    std::string word, version;
    in >> word >> version;
    if (word != "version" || (version != "1" && version != "1.0")) {
      throw Error(ErrorCode::VersionUnsupported, "expected 'version 1', got '" + lines[first] + "'");
    }
  }
  std::vector<ScenarioEntry> entries;
  for (std::size_t k = first + 1; k < lines.size(); ++k) {
    const std::string& line = lines[k];
    if (line.empty()) continue;
    const std::size_t line_no = k + 1;
    auto malformed = [&](const std::string& why) {
      return Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": " + why);
    };
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
      const std::size_t tab = line.find('\t', begin);
      fields.push_back(line.substr(begin, tab - begin));
      if (tab == std::string::npos) break;
      begin = tab + 1;
    }
    if (fields.size() != 9) {
      throw malformed("expected 9 tab-separated fields, found " + std::to_string(fields.size()));
    }
    std::size_t numbers[7];
    for (int f : {0, 2, 3, 4, 5, 6, 7}) {
      auto value = parse_number<std::size_t>(fields[f]);
      if (!value) throw malformed("field " + std::to_string(f + 1) + " is not a natural number");
      numbers[f == 0 ? 0 : f - 1] = *value;
    }
    auto hint = parse_decimal(fields[8]);
    if (!hint) throw malformed("optimal length is not a number");
    ScenarioEntry entry;
    entry.bucket = numbers[0];
    entry.map_name = fields[1];
    entry.map_width = numbers[1];
    entry.map_height = numbers[2];
    entry.start = {numbers[4], numbers[3]};
    entry.goal = {numbers[6], numbers[5]};
    entry.optimal_length_hint = *hint;
    entries.push_back(std::move(entry));
  }
  return entries;
}

void check_scenario(const GridMap& map, std::span<const ScenarioEntry> entries) {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (!map.is_passable(entries[k].start) || !map.is_passable(entries[k].goal)) {
      throw Error(ErrorCode::InvariantViolation,
                  "scenario entry " + std::to_string(k) +
                      ": start or goal is not a passable cell of the map");
    }
  }
}

DelayPermissions PlanFile::effective_permissions() const {
  return permitted.empty() ? all_indices(plan) : permitted;
}

using nlohmann::json;

std::string write_plan(const PlanFile& file) {
  json doc;
  doc["format"] = "acid-plan";
  doc["version"] = 1;
  doc["semantics"] = std::string(to_string(file.semantics));
  json edges = json::array();
  for (const auto& [u, v] : file.graph.edges()) edges.push_back({u, v});
  doc["graph"] = {{"vertex_count", file.graph.vertex_count()}, {"edges", edges}};
  json agents = json::array();
  for (AgentId i = 0; i < file.plan.agent_count(); ++i) {
    json agent;
    agent["source"] = file.plan.sources[i];
    agent["goal"] = file.plan.goals[i];
    agent["path"] = file.plan.paths[i];
    if (!file.permitted.empty()) {
      agent["permitted"] = std::vector<std::size_t>(file.permitted[i].begin(), file.permitted[i].end());
    }
    if (!file.delays.empty()) {
      json delays = json::array();
      for (const auto& [index, count] : file.delays[i].counts()) delays.push_back({index, count});
      agent["delays"] = delays;
    }
    agents.push_back(agent);
  }
  doc["agents"] = agents;
  if (!file.injections.empty()) {
    json injections = json::array();
    for (const auto& r : file.injections) {
      injections.push_back({{"agent", r.agent}, {"step", r.step}, {"length", r.length},
                            {"conflict_step", r.conflict_step}});
    }
    doc["injections"] = injections;
  }
  return doc.dump(1) + "\n";
}

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::InvariantViolation, "plan file field '" + field + "': " + why);
}

template <typename T>
T get_field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad_field(where + key, "missing");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad_field(where + key, "has the wrong type");
  }
}

}  // namespace

PlanFile read_plan(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("plan file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad_field("(root)", "must be an object");
  if (get_field<std::string>(doc, "format", "") != "acid-plan") {
    throw Error(ErrorCode::SchemaVersionMismatch, "format is not 'acid-plan'");
  }
  const auto version = get_field<long long>(doc, "version", "");
  if (version != 1) {
    throw Error(ErrorCode::SchemaVersionMismatch,
                "plan file version " + std::to_string(version) + ", expected 1");
  }
  PlanFile file;
  if (doc.contains("semantics")) {
    auto semantics = parse_tail_semantics(get_field<std::string>(doc, "semantics", ""));
    if (!semantics) bad_field("semantics", "must be 'stay' or 'disappear'");
    file.semantics = *semantics;
  }
  const json graph = doc.value("graph", json());
  const auto vertex_count = get_field<std::size_t>(graph, "vertex_count", "graph.");
  const auto edges = get_field<std::vector<Edge>>(graph, "edges", "graph.");
  try {
    file.graph = Graph(vertex_count, edges);
  } catch (const Error& e) {
    bad_field("graph.edges", e.what());
  }

  if (!doc.contains("agents") || !doc["agents"].is_array()) bad_field("agents", "missing");
  const json& agents = doc["agents"];
  bool any_permitted = false, any_delays = false;
  for (const json& agent : agents) {
    any_permitted = any_permitted || agent.contains("permitted");
    any_delays = any_delays || agent.contains("delays");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const json& agent = agents[i];
    const std::string where = "agents[" + std::to_string(i) + "].";
    file.plan.sources.push_back(get_field<VertexId>(agent, "source", where));
    file.plan.goals.push_back(get_field<VertexId>(agent, "goal", where));
    file.plan.paths.push_back(get_field<Path>(agent, "path", where));
    if (any_permitted) {
      const auto indices = agent.contains("permitted")
                               ? get_field<std::vector<std::size_t>>(agent, "permitted", where)
                               : std::vector<std::size_t>{};
      file.permitted.emplace_back(indices.begin(), indices.end());
    }
    if (any_delays) {
      DelayAssignment delays;
      if (agent.contains("delays")) {
        for (auto [index, count] :
             get_field<std::vector<std::pair<std::size_t, std::size_t>>>(agent, "delays", where)) {
          delays.add(index, count);
        }
      }
      file.delays.push_back(std::move(delays));
    }
  }
  if (doc.contains("injections")) {
    const json& list = doc["injections"];
    if (!list.is_array()) bad_field("injections", "must be an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = "injections[" + std::to_string(k) + "].";
      InjectionRecord r;
      r.agent = get_field<std::size_t>(list[k], "agent", where);
      r.step = get_field<std::size_t>(list[k], "step", where);
      r.length = list[k].contains("length") ? get_field<std::size_t>(list[k], "length", where) : 1;
      r.conflict_step = get_field<std::size_t>(list[k], "conflict_step", where);
      if (r.agent >= agents.size()) bad_field(where + "agent", "is not an agent id");
      file.injections.push_back(r);
    }
  }
  check_plan(file.plan, &file.graph);
  return file;
}

std::string metrics_header() {
  return "map,instance,n_agents,iteration,seed,graph_mode,solver,success,status,"
         "wall_ms,build_ms,added_soc,delays_injected,conflicts_at_injection,expansions";
}

std::string write_metrics_csv(std::span<const MetricsRow> rows) {
  std::ostringstream out;
  out << metrics_header() << '\n';
  out << std::fixed << std::setprecision(3);
  for (const auto& row : rows) {
    const bool success = row.status == SolveStatus::Solved;
    out << row.map << ',' << row.instance << ',' << row.n_agents << ',' << row.iteration
        << ',' << row.seed << ',' << to_string(row.graph_mode) << ',' << row.solver << ','
        << (success ? 1 : 0) << ',' << to_string(row.status) << ',' << row.wall_ms << ','
        << row.build_ms << ',';
    if (success) out << row.added_soc;
    out << ',' << row.delays_injected << ',' << row.conflicts_at_injection << ','
        << row.expansions << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileUnreadable, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::FileUnreadable, "failed writing " + path.string());
}

}  // namespace acid
