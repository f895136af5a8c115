#include "edgelq/config.hpp"

#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "edgelq/errors.hpp"

namespace edgelq {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

const json& require(const json& node, const std::string& field) {
  if (!node.contains(field)) fail(field, "missing");
  return node.at(field);
}

double require_number(const json& node, const std::string& field) {
  const json& v = require(node, field);
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

int require_int(const json& node, const std::string& field) {
  const json& v = require(node, field);
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<int>();
}

Mat require_matrix(const json& node, const std::string& field, int rows,
                   int cols) {
  const json& v = require(node, field);
  if (!v.is_array() || static_cast<int>(v.size()) != rows) {
    fail(field, "expected " + std::to_string(rows) + " rows");
  }
  Mat out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = v.at(static_cast<size_t>(r));
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      fail(field + "[" + std::to_string(r) + "]",
           "expected " + std::to_string(cols) + " numbers");
    }
    for (int c = 0; c < cols; ++c) {
      const json& cell = row.at(static_cast<size_t>(c));
      if (!cell.is_number()) {
        fail(field + "[" + std::to_string(r) + "]", "expected a number");
      }
      out(r, c) = cell.get<double>();
    }
  }
  return out;
}

Vec require_vector(const json& node, const std::string& field, int size) {
  const json& v = require(node, field);
  if (!v.is_array() || static_cast<int>(v.size()) != size) {
    fail(field, "expected " + std::to_string(size) + " numbers");
  }
  Vec out(size);
  for (int k = 0; k < size; ++k) {
    const json& cell = v.at(static_cast<size_t>(k));
    if (!cell.is_number()) fail(field, "expected a number");
    out(k) = cell.get<double>();
  }
  return out;
}

LeaderTerm::Kind parse_kind(const std::string& text,
                            const std::string& field) {
  if (text == "poly") return LeaderTerm::Kind::poly;
  if (text == "sin") return LeaderTerm::Kind::sin;
  if (text == "cos") return LeaderTerm::Kind::cos;
  fail(field, "expected one of poly, sin, cos");
}

}  // namespace

GameSpec parse_game_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config parse error: ") + err.what());
  }
  if (!root.is_object()) {
    throw ConfigError("config root: expected a JSON object");
  }

  const json& edges_node = require(root, "edges");
  if (!edges_node.is_array() || edges_node.empty()) {
    fail("edges", "expected a nonempty array of [tail, head] pairs");
  }
  std::vector<std::pair<int, int>> edges;
  for (size_t k = 0; k < edges_node.size(); ++k) {
    const json& e = edges_node.at(k);
    const std::string field = "edges[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2 || !e.at(0).is_number_integer() ||
        !e.at(1).is_number_integer()) {
      fail(field, "expected a [tail, head] integer pair");
    }
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  const int m = static_cast<int>(edges.size());

  const int q = require_int(root, "q");
  if (q < 1) fail("q", "must be at least 1");
  const double tau = require_number(root, "tau");
  if (tau < 0.0) fail("tau", "must be nonnegative");
  const double horizon = require_number(root, "horizon");
  if (!(horizon > tau)) fail("horizon", "must exceed tau");

  const json& initial = require(root, "initial");
  if (!initial.is_object()) fail("initial", "expected an object");
  const json& pos_node = require(initial, "positions");
  if (!pos_node.is_array() || pos_node.size() < 2) {
    fail("initial.positions", "expected at least two rows (node 0 first)");
  }
  const int nodes = static_cast<int>(pos_node.size());
  const Mat pos0 = require_matrix(initial, "positions", nodes, q);
  const Mat vel0 = require_matrix(initial, "velocities", nodes, q);
  const int agents = nodes - 1;

  DirectedGraph graph = [&] {
    try {
      return DirectedGraph(nodes, edges);
    } catch (const std::exception& err) {
      fail("edges", err.what());
    }
  }();

  const json& weights_node = require(root, "weights");
  if (!weights_node.is_object()) fail("weights", "expected an object");
  const Mat mu = require_matrix(weights_node, "mu", agents, m);
  const Mat omega = require_matrix(weights_node, "omega", agents, m);
  const Vec r = require_vector(weights_node, "r", agents);
  EdgeWeights weights = [&] {
    try {
      return EdgeWeights(graph, mu, omega, r);
    } catch (const std::exception& err) {
      fail("weights", err.what());
    }
  }();

  const json& leader_node = require(root, "leader");
  if (!leader_node.is_array()) {
    fail("leader", "expected an array of basis terms");
  }
  std::vector<LeaderTerm> terms;
  for (size_t k = 0; k < leader_node.size(); ++k) {
    const json& t = leader_node.at(k);
    const std::string field = "leader[" + std::to_string(k) + "]";
    if (!t.is_object()) fail(field, "expected an object");
    LeaderTerm term;
    term.coord = require_int(t, "coord");
    if (term.coord < 0 || term.coord >= q) {
      fail(field + ".coord", "out of range for q");
    }
    const json& kind = require(t, "kind");
    if (!kind.is_string()) fail(field + ".kind", "expected a string");
    term.kind = parse_kind(kind.get<std::string>(), field + ".kind");
    term.coefficient = require_number(t, "coefficient");
    term.param = require_number(t, "param");
    if (term.kind == LeaderTerm::Kind::poly &&
        (term.param < 0.0 ||
         term.param != static_cast<double>(static_cast<int>(term.param)))) {
      fail(field + ".param", "poly power must be a nonnegative integer");
    }
    terms.push_back(term);
  }
  LeaderTrajectory leader = [&] {
    try {
      return LeaderTrajectory::from_position_basis(q, std::move(terms));
    } catch (const std::exception& err) {
      fail("leader", err.what());
    }
  }();

  try {
    return make_game_spec(std::move(graph), std::move(weights), q, tau,
                          horizon, pos0, vel0, std::move(leader));
  } catch (const std::exception& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }
}

GameSpec load_game_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_game_config(buffer.str());
}

}  // namespace edgelq
