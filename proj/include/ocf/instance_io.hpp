#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocf/game.hpp"

namespace ocf {

using Json = nlohmann::json;

inline Weight weight_from_json(const Json& v) {
  if (v.is_string()) return Weight::parse(v.get<std::string>());
  if (v.is_number_integer()) return Weight(v.get<long long>());
  if (v.is_number_unsigned()) return Weight(v.get<unsigned long long>());
  if (v.is_number_float()) return Weight::from_double(v.get<double>());
  throw ParseError("weight must be a \"p/q\" string or a number");
}

// Instance file: {"n": int, "edges": [{"i","j","w"}], optional "labels", optional "order"}.
struct InstanceFile {
  Game game;
  std::optional<std::vector<AgentId>> order;
};

inline InstanceFile instance_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("instance must be a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 0) {
    throw ParseError("instance needs a nonnegative integer field 'n'");
  }
  const auto n = static_cast<std::size_t>(doc["n"].get<long long>());
  std::vector<Edge> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ParseError("'edges' must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_object() || !e.contains("i") || !e.contains("j") || !e.contains("w")) {
        throw ParseError("each edge needs fields i, j, w");
      }
      if (!e["i"].is_number_integer() || !e["j"].is_number_integer()) {
        throw ParseError("edge endpoints must be integers");
      }
      const long long i = e["i"].get<long long>();
      const long long j = e["j"].get<long long>();
      if (i < 0 || j < 0) throw ParseError("edge endpoints must be nonnegative");
      edges.push_back({static_cast<AgentId>(i), static_cast<AgentId>(j), weight_from_json(e["w"])});
    }
  }
  InstanceFile out{Game::from_edges(n, edges), std::nullopt};
  if (doc.contains("labels")) out.game.set_labels(doc["labels"].get<std::vector<std::string>>());
  if (doc.contains("order")) out.order = doc["order"].get<std::vector<AgentId>>();
  return out;
}

inline Json instance_to_json(const Game& g, const std::optional<std::vector<AgentId>>& order = {}) {
  Json doc;
  doc["n"] = g.size();
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({{"i", e.i}, {"j", e.j}, {"w", e.w.str()}});
  doc["edges"] = std::move(edges);
  if (!g.labels().empty()) doc["labels"] = g.labels();
  if (order) doc["order"] = *order;
  return doc;
}

inline InstanceFile parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("instance is not valid JSON: ") + e.what());
  }
  return instance_from_json(doc);
}

inline InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

}  // namespace ocf
