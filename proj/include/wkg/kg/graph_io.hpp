#pragma once
// Graph exchange formats.
//
// jsonl: header line {"format":"wkg-graph","version":1,...}, then one line per
// node ordered by (label, key), then one per edge ordered by (type,
// package_id). DateTime values are written as
// {"$datetime": "<iso-8601>", "seconds": <float>} so a round trip is exact.
//
// cypher-script: one CREATE per node and one MATCH ... CREATE per edge, each on
// its own line, loadable by a Cypher-speaking database.

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wkg/error.hpp"
#include "wkg/kg/build.hpp"
#include "wkg/kg/graph.hpp"
#include "wkg/time.hpp"

namespace wkg::kg {

enum class GraphFormat { Jsonl, CypherScript };

inline constexpr std::string_view kGraphFormat = "wkg-graph";
inline constexpr int kGraphFormatVersion = 1;

inline GraphFormat parse_graph_format(std::string_view s) {
  if (s == "jsonl") return GraphFormat::Jsonl;
  if (s == "cypher" || s == "cypher-script") return GraphFormat::CypherScript;
  throw Error(ErrorCode::InvalidArgument, "unknown graph format '" + std::string(s) + "'");
}

inline nlohmann::json value_to_json(const Value& v, const Clock& clock) {
  using K = Value::Kind;
  switch (v.kind()) {
    case K::Null: return nullptr;
    case K::Bool: return v.as_bool();
    case K::Int: return v.as_int();
    case K::Float: return v.as_float();
    case K::Text: return v.as_text();
    case K::DateTime:
      return {{"$datetime", clock.iso(v.as_datetime().seconds)},
              {"seconds", v.as_datetime().seconds}};
    case K::List: {
      auto arr = nlohmann::json::array();
      for (const auto& x : v.as_list()) arr.push_back(value_to_json(x, clock));
      return arr;
    }
    case K::Node:
    case K::Edge: break;
  }
  throw Error(ErrorCode::InvalidArgument, "entity references are not property values");
}

inline Value value_from_json(const nlohmann::json& j, const Clock& clock) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return {};
    case nlohmann::json::value_t::boolean: return j.get<bool>();
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned: return j.get<std::int64_t>();
    case nlohmann::json::value_t::number_float: return j.get<double>();
    case nlohmann::json::value_t::string: return j.get<std::string>();
    case nlohmann::json::value_t::array: {
      List out;
      for (const auto& x : j) out.push_back(value_from_json(x, clock));
      return out;
    }
    case nlohmann::json::value_t::object:
      if (j.contains("seconds")) return DateTime{j.at("seconds").get<double>()};
      if (j.contains("$datetime")) return DateTime{clock.seconds(j.at("$datetime").get<std::string>())};
      break;
    default: break;
  }
  throw Error(ErrorCode::ParseFailure, "unsupported property value " + j.dump());
}

namespace detail {

inline nlohmann::json props_to_json(const Props& props, const Clock& clock) {
  auto out = nlohmann::json::object();
  for (const auto& [k, v] : props) out[k] = value_to_json(v, clock);
  return out;
}

inline Props props_from_json(const nlohmann::json& j, const Clock& clock) {
  Props out;
  for (const auto& [k, v] : j.items()) out.emplace(k, value_from_json(v, clock));
  return out;
}

inline nlohmann::json key_to_json(const NodeKey& k) {
  return {{"label", label_name(k.label)}, {"key", k.key}};
}

inline NodeKey key_from_json(const nlohmann::json& j) {
  auto label = parse_label(j.at("label").get<std::string>());
  if (!label) throw Error(ErrorCode::ParseFailure, "unknown label " + j.at("label").dump());
  return {*label, j.at("key").get<std::string>()};
}

inline std::string cypher_string(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

inline std::string cypher_value(const Value& v, const Clock& clock) {
  using K = Value::Kind;
  switch (v.kind()) {
    case K::Null: return "null";
    case K::Text: return cypher_string(v.as_text());
    case K::DateTime: return "datetime('" + clock.iso(v.as_datetime().seconds) + "')";
    case K::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.as_list().size(); ++i) {
        if (i) out += ", ";
        out += cypher_value(v.as_list()[i], clock);
      }
      return out + "]";
    }
    default: return to_display(v);
  }
}

inline std::string cypher_props(const Props& props, const Clock& clock) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : props) {
    if (!first) out += ", ";
    first = false;
    out += k + ": " + cypher_value(v, clock);
  }
  return out + "}";
}

}  // namespace detail

inline std::string export_graph(const PropertyGraph& graph, GraphFormat format) {
  const PropertyGraph g = graph.canonical();
  const Clock clock(g.epoch());
  std::string out;
  if (format == GraphFormat::Jsonl) {
    nlohmann::json header{{"format", kGraphFormat},
                          {"version", kGraphFormatVersion},
                          {"epoch", g.epoch()},
                          {"nodes", g.node_count()},
                          {"edges", g.edge_count()}};
    out += header.dump() + "\n";
    for (const auto& n : g.nodes()) {
      nlohmann::json j{{"kind", "node"},
                       {"label", label_name(n.label)},
                       {"key", n.key},
                       {"props", detail::props_to_json(n.props, clock)}};
      out += j.dump() + "\n";
    }
    for (const auto& e : g.edges()) {
      nlohmann::json j{{"kind", "edge"},
                       {"type", edge_type_name(e.type)},
                       {"src", detail::key_to_json(e.src)},
                       {"dst", detail::key_to_json(e.dst)},
                       {"props", detail::props_to_json(e.props, clock)}};
      out += j.dump() + "\n";
    }
    return out;
  }
  for (const auto& n : g.nodes())
    out += "CREATE (:" + std::string(label_name(n.label)) + " " +
           detail::cypher_props(n.props, clock) + ");\n";
  for (const auto& e : g.edges()) {
    auto match = [](const char* var, const NodeKey& k) {
      return "(" + std::string(var) + ":" + std::string(label_name(k.label)) + " {" +
             std::string(key_property(k.label)) + ": " + detail::cypher_string(k.key) + "})";
    };
    out += "MATCH " + match("a", e.src) + ", " + match("b", e.dst) + " CREATE (a)-[:" +
           std::string(edge_type_name(e.type)) + " " + detail::cypher_props(e.props, clock) +
           "]->(b);\n";
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error(ErrorCode::IoFailure, "write to " + path + " failed");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PropertyGraph import_graph(std::istream& in) {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  std::string line;
  std::string epoch(kDefaultEpoch);
  Clock clock;
  int lineno = 0;
  bool have_header = false;
  std::size_t expect_nodes = 0, expect_edges = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      if (!have_header) {
        if (j.value("format", std::string()) != kGraphFormat)
          throw Error(ErrorCode::ParseFailure, "missing graph header");
        if (j.value("version", 0) != kGraphFormatVersion)
          throw Error(ErrorCode::ParseFailure, "unsupported graph version");
        epoch = j.value("epoch", epoch);
        clock = Clock(epoch);
        expect_nodes = j.at("nodes").get<std::size_t>();
        expect_edges = j.at("edges").get<std::size_t>();
        have_header = true;
        continue;
      }
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "node") {
        NodeKey k = detail::key_from_json(j);
        nodes.push_back({k.label, k.key, detail::props_from_json(j.at("props"), clock)});
      } else if (kind == "edge") {
        auto type = parse_edge_type(j.at("type").get<std::string>());
        if (!type) throw Error(ErrorCode::ParseFailure, "unknown edge type " + j.at("type").dump());
        edges.push_back({*type, detail::key_from_json(j.at("src")), detail::key_from_json(j.at("dst")),
                         detail::props_from_json(j.at("props"), clock)});
      } else {
        throw Error(ErrorCode::ParseFailure, "unknown record kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseFailure, "line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseFailure, "line " + std::to_string(lineno) + ": " + e.detail());
    }
  }
  if (!have_header) throw Error(ErrorCode::ParseFailure, "line 1: missing graph header");
  if (nodes.size() != expect_nodes || edges.size() != expect_edges)
    throw Error(ErrorCode::ParseFailure,
                "line " + std::to_string(lineno + 1) + ": truncated stream, expected " +
                    std::to_string(expect_nodes) + " nodes and " + std::to_string(expect_edges) +
                    " edges");
  PropertyGraph graph(std::move(nodes), std::move(edges), epoch);
  if (auto vs = validate_graph(graph); !vs.empty())
    throw Error(ErrorCode::ValidationFailed, describe(vs));
  return graph;
}

inline PropertyGraph import_graph(const std::string& text) {
  std::istringstream in(text);
  return import_graph(in);
}

}  // namespace wkg::kg
