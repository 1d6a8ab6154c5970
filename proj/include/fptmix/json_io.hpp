#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "instances.hpp"
#include "kiob.hpp"
#include "p2pack.hpp"
#include "repsets.hpp"

namespace fptmix::io {

using Json = nlohmann::json;

inline Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + name + "\"");
  return *it;
}

inline std::int64_t integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError(what + " must be an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw OverflowError(what + " does not fit a 64-bit weight");
  return j.get<std::int64_t>();
}

inline int node(const Json& j, int n, const std::string& what) {
  auto v = integer(j, what);
  if (v < 0 || v >= n) throw InvalidInput(what + " index out of range");
  return static_cast<int>(v);
}

inline std::string label(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw ParseError("labels must be strings or integers");
}

inline int node_count(const Json& j) {
  auto n = integer(field(j, "nodes"), "nodes");
  if (n < 0) throw InvalidInput("nodes must be non-negative");
  if (n > ElementSet::capacity) throw InvalidInput("at most " + std::to_string(ElementSet::capacity) + " nodes");
  return static_cast<int>(n);
}

}  // namespace detail

inline Digraph digraph_from_json(const Json& j) {
  const int n = detail::node_count(j);
  Digraph g(n);
  const Json& arcs = detail::field(j, "arcs");
  if (!arcs.is_array()) throw ParseError("arcs must be an array");
  for (const auto& a : arcs) {
    if (!a.is_array() || a.size() != 3) throw ParseError("every arc must be [tail, head, weight]");
    g.add_arc(detail::node(a[0], n, "arc tail"), detail::node(a[1], n, "arc head"), detail::integer(a[2], "arc weight"));
  }
  return g;
}

inline Json to_json(const Digraph& g) {
  Json arcs = Json::array();
  for (const auto& a : g.arcs()) arcs.push_back({a.tail, a.head, a.weight});
  return Json{{"nodes", g.size()}, {"arcs", arcs}};
}

inline Graph graph_from_json(const Json& j) {
  const int n = detail::node_count(j);
  Graph g(n);
  const Json& edges = detail::field(j, "edges");
  if (!edges.is_array()) throw ParseError("edges must be an array");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2) throw ParseError("every edge must be [u, v]");
    int u = detail::node(e[0], n, "edge endpoint"), v = detail::node(e[1], n, "edge endpoint");
    if (g.has_edge(u, v)) throw InvalidInput("duplicate edge {" + std::to_string(u) + ", " + std::to_string(v) + "}");
    g.add_edge(u, v);
  }
  return g;
}

inline Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return Json{{"nodes", g.size()}, {"edges", edges}};
}

inline OrderedUniverse universe_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("universe must be an array");
  std::vector<std::string> labels;
  for (const auto& l : j) labels.push_back(detail::label(l));
  return OrderedUniverse(std::move(labels));
}

inline ElementSet members_from_json(const Json& j, const OrderedUniverse& u) {
  if (!j.is_array()) throw ParseError("members must be an array");
  ElementSet s;
  for (const auto& l : j) {
    int r = u.rank(detail::label(l));
    if (s.contains(r)) throw InvalidInput("repeated member " + u.label(r));
    s.insert(r);
  }
  return s;
}

// Sets may have any common size; duplicates collapse under the objective.
inline WeightedSetFamily setfamily_from_json(const Json& j, Objective obj = Objective::max) {
  WeightedSetFamily fam(universe_from_json(detail::field(j, "universe")));
  const Json& sets = detail::field(j, "sets");
  if (!sets.is_array()) throw ParseError("sets must be an array");
  int size = -1;
  for (const auto& s : sets) {
    ElementSet m = members_from_json(detail::field(s, "members"), fam.universe());
    if (size >= 0 && m.size() != size) throw InvalidInput("sets differ in size");
    size = m.size();
    fam.add(m, detail::integer(detail::field(s, "weight"), "set weight"));
  }
  return fam.deduplicated(obj);
}

inline Json members_to_json(const ElementSet& s, const OrderedUniverse& u) {
  Json out = Json::array();
  s.for_each([&](int e) { out.push_back(u.label(e)); });
  return out;
}

inline Json to_json(const WeightedSetFamily& fam) {
  Json sets = Json::array();
  for (const auto& s : fam.sets()) sets.push_back(Json{{"members", members_to_json(s.members, fam.universe())}, {"weight", s.weight}});
  return Json{{"universe", fam.universe().labels()}, {"sets", sets}};
}

inline std::optional<std::int64_t> optional_int(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) return std::nullopt;
  return detail::integer(j.at(name), name);
}

inline Json read_int_list(const Json& j, const char* name) {
  const Json& v = detail::field(j, name);
  if (!v.is_array()) throw ParseError(std::string(name) + " must be an array");
  return v;
}

// Cut-path instance: a digraph document plus k, W, 1/eps, delta, gamma, L, R, l1, l2, r1, r2, vl, vr.
inline KcwpInstance kcwp_from_json(const Json& j) {
  KcwpInstance in;
  in.graph = digraph_from_json(j);
  const int n = in.graph.size();
  in.k = static_cast<int>(detail::integer(detail::field(j, "k"), "k"));
  in.W = detail::integer(detail::field(j, "W"), "W");
  if (auto e = optional_int(j, "inv_eps")) in.inv_eps = static_cast<int>(*e);
  auto rational = [&](const char* name, Rational& out) {
    if (!j.contains(name)) return;
    const Json& v = j.at(name);
    if (v.is_string()) {
      out = Rational::parse(v.get<std::string>());
    } else if (v.is_number_integer()) {
      out = Rational{v.get<std::int64_t>(), 1};
    } else {
      throw ParseError(std::string(name) + " must be a fraction string such as \"1/12\"");
    }
  };
  rational("delta", in.delta);
  rational("gamma", in.gamma);
  auto nodes = [&](const char* name) {
    std::vector<int> out;
    for (const auto& v : read_int_list(j, name)) out.push_back(detail::node(v, n, name));
    return out;
  };
  for (int v : nodes("L")) in.L.insert(v);
  for (int v : nodes("R")) in.R.insert(v);
  in.l1 = nodes("l1");
  in.l2 = nodes("l2");
  in.r1 = nodes("r1");
  in.r2 = nodes("r2");
  in.vl = detail::node(detail::field(j, "vl"), n, "vl");
  in.vr = detail::node(detail::field(j, "vr"), n, "vr");
  return in;
}

inline Json to_json(const KcwpInstance& in) {
  Json j = to_json(in.graph);
  j["k"] = in.k;
  j["W"] = in.W;
  j["inv_eps"] = in.inv_eps;
  j["delta"] = std::to_string(in.delta.num) + "/" + std::to_string(in.delta.den);
  j["gamma"] = std::to_string(in.gamma.num) + "/" + std::to_string(in.gamma.den);
  j["L"] = in.L.members();
  j["R"] = in.R.members();
  j["l1"] = in.l1;
  j["l2"] = in.l2;
  j["r1"] = in.r1;
  j["r2"] = in.r2;
  j["vl"] = in.vl;
  j["vr"] = in.vr;
  return j;
}

// {"parts": [{"elements": [labels], "k": int, "p": int, "c": number}]} over the family's universe.
inline std::vector<RepPart> partition_from_json(const Json& j, const OrderedUniverse& u) {
  const Json& parts = detail::field(j, "parts");
  if (!parts.is_array()) throw ParseError("parts must be an array");
  std::vector<RepPart> out;
  for (const auto& p : parts) {
    RepPart part;
    part.elements = members_from_json(detail::field(p, "elements"), u);
    part.k = static_cast<int>(detail::integer(detail::field(p, "k"), "k"));
    part.p = static_cast<int>(detail::integer(detail::field(p, "p"), "p"));
    if (p.contains("c")) {
      if (!p.at("c").is_number()) throw ParseError("c must be a number");
      part.c = p.at("c").get<double>();
    }
    out.push_back(part);
  }
  return out;
}

inline Json to_json(const Branching& b) {
  Json arcs = Json::array();
  for (int v = 0; v < static_cast<int>(b.parent.size()); ++v)
    if (b.parent[v] >= 0) arcs.push_back({b.parent[v], v});
  return Json{{"root", b.root}, {"arcs", arcs}, {"internal", internal_count(b)}};
}

inline Json to_json(const std::vector<P2Path>& packing) {
  Json out = Json::array();
  for (const auto& p : packing) out.push_back({p[0], p[1], p[2]});
  return out;
}

}  // namespace fptmix::io
