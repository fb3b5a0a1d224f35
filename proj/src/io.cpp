#include "mendlab/io.hpp"

#include <fstream>

namespace mendlab {

json graph_to_json(const Graph& g, Vertex root) {
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    const char* o = e.orient == Orientation::None ? "none" : (e.orient == Orientation::Forward ? "uv" : "vu");
    edges.push_back(json::array({e.u, e.v, o}));
  }
  json j;
  j["n"] = g.n();
  j["edges"] = std::move(edges);
  j["root"] = root == kNoVertex ? json(nullptr) : json(root);
  if (g.has_parent_map()) {
    json parent = json::array();
    for (Vertex p : g.parent_map()) parent.push_back(p == kNoVertex ? json(nullptr) : json(p));
    j["parent"] = std::move(parent);
  } else {
    j["parent"] = nullptr;
  }
  return j;
}

Graph graph_from_json(const json& j) {
  try {
    std::size_t n = j.at("n").get<std::size_t>();
    check_size(n, "graph file");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      Edge ed;
      ed.u = e.at(0).get<Vertex>();
      ed.v = e.at(1).get<Vertex>();
      std::string o = e.size() > 2 ? e.at(2).get<std::string>() : "none";
      if (o == "none") {
        ed.orient = Orientation::None;
      } else if (o == "uv") {
        ed.orient = Orientation::Forward;
      } else if (o == "vu") {
        ed.orient = Orientation::Backward;
      } else {
        throw ArgumentError("unknown orientation '" + o + "'");
      }
      edges.push_back(ed);
    }
    std::vector<Vertex> parent;
    if (j.contains("parent") && !j["parent"].is_null()) {
      for (const auto& p : j["parent"]) parent.push_back(p.is_null() ? kNoVertex : p.get<Vertex>());
    }
    return Graph(n, std::move(edges), std::move(parent));
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed graph JSON: ") + e.what());
  }
}

Vertex root_from_json(const json& j) {
  if (!j.contains("root") || j["root"].is_null()) return kNoVertex;
  return j["root"].get<Vertex>();
}

json labeling_to_json(const PartialLabeling& lambda) {
  json a = json::array();
  for (Label l : lambda.assignment) a.push_back(l == kBottom ? json(nullptr) : json(lambda.alphabet.name(l)));
  return {{"alphabet", lambda.alphabet.labels()}, {"assignment", std::move(a)}};
}

PartialLabeling labeling_from_json(const json& j) {
  try {
    Alphabet alpha(j.at("alphabet").get<std::vector<std::string>>());
    const json& a = j.at("assignment");
    PartialLabeling out(alpha, a.size());
    for (std::size_t v = 0; v < a.size(); ++v) {
      out.assignment[v] = a[v].is_null() ? kBottom : alpha.index_of(a[v].get<std::string>());
    }
    return out;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed labeling JSON: ") + e.what());
  }
}

json spec_to_json(const PropagationSpec& spec) {
  return {{"labels", spec.labels}, {"l0", spec.l0}, {"wildcard", spec.wildcard},
          {"mu", spec.mu},         {"delta", spec.delta}};
}

PropagationSpec spec_from_json(const json& j) {
  PropagationSpec s;
  try {
    s.labels = j.at("labels").get<std::vector<std::string>>();
    s.l0 = j.at("l0").get<std::string>();
    s.wildcard = j.at("wildcard").get<std::string>();
    s.mu = j.at("mu").get<std::vector<std::vector<int>>>();
    s.delta = j.at("delta").get<int>();
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed spec JSON: ") + e.what());
  }
  s.validate();
  return s;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ArgumentError("cannot parse '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

}  // namespace mendlab
