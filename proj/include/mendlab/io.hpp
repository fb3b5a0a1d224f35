#pragma once

#include <string>

#include "json.hpp"
#include "mendlab/graph.hpp"
#include "mendlab/labeling.hpp"
#include "mendlab/propagation.hpp"

namespace mendlab {

using json = nlohmann::json;

json graph_to_json(const Graph& g, Vertex root = kNoVertex);
Graph graph_from_json(const json& j);
// Root recorded in a graph file, or kNoVertex.
Vertex root_from_json(const json& j);

json labeling_to_json(const PartialLabeling& lambda);
PartialLabeling labeling_from_json(const json& j);

json spec_to_json(const PropagationSpec& spec);
PropagationSpec spec_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace mendlab
