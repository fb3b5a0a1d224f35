#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mendlab/graph.hpp"
#include "mendlab/labeling.hpp"
#include "mendlab/lcl.hpp"

namespace mendlab {

// Vertex x becomes center x with delta + 1 pendant leaves; an edge becomes a path with two
// interior vertices, and an oriented edge gets one leaf on the interior vertex next to its head.
// Centers keep the parent map; ids: centers, then leaves, then path vertices.
Graph encode_unoriented(const Graph& g, int delta);

struct DecodedGraph {
  Graph graph;
  std::vector<Vertex> original;  // encoded id of each decoded vertex
};

// Centers are vertices with at least delta + 1 leaf neighbors, kept in id order.
DecodedGraph decode_oriented(const Graph& g, int delta);

// Centers take the labels of lambda, every other vertex gets `filler`.
PartialLabeling encode_labeling(const PartialLabeling& lambda, const Graph& encoded, Label filler);

// Same edges with the same orientations and the same parent map under the vertex map a -> b.
bool same_oriented_graph(const Graph& a, const Graph& b, std::span<const Vertex> a_to_b);

// Decodes the part of an encoded view around its center and evaluates `oriented` (a radius-2
// verifier on oriented graphs) at the decoded center. Vertices that are not centers are happy.
bool decoded_verdict(const LocalView& view, int delta, const std::function<bool(const LocalView&)>& oriented);

}  // namespace mendlab
