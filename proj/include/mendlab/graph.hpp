#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mendlab/core.hpp"

namespace mendlab {

// Orientation of an edge relative to its stored endpoint order (u, v).
enum class Orientation : std::uint8_t { None, Forward, Backward };

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  Orientation orient = Orientation::None;
};

struct Incidence {
  Vertex to;
  std::int32_t edge;
};

class Graph {
 public:
  Graph() = default;
  // degree_bound 0 means "use the maximum degree"; parent may be empty.
  Graph(std::size_t n, std::vector<Edge> edges, std::vector<Vertex> parent = {},
        std::size_t degree_bound = 0);

  std::size_t n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t degree_bound() const { return degree_bound_; }
  std::size_t max_degree() const;

  std::span<const Incidence> incident(Vertex v) const {
    return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
  }
  int degree(Vertex v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // +1 if e is oriented away from a, -1 if toward a, 0 if unoriented.
  int direction_from(int e, Vertex a) const;
  Vertex other(int e, Vertex a) const {
    const Edge& ed = edges_[e];
    return ed.u == a ? ed.v : ed.u;
  }
  // Index of w in v's incidence list, or -1.
  int port(Vertex v, Vertex w) const;
  int find_edge(Vertex u, Vertex w) const;

  bool has_parent_map() const { return !parent_.empty(); }
  Vertex parent(Vertex v) const { return parent_.empty() ? kNoVertex : parent_[v]; }
  const std::vector<Vertex>& parent_map() const { return parent_; }

  bool is_tree() const;

 private:
  std::size_t n_ = 0;
  std::size_t degree_bound_ = 0;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<Incidence> incidences_;
  std::vector<Edge> edges_;
  std::vector<Vertex> parent_;
};

class RootedTree {
 public:
  RootedTree() = default;
  // Uses the graph's parent map when present, otherwise orients every edge away from root.
  RootedTree(Graph g, Vertex root);

  const Graph& graph() const { return g_; }
  std::size_t n() const { return g_.n(); }
  Vertex root() const { return root_; }
  Vertex parent(Vertex v) const { return g_.parent(v); }
  std::span<const Vertex> children(Vertex v) const {
    return {child_list_.data() + child_off_[v], child_list_.data() + child_off_[v + 1]};
  }
  int child_count(Vertex v) const { return static_cast<int>(child_off_[v + 1] - child_off_[v]); }
  int depth(Vertex v) const { return depth_[v]; }
  int height() const { return height_; }
  // Vertices in BFS order from the root (parents before children).
  const std::vector<Vertex>& order() const { return order_; }

 private:
  Graph g_;
  Vertex root_ = 0;
  std::vector<std::uint32_t> child_off_;
  std::vector<Vertex> child_list_;
  std::vector<Vertex> order_;
  std::vector<std::int32_t> depth_;
  int height_ = 0;
};

RootedTree build_balanced_tree(int delta, int height);
std::size_t balanced_tree_size(int delta, int height);

// Sorted set of vertices within `radius` of v, ignoring orientation.
std::vector<Vertex> neighborhood(const Graph& g, Vertex v, int radius);
std::vector<Vertex> neighborhood(const Graph& g, std::span<const Vertex> sources, int radius);

struct BallEntry {
  Vertex v;
  int dist;
};
// BFS order (sources first, then by distance, ties by discovery through index-sorted ports).
std::vector<BallEntry> ball(const Graph& g, std::span<const Vertex> sources, int radius);

int distance(const Graph& g, Vertex a, Vertex b, int limit);

// Isomorphic copy with vertex old renamed to new_of_old[old]; ports follow the new indices.
Graph permute(const Graph& g, const std::vector<Vertex>& new_of_old);

}  // namespace mendlab
