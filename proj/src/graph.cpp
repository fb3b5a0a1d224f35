#include "mendlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace mendlab {

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::vector<Vertex> parent,
             std::size_t degree_bound)
    : n_(n), edges_(std::move(edges)), parent_(std::move(parent)) {
  if (n > static_cast<std::size_t>(std::numeric_limits<Vertex>::max())) {
    throw InstanceTooLarge("graph too large for 32-bit vertex ids");
  }
  if (!parent_.empty() && parent_.size() != n) {
    throw ArgumentError("parent map size does not match vertex count");
  }
  std::vector<std::uint32_t> deg(n + 1, 0);
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
        static_cast<std::size_t>(e.v) >= n) {
      throw ArgumentError("edge endpoint out of range");
    }
    if (e.u == e.v) throw ArgumentError("self-loop at vertex " + std::to_string(e.u));
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  incidences_.resize(offsets_[n]);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    incidences_[fill[e.u]++] = {e.v, static_cast<std::int32_t>(i)};
    incidences_[fill[e.v]++] = {e.u, static_cast<std::int32_t>(i)};
  }
  std::size_t maxdeg = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto first = incidences_.begin() + offsets_[v];
    auto last = incidences_.begin() + offsets_[v + 1];
    std::sort(first, last, [](const Incidence& a, const Incidence& b) { return a.to < b.to; });
    for (auto it = first; it + 1 < last; ++it) {
      if (it->to == (it + 1)->to) {
        throw ArgumentError("parallel edges between " + std::to_string(v) + " and " +
                            std::to_string(it->to));
      }
    }
    maxdeg = std::max<std::size_t>(maxdeg, last - first);
  }
  for (Vertex p : parent_) {
    if (p != kNoVertex && (p < 0 || static_cast<std::size_t>(p) >= n)) {
      throw ArgumentError("parent out of range");
    }
  }
  degree_bound_ = degree_bound == 0 ? maxdeg : degree_bound;
  if (maxdeg > degree_bound_) throw ArgumentError("vertex degree exceeds degree bound");
}

std::size_t Graph::max_degree() const {
  std::size_t m = 0;
  for (std::size_t v = 0; v < n_; ++v) m = std::max<std::size_t>(m, offsets_[v + 1] - offsets_[v]);
  return m;
}

int Graph::direction_from(int e, Vertex a) const {
  const Edge& ed = edges_[e];
  if (ed.orient == Orientation::None) return 0;
  bool a_is_tail = (ed.orient == Orientation::Forward) == (ed.u == a);
  return a_is_tail ? 1 : -1;
}

int Graph::port(Vertex v, Vertex w) const {
  auto inc = incident(v);
  auto it = std::lower_bound(inc.begin(), inc.end(), w,
                             [](const Incidence& x, Vertex t) { return x.to < t; });
  if (it == inc.end() || it->to != w) return -1;
  return static_cast<int>(it - inc.begin());
}

int Graph::find_edge(Vertex u, Vertex w) const {
  int p = port(u, w);
  return p < 0 ? -1 : incident(u)[p].edge;
}

bool Graph::is_tree() const {
  if (n_ == 0 || edges_.size() != n_ - 1) return false;
  std::vector<char> seen(n_, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (const Incidence& inc : incident(x)) {
      if (!seen[inc.to]) {
        seen[inc.to] = 1;
        ++count;
        stack.push_back(inc.to);
      }
    }
  }
  return count == n_;
}

RootedTree::RootedTree(Graph g, Vertex root) : root_(root) {
  std::size_t n = g.n();
  if (root < 0 || static_cast<std::size_t>(root) >= n) throw ArgumentError("root out of range");
  if (!g.is_tree()) throw ArgumentError("rooted tree requires a connected graph with n-1 edges");
  std::vector<Vertex> parent(n, kNoVertex);
  order_.reserve(n);
  depth_.assign(n, 0);
  order_.push_back(root);
  std::vector<char> seen(n, 0);
  seen[root] = 1;
  for (std::size_t i = 0; i < order_.size(); ++i) {
    Vertex x = order_[i];
    for (const Incidence& inc : g.incident(x)) {
      if (seen[inc.to]) continue;
      seen[inc.to] = 1;
      parent[inc.to] = x;
      depth_[inc.to] = depth_[x] + 1;
      order_.push_back(inc.to);
    }
  }
  if (g.has_parent_map() && g.parent_map() != parent) {
    throw ArgumentError("parent map inconsistent with the tree rooted at " + std::to_string(root));
  }
  if (!g.has_parent_map()) {
    std::vector<Edge> edges = g.edges();
    std::size_t bound = g.degree_bound();
    g = Graph(n, std::move(edges), parent, bound);
  }
  g_ = std::move(g);
  child_off_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (parent[v] != kNoVertex) ++child_off_[parent[v] + 1];
  }
  for (std::size_t v = 0; v < n; ++v) child_off_[v + 1] += child_off_[v];
  child_list_.resize(n == 0 ? 0 : n - 1);
  std::vector<std::uint32_t> fill(child_off_.begin(), child_off_.end() - 1);
  for (std::size_t v = 0; v < n; ++v) {
    if (parent[v] != kNoVertex) child_list_[fill[parent[v]]++] = static_cast<Vertex>(v);
  }
  height_ = 0;
  for (int d : depth_) height_ = std::max(height_, d);
}

std::size_t balanced_tree_size(int delta, int height) {
  if (delta < 1) throw ArgumentError("delta must be >= 1");
  if (height < 0) throw ArgumentError("height must be >= 0");
  std::size_t total = 0;
  std::size_t layer = 1;
  std::size_t cap = max_vertices();
  for (int d = 0; d <= height; ++d) {
    total += layer;
    if (total > cap) return total;
    layer *= static_cast<std::size_t>(delta);
  }
  return total;
}

RootedTree build_balanced_tree(int delta, int height) {
  std::size_t n = balanced_tree_size(delta, height);
  check_size(n, "balanced tree");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  std::vector<Vertex> parent(n, kNoVertex);
  // BFS numbering: children of v are delta*v+1 .. delta*v+delta
  for (std::size_t c = 1; c < n; ++c) {
    Vertex p = static_cast<Vertex>((c - 1) / delta);
    edges.push_back({p, static_cast<Vertex>(c), Orientation::None});
    parent[c] = p;
  }
  std::size_t bound = height == 0 ? 0 : static_cast<std::size_t>(delta) + 1;
  return RootedTree(Graph(n, std::move(edges), std::move(parent), bound), 0);
}

std::vector<BallEntry> ball(const Graph& g, std::span<const Vertex> sources, int radius) {
  std::vector<BallEntry> out;
  std::unordered_map<Vertex, int> dist;
  for (Vertex s : sources) {
    if (s < 0 || static_cast<std::size_t>(s) >= g.n()) throw ArgumentError("vertex out of range");
    if (dist.emplace(s, 0).second) out.push_back({s, 0});
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto [x, d] = out[i];
    if (d >= radius) continue;
    for (const Incidence& inc : g.incident(x)) {
      if (dist.emplace(inc.to, d + 1).second) out.push_back({inc.to, d + 1});
    }
  }
  return out;
}

std::vector<Vertex> neighborhood(const Graph& g, std::span<const Vertex> sources, int radius) {
  std::vector<Vertex> out;
  for (const BallEntry& b : ball(g, sources, radius)) out.push_back(b.v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vertex> neighborhood(const Graph& g, Vertex v, int radius) {
  Vertex s[1] = {v};
  return neighborhood(g, std::span<const Vertex>(s, 1), radius);
}

int distance(const Graph& g, Vertex a, Vertex b, int limit) {
  Vertex s[1] = {a};
  for (const BallEntry& e : ball(g, std::span<const Vertex>(s, 1), limit)) {
    if (e.v == b) return e.dist;
  }
  return -1;
}

Graph permute(const Graph& g, const std::vector<Vertex>& new_of_old) {
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edges.push_back({new_of_old[e.u], new_of_old[e.v], e.orient});
  std::vector<Vertex> parent;
  if (g.has_parent_map()) {
    parent.assign(g.n(), kNoVertex);
    for (std::size_t v = 0; v < g.n(); ++v) {
      Vertex p = g.parent(static_cast<Vertex>(v));
      parent[new_of_old[v]] = p == kNoVertex ? kNoVertex : new_of_old[p];
    }
  }
  return Graph(g.n(), std::move(edges), std::move(parent), g.degree_bound());
}

}  // namespace mendlab
