#include "mendlab/encoding.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

namespace mendlab {

Graph encode_unoriented(const Graph& g, int delta) {
  if (delta < 1) throw ArgumentError("encoding needs delta >= 1");
  if (g.max_degree() > static_cast<std::size_t>(delta)) {
    throw PreconditionError("encoding: graph degree exceeds delta");
  }
  std::size_t n = g.n();
  std::size_t oriented = 0;
  for (const Edge& e : g.edges()) oriented += e.orient != Orientation::None;
  std::size_t total = n * (delta + 2) + 2 * g.edge_count() + oriented;
  check_size(total, "encoded graph");
  std::vector<Edge> edges;
  edges.reserve(total);
  Vertex next = static_cast<Vertex>(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (int k = 0; k <= delta; ++k) edges.push_back({static_cast<Vertex>(x), next++});
  }
  for (const Edge& e : g.edges()) {
    Vertex a = next++, b = next++;
    edges.push_back({e.u, a});
    edges.push_back({a, b});
    edges.push_back({b, e.v});
    if (e.orient == Orientation::Forward) edges.push_back({b, next++});
    if (e.orient == Orientation::Backward) edges.push_back({a, next++});
  }
  std::vector<Vertex> parent;
  if (g.has_parent_map()) {
    parent.assign(total, kNoVertex);
    for (std::size_t x = 0; x < n; ++x) parent[x] = g.parent(static_cast<Vertex>(x));
  }
  return Graph(total, std::move(edges), std::move(parent));
}

namespace {

struct Adjacency {
  std::vector<std::vector<int>> nbrs;
  std::vector<int> degree;
  std::vector<char> complete;
  int delta = 0;

  bool leaf(int i) const { return degree[i] == 1; }
  bool center(int i) const {
    if (!complete[i]) return false;
    int leaves = 0;
    for (int y : nbrs[i]) leaves += leaf(y);
    return leaves >= delta + 1;
  }
  // Decoded edges at center u: (other center, +1 if u -> w, -1 if w -> u, 0 if unoriented).
  std::vector<std::pair<int, int>> edges_of(int u) const {
    std::vector<std::pair<int, int>> out;
    for (int a : nbrs[u]) {
      if (leaf(a) || !complete[a] || center(a)) continue;
      int b = -1, la = 0, extra = 0;
      for (int y : nbrs[a]) {
        if (leaf(y)) {
          ++la;
        } else if (y != u) {
          b = y;
          ++extra;
        }
      }
      if (extra != 1 || !complete[b] || center(b)) continue;
      int w = -1, lb = 0;
      extra = 0;
      for (int y : nbrs[b]) {
        if (leaf(y)) {
          ++lb;
        } else if (y != a) {
          w = y;
          ++extra;
        }
      }
      if (extra != 1 || w == u || la + lb > 1 || !center(w)) continue;
      out.emplace_back(w, la == 1 ? -1 : lb == 1 ? 1 : 0);
    }
    return out;
  }
};

}  // namespace

DecodedGraph decode_oriented(const Graph& g, int delta) {
  Adjacency adj;
  adj.delta = delta;
  std::size_t n = g.n();
  adj.nbrs.resize(n);
  adj.degree.resize(n);
  adj.complete.assign(n, 1);
  for (std::size_t x = 0; x < n; ++x) {
    adj.degree[x] = g.degree(static_cast<Vertex>(x));
    for (const Incidence& inc : g.incident(static_cast<Vertex>(x))) adj.nbrs[x].push_back(inc.to);
  }
  DecodedGraph out;
  std::vector<Vertex> index(n, kNoVertex);
  for (std::size_t x = 0; x < n; ++x) {
    if (adj.center(static_cast<int>(x))) {
      index[x] = static_cast<Vertex>(out.original.size());
      out.original.push_back(static_cast<Vertex>(x));
    }
  }
  std::vector<Edge> edges;
  for (Vertex u : out.original) {
    for (auto [w, dir] : adj.edges_of(u)) {
      if (u > w) continue;
      Orientation o = dir == 1 ? Orientation::Forward : dir == -1 ? Orientation::Backward : Orientation::None;
      edges.push_back({index[u], index[w], o});
    }
  }
  std::vector<Vertex> parent;
  if (g.has_parent_map()) {
    parent.assign(out.original.size(), kNoVertex);
    for (std::size_t i = 0; i < out.original.size(); ++i) {
      Vertex p = g.parent(out.original[i]);
      if (p != kNoVertex) parent[i] = index[p];
    }
  }
  out.graph = Graph(out.original.size(), std::move(edges), std::move(parent));
  return out;
}

PartialLabeling encode_labeling(const PartialLabeling& lambda, const Graph& encoded, Label filler) {
  if (encoded.n() < lambda.size()) throw ArgumentError("encoded graph smaller than the labeling");
  PartialLabeling out(lambda.alphabet, encoded.n(), filler);
  for (std::size_t x = 0; x < lambda.size(); ++x) out[static_cast<Vertex>(x)] = lambda[static_cast<Vertex>(x)];
  return out;
}

bool same_oriented_graph(const Graph& a, const Graph& b, std::span<const Vertex> a_to_b) {
  if (a.n() != b.n() || a.edge_count() != b.edge_count() || a_to_b.size() != a.n()) return false;
  using Key = std::tuple<Vertex, Vertex, int>;
  auto norm = [](Vertex u, Vertex v, Orientation o) {
    int d = o == Orientation::None ? 0 : o == Orientation::Forward ? 1 : -1;
    if (u > v) {
      std::swap(u, v);
      d = -d;
    }
    return Key{u, v, d};
  };
  std::vector<Key> ka, kb;
  for (const Edge& e : a.edges()) ka.push_back(norm(a_to_b[e.u], a_to_b[e.v], e.orient));
  for (const Edge& e : b.edges()) kb.push_back(norm(e.u, e.v, e.orient));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  if (ka != kb) return false;
  if (a.has_parent_map() != b.has_parent_map()) return false;
  for (std::size_t x = 0; x < a.n() && a.has_parent_map(); ++x) {
    Vertex p = a.parent(static_cast<Vertex>(x));
    Vertex q = b.parent(a_to_b[x]);
    if ((p == kNoVertex) != (q == kNoVertex)) return false;
    if (p != kNoVertex && a_to_b[p] != q) return false;
  }
  return true;
}

bool decoded_verdict(const LocalView& view, int delta, const std::function<bool(const LocalView&)>& oriented) {
  Adjacency adj;
  adj.delta = delta;
  int m = view.size();
  adj.nbrs.resize(m);
  adj.degree.resize(m);
  adj.complete.resize(m);
  for (int i = 0; i < m; ++i) {
    adj.degree[i] = view.degree(i);
    adj.complete[i] = view.dist(i) < view.radius();
    for (const ViewArc& a : view.arcs(i)) adj.nbrs[i].push_back(a.to);
  }
  if (!adj.center(0)) return true;
  // Decoded vertices within two decoded hops; edges are needed from hops 0 and 1 only.
  std::unordered_map<int, int> index{{0, 0}};
  std::vector<int> members{0};
  std::vector<Edge> edges;
  std::size_t layer_end = 1;
  std::vector<std::tuple<int, int, int>> found;
  for (int hop = 0; hop < 2; ++hop) {
    std::size_t begin = hop == 0 ? 0 : layer_end;
    std::size_t end = members.size();
    layer_end = end;
    for (std::size_t k = begin; k < end; ++k) {
      int u = members[k];
      for (auto [w, dir] : adj.edges_of(u)) {
        if (!index.count(w)) {
          index.emplace(w, static_cast<int>(members.size()));
          members.push_back(w);
        }
        found.emplace_back(u, w, dir);
      }
    }
  }
  std::vector<std::tuple<int, int, int>> unique;
  for (auto [u, w, dir] : found) {
    int a = index[u], b = index[w];
    if (a > b) {
      std::swap(a, b);
      dir = -dir;
    }
    unique.emplace_back(a, b, dir);
  }
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  for (auto [a, b, dir] : unique) {
    Orientation o = dir == 1 ? Orientation::Forward : dir == -1 ? Orientation::Backward : Orientation::None;
    edges.push_back({a, b, o});
  }
  int nd = static_cast<int>(members.size());
  Vertex outside = nd;
  std::vector<Vertex> parent(nd + 1, kNoVertex);
  if (view.rooted()) {
    for (int k = 0; k < nd; ++k) {
      int p = view.parent(members[k]);
      if (p == LocalView::kNoParent) continue;
      auto it = p >= 0 ? index.find(p) : index.end();
      parent[k] = it == index.end() ? outside : it->second;
    }
  }
  Graph dec(nd + 1, std::move(edges), view.rooted() ? std::move(parent) : std::vector<Vertex>{});
  PartialLabeling labels(Alphabet({"red", "black"}), nd + 1, 0);
  for (int k = 0; k < nd; ++k) labels[k] = view.label(members[k]);
  return oriented(LocalView(dec, labels, 0, 2));
}

}  // namespace mendlab
