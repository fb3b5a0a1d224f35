#include "doctest.h"
#include "mendlab/graph.hpp"
#include "mendlab/labeling.hpp"

#include <algorithm>
#include <random>

using namespace mendlab;

namespace {

// Plain BFS over an edge list; independent of Graph's adjacency arrays.
std::vector<Vertex> brute_ball(std::size_t n, const std::vector<Edge>& edges, Vertex v, int r) {
  std::vector<int> dist(n, -1);
  dist[v] = 0;
  for (int round = 0; round < r; ++round) {
    for (const Edge& e : edges) {
      if (dist[e.u] == round && dist[e.v] < 0) dist[e.v] = round + 1;
      if (dist[e.v] == round && dist[e.u] < 0) dist[e.u] = round + 1;
    }
  }
  std::vector<Vertex> out;
  for (std::size_t x = 0; x < n; ++x) {
    if (dist[x] >= 0) out.push_back(static_cast<Vertex>(x));
  }
  return out;
}

}  // namespace

TEST_CASE("balanced tree sizes") {
  auto t = build_balanced_tree(3, 4);
  CHECK(t.n() == 121);
  CHECK(t.graph().degree(t.root()) == 3);
  CHECK(t.height() == 4);
  CHECK(build_balanced_tree(2, 0).n() == 1);
  auto path = build_balanced_tree(1, 5);
  CHECK(path.n() == 6);
  CHECK(path.graph().max_degree() == 2);
  for (Vertex v = 1; v < 121; ++v) CHECK(t.parent(v) == (v - 1) / 3);
}

TEST_CASE("vertex cap guards generators") {
  std::size_t old = max_vertices();
  set_max_vertices(100);
  CHECK_THROWS_AS(build_balanced_tree(3, 4), InstanceTooLarge);
  set_max_vertices(old);
}

TEST_CASE("graph invariants are enforced") {
  CHECK_THROWS_AS(Graph(2, {{0, 0}}), ArgumentError);
  CHECK_THROWS_AS(Graph(2, {{0, 1}, {1, 0}}), ArgumentError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {0, 2}}, {}, 1), ArgumentError);
  Graph g(3, {{0, 1, Orientation::Forward}, {2, 1, Orientation::None}});
  CHECK(g.direction_from(0, 0) == 1);
  CHECK(g.direction_from(0, 1) == -1);
  CHECK(g.direction_from(1, 2) == 0);
}

TEST_CASE("neighborhood matches brute force BFS") {
  Graph path(3, {{0, 1}, {1, 2}});
  CHECK(neighborhood(path, 1, 1) == std::vector<Vertex>{0, 1, 2});
  CHECK(neighborhood(path, 0, 0) == std::vector<Vertex>{0});
  auto t = build_balanced_tree(3, 4);
  CHECK(neighborhood(t.graph(), t.root(), 4).size() == 121);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 30;
    std::vector<Edge> edges;
    for (Vertex a = 0; a < 30; ++a) {
      for (Vertex b = a + 1; b < 30; ++b) {
        if (rng() % 12 == 0) edges.push_back({a, b});
      }
    }
    Graph g(n, edges);
    Vertex v = static_cast<Vertex>(rng() % n);
    for (int r = 0; r < 5; ++r) {
      auto got = neighborhood(g, v, r);
      CHECK(got == brute_ball(n, edges, v, r));
      auto bigger = neighborhood(g, v, r + 1);
      CHECK(std::includes(bigger.begin(), bigger.end(), got.begin(), got.end()));
    }
  }
}

TEST_CASE("restriction and hamming distance") {
  Alphabet a({"red", "white"});
  PartialLabeling lam(a, 5, 0);
  lam[1] = 1;
  CHECK(restrict_labeling(lam, {}).holes().size() == 5);
  std::vector<Vertex> all{0, 1, 2, 3, 4};
  CHECK(restrict_labeling(lam, all) == lam);
  std::vector<Vertex> s{0, 1, 2}, s2{1, 2, 3};
  auto r = restrict_labeling(restrict_labeling(lam, s), s2);
  std::vector<Vertex> inter{1, 2};
  CHECK(r == restrict_labeling(lam, inter));
  PartialLabeling bottom(a, 5);
  CHECK(hamming_diff(lam, lam).empty());
  CHECK(hamming_diff(bottom, lam).size() == 5);
  CHECK(hamming_diff(lam, bottom) == hamming_diff(bottom, lam));
  PartialLabeling other(Alphabet({"x"}), 5);
  CHECK_THROWS_AS(hamming_diff(lam, other), ArgumentError);
  CHECK_THROWS_AS(hamming_diff(lam, PartialLabeling(a, 4)), ArgumentError);
}

TEST_CASE("hamming distance satisfies the triangle inequality") {
  std::mt19937 rng(3);
  Alphabet a({"x", "y", "z"});
  for (int trial = 0; trial < 50; ++trial) {
    PartialLabeling p(a, 12), q(a, 12), w(a, 12);
    for (Vertex v = 0; v < 12; ++v) {
      p[v] = static_cast<Label>(rng() % 4) - 1;
      q[v] = static_cast<Label>(rng() % 4) - 1;
      w[v] = static_cast<Label>(rng() % 4) - 1;
    }
    CHECK(hamming_diff(p, w).size() <= hamming_diff(p, q).size() + hamming_diff(q, w).size());
  }
}

TEST_CASE("rooted tree from an unrooted graph") {
  Graph g(4, {{0, 1}, {1, 2}, {1, 3}});
  RootedTree t(g, 1);
  CHECK(t.parent(1) == kNoVertex);
  CHECK(t.parent(0) == 1);
  CHECK(t.child_count(1) == 3);
  CHECK(t.height() == 1);
  CHECK_THROWS_AS(RootedTree(Graph(3, {{0, 1}}), 0), ArgumentError);
}
