#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mendlab/graph.hpp"
#include "mendlab/labeling.hpp"
#include "mendlab/lcl.hpp"
#include "mendlab/menders.hpp"

namespace mendlab {

// t_{h,j0}: balanced binary tree of height h with tree edges parent -> child, unoriented edges
// between horizontal neighbors and bottom-layer edges pointing to the sink (h, j0).
struct LayeredTree {
  int h = 0;
  int j0 = 0;
  Graph graph;
  std::vector<std::pair<int, int>> coord;  // (layer, index) per vertex

  static Vertex id(int i, int j) { return static_cast<Vertex>((std::int64_t{1} << i) - 1 + j); }
  Vertex root() const { return 0; }
  Vertex sink() const { return id(h, j0); }
  std::size_t n() const { return graph.n(); }
};

LayeredTree layered_tree(int h, int j0);

// Siblings are the neighbors that are neither the parent nor a child.
struct StructuralReport {
  std::vector<Vertex> broken;
  std::vector<std::pair<Vertex, std::string>> violations;  // tags 1a .. 3b
  bool well_formed() const { return broken.empty(); }
};

StructuralReport broken_vertices(const Graph& g);
// Violated constraints at the center of a view of radius at least 2.
std::vector<std::string> structural_violations(const LocalView& view);

inline constexpr Label kRed = 0;
inline constexpr Label kBlack = 1;
Alphabet red_black();

enum class PathToSinkMode { Promise, OrientedGeneral, UnorientedGeneral };
PathToSinkMode path_to_sink_mode(const std::string& name);

// Promise: radius 1. Oriented general: radius 2, broken vertices accept anything.
// Unoriented general: radius 8 on encoded graphs with maximum degree `delta` before encoding.
LclProblem path_to_sink_problem(PathToSinkMode mode, int delta = 5);

// No children and no sibling edge pointing away.
bool is_sink(const Graph& g, Vertex x);

struct Algorithm1Run {
  MendRun run;
  int climb_steps = 0;
  bool phase2 = false;
  Vertex target = kNoVertex;  // sink or broken vertex reached by phase 2
};

// Throws Infeasible when the climb reaches a root without a sink (or broken vertex) below.
Algorithm1Run algorithm1_mend(const Graph& g, const PartialLabeling& lambda, Vertex v, bool generalized);

// Partial solution with `hole` and `extra_holes` further random holes, every labeled vertex
// satisfying the labeling rules with holes read as either color.
PartialLabeling random_partial_solution(const Graph& g, Vertex hole, int extra_holes, bool generalized,
                                        Rng& rng);
// Root unlabeled, everything else black.
PartialLabeling all_black(const Graph& g, Vertex hole);

enum class SinkStrategy { Midpoint, RandomPivot, Leftmost };
SinkStrategy sink_strategy(const std::string& name);
std::string to_string(SinkStrategy s);

struct SinkQuery {
  int position = 0;
  std::size_t cost = 0;  // newly explored vertices
  bool is_short = false;
};

struct SinkSearchResult {
  std::size_t explored = 0;
  std::vector<SinkQuery> queries;
  std::size_t final_walk = 0;  // vertices explored to reach a sink deduced without querying it
  int found = -1;
};

SinkSearchResult sink_search(const LayeredTree& t, SinkStrategy strategy, std::uint64_t seed);

}  // namespace mendlab
