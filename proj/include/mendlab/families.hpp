#pragma once

#include <cstdint>
#include <string>

#include "mendlab/core.hpp"
#include "mendlab/graph.hpp"
#include "mendlab/labeling.hpp"
#include "mendlab/lcl.hpp"
#include "mendlab/propagation.hpp"

namespace mendlab {

// At least i red children among 3; white is the wildcard.
PropagationSpec r_i_problem(int i);
// mu = 2^p, delta = 2^q; volume grows like n^(p/q).
PropagationSpec polynomial_spec(int p, int q);
// k labels, ones on and just above the diagonal, delta = 2.
PropagationSpec polylog_spec(int k);

// One label, every vertex always happy.
LclProblem always_happy_problem();

// Edge orientations as per-port vertex labels: a label is a string over {i, o} with one
// character per incident edge, in incidence order. Ports of adjacent vertices must disagree.
Alphabet port_alphabet(int max_degree);
LclProblem degree_two_sink_problem(int max_degree = 3);
LclProblem sinkless_orientation_problem(int max_degree = 3);
// Orients every edge of a tree toward `target`, which is left unlabeled.
PartialLabeling orient_toward(const Graph& g, Vertex target, const Alphabet& a);
// Out-degree encoded by the label of x.
int out_degree(const Alphabet& a, Label l);

struct OrientationInstance {
  Graph graph;
  LclProblem problem;
  PartialLabeling lambda;
  Vertex hole = 0;
  Vertex hidden = kNoVertex;  // the vertex a mend must reach
};

// Root with three children, binary below, leaves at depth `height`; one uniformly chosen
// bottom edge is subdivided. All edges point to the unlabeled root.
OrientationInstance degree_two_sink_instance(int height, std::uint64_t seed);
// Balanced binary tree with all edges toward `hole`.
OrientationInstance sinkless_instance(int height, Vertex hole = 0);

// Rooted tree of height at most `height`; the root has delta children, every other vertex
// above the last layer has delta children with probability p_full and fewer otherwise.
RootedTree random_unbalanced_tree(int delta, int height, double p_full, Rng& rng);
// Root with children [A, A, leaf] in port order, A the same shape one level lower.
// n = 3 * 2^height - 2.
RootedTree adversarial_tree(int height);
// Root unlabeled, everything else the wildcard.
PartialLabeling wildcard_labeling(const PropagationSpec& spec, const RootedTree& t);

}  // namespace mendlab
