#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mendlab/graph.hpp"
#include "mendlab/labeling.hpp"
#include "mendlab/lcl.hpp"

namespace mendlab {

using BigInt = boost::multiprecision::cpp_int;

// Labels of the built problem: sigma' in order (indices 0..k-1), then the wildcard (index k).
struct PropagationSpec {
  std::vector<std::string> labels;
  std::string l0;
  std::string wildcard;
  std::vector<std::vector<int>> mu;
  int delta = 1;

  int k() const { return static_cast<int>(labels.size()); }
  Label l0_index() const;
  Label wildcard_index() const { return k(); }
  Alphabet alphabet() const;
  // Throws SpecError when an invariant fails.
  void validate() const;
  bool operator==(const PropagationSpec&) const = default;
};

LclProblem build_problem(const PropagationSpec& spec, bool generalized);

BigInt matrix_row_sum(const PropagationSpec& spec, Label l, int d);

struct VolumeBounds {
  int d_max = 0;
  BigInt lower;
  BigInt upper;
};
VolumeBounds volume_bounds(const PropagationSpec& spec, int d_max);

struct GrowthClass {
  enum class Kind { EventuallyZero, Constant, Polynomial, Exponential };
  Kind kind = Kind::EventuallyZero;
  int degree = 0;            // per-distance polynomial degree (Polynomial only)
  int cumulative_degree = 0;  // degree of the cumulative volume in the distance bound
  double witness_beta = 0;   // c^(1/L) - 1 (Exponential only)
  Label witness = -1;
  std::uint64_t cycles = 0;  // c(witness)
  std::uint64_t period = 0;  // L, lcm of those cycle lengths
  std::string describe() const;
};
GrowthClass classify_growth(const PropagationSpec& spec);
// Labels reachable from l0 in the demand multigraph (l0 included).
std::vector<bool> reachable_labels(const PropagationSpec& spec);

struct Instance {
  RootedTree tree;
  PartialLabeling lambda;
  Vertex hole = 0;
};
Instance worst_case_instance(const PropagationSpec& spec, int height);

struct MendResult {
  std::int64_t volume = 0;
  PartialLabeling witness;
};

// Exact minimum mend on a rooted tree for a propagation problem. When `region` is given, only
// vertices in it may change (contains_mend); returns nullopt when no such mend exists.
std::optional<MendResult> propagation_min_mend(const PropagationSpec& spec, bool generalized,
                                               const RootedTree& t, const PartialLabeling& lambda,
                                               Vertex v,
                                               std::optional<std::span<const Vertex>> region = {});

// Full-tree oracle; throws Infeasible when no mend exists.
MendResult exact_min_volume_tree_dp(const PropagationSpec& spec, const RootedTree& t,
                                    const PartialLabeling& lambda, Vertex v);

}  // namespace mendlab
