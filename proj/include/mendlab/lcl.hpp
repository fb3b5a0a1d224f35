#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mendlab/graph.hpp"
#include "mendlab/labeling.hpp"

namespace mendlab {

struct PropagationSpec;

struct ViewArc {
  int to;    // local index of the neighbor
  int port;  // position of this edge in the owner's full incidence list
  int dir;   // +1 oriented away from the owner, -1 toward it, 0 unoriented
};

// Materialized radius-r neighborhood of a center vertex. Local index 0 is the center;
// indices follow BFS order. Global vertex ids are not exposed to verifiers.
class LocalView {
 public:
  static constexpr int kNoParent = -1;
  static constexpr int kParentOutside = -2;

  LocalView() = default;
  LocalView(const Graph& g, const PartialLabeling& lambda, Vertex center, int radius);

  int size() const { return static_cast<int>(dist_.size()); }
  int radius() const { return radius_; }
  int dist(int i) const { return dist_[i]; }
  int degree(int i) const { return degree_[i]; }
  Label label(int i) const { return labels_[i]; }
  void set_label(int i, Label l) { labels_[i] = l; }
  std::span<const ViewArc> arcs(int i) const {
    return {arcs_.data() + arc_off_[i], arcs_.data() + arc_off_[i + 1]};
  }
  bool rooted() const { return rooted_; }
  int parent(int i) const { return parent_[i]; }
  // Adjacent view vertices whose parent is i, in port order.
  std::vector<int> children(int i) const;
  bool has_bottom() const;

  // Structure-only serialization; equal keys mean isomorphic views up to labels.
  std::vector<int> shape_key() const;

  // Engine-side bookkeeping (not visible to verifiers through the interface above).
  Vertex global(int i) const { return global_[i]; }
  int local_of(Vertex v) const;

 private:
  int radius_ = 0;
  bool rooted_ = false;
  std::vector<int> dist_;
  std::vector<int> degree_;
  std::vector<Label> labels_;
  std::vector<int> parent_;
  std::vector<std::uint32_t> arc_off_;
  std::vector<ViewArc> arcs_;
  std::vector<Vertex> global_;
};

// Which labels a verdict may read, beyond the structure of the radius-r view.
enum class LabelScope {
  Ball,        // any label within the radius
  Neighbors,   // the center and its adjacent vertices
  TreeFamily,  // the center, its parent and its children under the parent map
};

class LclProblem {
 public:
  using Verifier = std::function<bool(const LocalView&)>;

  LclProblem() = default;
  LclProblem(std::string name, Alphabet alphabet, int radius, Verifier verifier);

  const std::string& name() const { return name_; }
  const Alphabet& alphabet() const { return alphabet_; }
  int radius() const { return radius_; }

  // Base verifier on a fully labeled view.
  bool base_happy(const LocalView& view) const { return verifier_(view); }
  // Relaxed verifier: happy whenever some ⊥ lies within distance r.
  bool happy(const LocalView& view) const {
    return view.has_bottom() || verifier_(view);
  }

  // Optional structure used by specialized engines.
  std::shared_ptr<const PropagationSpec> propagation;
  bool generalized = false;
  // Verdicts never depend on port numbers or on which child is which.
  bool port_invariant = false;
  LabelScope scope = LabelScope::Ball;
  // Optional filter: labels a vertex of the given degree may ever carry in a solution.
  std::function<bool(int degree, Label)> admissible;

  LabelScope effective_scope() const {
    return radius_ <= 1 && scope == LabelScope::Ball ? LabelScope::Neighbors : scope;
  }
  bool allows(int degree, Label l) const { return !admissible || admissible(degree, l); }

 private:
  std::string name_;
  Alphabet alphabet_;
  int radius_ = 0;
  Verifier verifier_;
};

struct VerifyResult {
  bool accepted = true;
  Vertex witness = kNoVertex;  // first unhappy vertex in index order
};

VerifyResult verify_full(const LclProblem& p, const Graph& g, const PartialLabeling& lambda);
VerifyResult verify_partial(const LclProblem& p, const Graph& g, const PartialLabeling& lambda);
bool happy_at(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v);
// Unhappy vertices (relaxed verdict) among those within r of `changed`, sorted.
std::vector<Vertex> unhappy_near(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                                 std::span<const Vertex> changed);

struct MendCheck {
  bool valid = false;
  bool progress = false;
  std::vector<std::pair<Vertex, std::string>> violations;
  bool is_mend() const { return valid && progress; }
};

MendCheck is_mend(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                  const PartialLabeling& lambda2, Vertex v);

// Memoizes relaxed verdicts per (view shape, label tuple).
class VerdictCache {
 public:
  explicit VerdictCache(const LclProblem& p) : p_(p) {}
  int shape_of(const LocalView& view);
  bool happy(int shape, const LocalView& view);
  bool happy(const LocalView& view) { return happy(shape_of(view), view); }
  std::size_t evaluations() const { return evaluations_; }

 private:
  const LclProblem& p_;
  std::map<std::vector<int>, int> ids_;
  std::vector<std::vector<std::int8_t>> tables_;
  std::size_t evaluations_ = 0;
};

std::string label_name(const Alphabet& a, Label l);

}  // namespace mendlab
