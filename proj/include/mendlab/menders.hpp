#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mendlab/engines.hpp"
#include "mendlab/graph.hpp"
#include "mendlab/labeling.hpp"
#include "mendlab/lcl.hpp"

namespace mendlab {

struct MendRun {
  std::vector<Vertex> explored;  // W_F in exploration order, starting with the hole
  PartialLabeling mend;
  std::vector<Vertex> diff;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
};

// What a policy may look at: the explored set W, the structure around it and labels on N1(W).
class ExplorationView {
 public:
  ExplorationView(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v);

  const LclProblem& problem() const { return p_; }
  Vertex hole() const { return v_; }
  const std::vector<Vertex>& explored() const { return order_; }
  bool is_explored(Vertex x) const { return state_[x] == kExplored; }
  bool is_visible(Vertex x) const { return state_[x] != kHidden; }
  // Unexplored vertices adjacent to W (order unspecified).
  std::span<const Vertex> frontier() const { return frontier_; }
  std::size_t frontier_size() const { return frontier_.size(); }

  // Requires x explored.
  std::span<const Incidence> incident(Vertex x) const;
  std::vector<Vertex> children(Vertex x) const;
  // Requires x visible.
  Label label(Vertex x) const;
  int degree(Vertex x) const;
  Vertex parent(Vertex x) const;
  int direction(Vertex from, Vertex to) const;

  void explore(Vertex x);

 private:
  enum : std::uint8_t { kHidden, kFrontier, kExplored };
  void require_visible(Vertex x) const;
  const LclProblem& p_;
  const Graph& g_;
  const PartialLabeling& lambda_;
  Vertex v_;
  std::vector<std::uint8_t> state_;
  std::vector<Vertex> order_;
  std::vector<Vertex> frontier_;
  std::vector<std::uint32_t> pos_;  // index in frontier_
};

class ExplorationPolicy {
 public:
  virtual ~ExplorationPolicy() = default;
  virtual std::string name() const = 0;
  // Next vertex to explore; must be on the frontier.
  virtual Vertex next(const ExplorationView& view, Rng& rng) = 0;
};

using PolicyFactory = std::function<std::unique_ptr<ExplorationPolicy>()>;

std::unique_ptr<ExplorationPolicy> bfs_policy();
std::unique_ptr<ExplorationPolicy> uniform_frontier_policy();
std::unique_ptr<ExplorationPolicy> random_dfs_policy();
// Deterministic depth-first search taking the first unexplored port.
std::unique_ptr<ExplorationPolicy> first_descent_policy();
// Plans demands of a propagation problem and explores the children it relabels.
// Random: demands go to uniformly random children. Ordered: to the first children in port order.
std::unique_ptr<ExplorationPolicy> random_child_policy(const PropagationSpec& spec, bool generalized = true);
std::unique_ptr<ExplorationPolicy> ordered_child_policy(const PropagationSpec& spec, bool generalized = true);

// Names: bfs, uniform-frontier, random-dfs, first-descent, random-child, ordered-child.
PolicyFactory policy_by_name(const std::string& name, const LclProblem& p);
std::vector<std::string> policy_names();

struct RunOptions {
  std::uint64_t budget = kDefaultBudget;
  // Exploration stops with nullopt once |W| would exceed this bound.
  std::size_t max_explored = 0;
};

// Simulates the mender: stops at the first explored set that contains a mend.
MendRun run_policy(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v,
                   ExplorationPolicy& policy, std::uint64_t seed);
std::optional<MendRun> run_policy_bounded(const LclProblem& p, const Graph& g,
                                          const PartialLabeling& lambda, Vertex v,
                                          ExplorationPolicy& policy, std::uint64_t seed,
                                          const RunOptions& opt);

struct VolumeEstimate {
  double mean = 0;
  double stderr_ = 0;
  std::size_t trials = 0;
  double min = 0;
  double max = 0;
};

// Trial i runs with seed + i; trials run on `jobs` threads (0: hardware concurrency).
VolumeEstimate estimate_expected_volume(const LclProblem& p, const Graph& g,
                                        const PartialLabeling& lambda, Vertex v,
                                        const PolicyFactory& policy, std::size_t trials,
                                        std::uint64_t seed, unsigned jobs = 0);

// Explores whole layers N_0(v), N_1(v), ... until the ball contains a mend.
MendRun deterministic_ball_mender(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                                  Vertex v);

struct GuessTrace {
  std::vector<std::size_t> hints;  // m of every attempt, the last one succeeded
  std::size_t total_explored = 0;  // aborted attempts count f(m) + 1
};

// A run given a size hint m either halts with a run or aborts (nullopt) after exploring more
// than f(m) vertices.
using HintedRun = std::function<std::optional<MendRun>(std::size_t m)>;
MendRun guess_and_double(const HintedRun& run, const std::function<std::size_t(std::size_t)>& f,
                         GuessTrace* trace = nullptr, std::size_t max_hint = std::size_t{1} << 40);

// The ball mender aborting once more than f(m) vertices are explored.
HintedRun hinted_ball_mender(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                             Vertex v, std::function<std::size_t(std::size_t)> f);

}  // namespace mendlab
