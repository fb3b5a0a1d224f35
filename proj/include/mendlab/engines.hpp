#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mendlab/graph.hpp"
#include "mendlab/labeling.hpp"
#include "mendlab/lcl.hpp"
#include "mendlab/propagation.hpp"

namespace mendlab {

namespace detail {
class ScopeDp;
}

inline constexpr std::int64_t kForbidden = std::numeric_limits<std::int64_t>::max() / 4;
inline constexpr std::uint64_t kDefaultBudget = 20'000'000;

enum class Combine { Sum, Max };

struct DpMend {
  std::int64_t value = 0;  // sum or max of change costs
  PartialLabeling witness;
};

// True when the tree-scope DP can run: labels read by a verdict form a forest
// (the graph itself for Neighbors scope, the parent map for TreeFamily scope).
bool scope_dp_applicable(const LclProblem& p, const Graph& g);

// Exact optimization over mends of lambda at v. change_cost[x] is paid when x is relabeled
// (kForbidden: x keeps its label). Holes other than v stay unlabeled, which never hurts.
std::optional<DpMend> scope_tree_dp(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                                    Vertex v, const std::vector<std::int64_t>& change_cost,
                                    Combine combine);

enum class OracleStatus { Exact, BudgetExceeded };

struct OracleResult {
  OracleStatus status = OracleStatus::Exact;
  bool found = false;              // false with Exact status: no mend within the allowed set
  std::int64_t volume = 0;       // exact value when status is Exact
  std::int64_t lower_bound = 0;  // proven lower bound (equals volume when exact)
  PartialLabeling witness;       // meaningful only when exact
  std::uint64_t nodes = 0;
};

// Iterative-deepening search on |diff|. Branches only on vertices near an unhappy vertex,
// prunes isomorphic sibling subtrees and bounds with a packing of disjoint conflicts.
// `allowed`, when given, restricts which vertices may change.
OracleResult oracle_min_mend(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                             Vertex v, std::uint64_t budget = kDefaultBudget,
                             std::optional<std::span<const Vertex>> allowed = {});

// Per-instance bundle of exact engines. Picks the propagation DP, the tree-scope DP or the
// search, in that order of preference.
class MendOracle {
 public:
  MendOracle(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v,
             std::uint64_t budget = kDefaultBudget);
  ~MendOracle();
  MendOracle(const MendOracle&) = delete;
  MendOracle& operator=(const MendOracle&) = delete;

  // Witness mend changing labels only inside W, or nullopt. Throws BudgetExceeded.
  std::optional<PartialLabeling> contains(std::span<const Vertex> w);
  // Minimum |diff| with witness. Throws BudgetExceeded.
  DpMend min_mend();
  // Smallest rho with contains(N_rho(v)), with a witness.
  std::pair<int, PartialLabeling> radius();
  // Smallest t such that order[0..t] contains a mend (order[0] must be v); nullopt if none.
  std::optional<std::pair<std::size_t, PartialLabeling>> stop_index(std::span<const Vertex> order);

  std::string engine() const;
  std::size_t contains_calls() const { return calls_; }

 private:
  enum class Engine { Propagation, ScopeDp, Search };
  const LclProblem& p_;
  const Graph& g_;
  const PartialLabeling& lambda_;
  Vertex v_;
  std::uint64_t budget_;
  Engine engine_;
  std::unique_ptr<RootedTree> tree_;
  std::unique_ptr<detail::ScopeDp> dp_;
  std::size_t calls_ = 0;
};

std::optional<PartialLabeling> contains_mend(const LclProblem& p, const Graph& g,
                                             const PartialLabeling& lambda, Vertex v,
                                             std::span<const Vertex> w,
                                             std::uint64_t budget = kDefaultBudget);

int mending_radius(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v,
                   std::uint64_t budget = kDefaultBudget);

}  // namespace mendlab
