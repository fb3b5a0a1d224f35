#include "mendlab/menders.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <thread>
#include <unordered_map>

namespace mendlab {

ExplorationView::ExplorationView(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v)
    : p_(p), g_(g), lambda_(lambda), v_(v), state_(g.n(), kHidden), pos_(g.n(), 0) {
  if (v < 0 || static_cast<std::size_t>(v) >= g.n()) throw ArgumentError("hole out of range");
  state_[v] = kFrontier;
  frontier_.push_back(v);
  explore(v);
}

void ExplorationView::explore(Vertex x) {
  if (x < 0 || static_cast<std::size_t>(x) >= g_.n() || state_[x] != kFrontier) {
    throw PolicyViolation("policy chose vertex " + std::to_string(x) + ", which is not adjacent to W");
  }
  std::uint32_t i = pos_[x];
  Vertex last = frontier_.back();
  frontier_[i] = last;
  pos_[last] = i;
  frontier_.pop_back();
  state_[x] = kExplored;
  order_.push_back(x);
  for (const Incidence& inc : g_.incident(x)) {
    if (state_[inc.to] == kHidden) {
      state_[inc.to] = kFrontier;
      pos_[inc.to] = static_cast<std::uint32_t>(frontier_.size());
      frontier_.push_back(inc.to);
    }
  }
}

void ExplorationView::require_visible(Vertex x) const {
  if (x < 0 || static_cast<std::size_t>(x) >= g_.n() || state_[x] == kHidden) {
    throw PolicyViolation("policy read vertex " + std::to_string(x) + " outside N1(W)");
  }
}

std::span<const Incidence> ExplorationView::incident(Vertex x) const {
  if (!is_explored(x)) throw PolicyViolation("policy read the edges of an unexplored vertex");
  return g_.incident(x);
}

std::vector<Vertex> ExplorationView::children(Vertex x) const {
  std::vector<Vertex> out;
  for (const Incidence& inc : incident(x)) {
    if (g_.parent(inc.to) == x) out.push_back(inc.to);
  }
  return out;
}

Label ExplorationView::label(Vertex x) const {
  require_visible(x);
  return lambda_[x];
}

int ExplorationView::degree(Vertex x) const {
  require_visible(x);
  return g_.degree(x);
}

Vertex ExplorationView::parent(Vertex x) const {
  require_visible(x);
  return g_.parent(x);
}

int ExplorationView::direction(Vertex from, Vertex to) const {
  if (!is_explored(from)) throw PolicyViolation("policy read the edges of an unexplored vertex");
  int e = g_.find_edge(from, to);
  if (e < 0) throw ArgumentError("no such edge");
  return g_.direction_from(e, from);
}

namespace {

class BfsPolicy : public ExplorationPolicy {
 public:
  std::string name() const override { return "bfs"; }
  Vertex next(const ExplorationView& view, Rng&) override {
    const auto& w = view.explored();
    for (; seen_ < w.size(); ++seen_) {
      for (const Incidence& inc : view.incident(w[seen_])) queue_.push_back(inc.to);
    }
    while (!queue_.empty()) {
      Vertex y = queue_.front();
      queue_.pop_front();
      if (!view.is_explored(y)) return y;
    }
    throw Infeasible("bfs: nothing left to explore");
  }

 private:
  std::size_t seen_ = 0;
  std::deque<Vertex> queue_;
};

class UniformFrontierPolicy : public ExplorationPolicy {
 public:
  std::string name() const override { return "uniform-frontier"; }
  Vertex next(const ExplorationView& view, Rng& rng) override {
    auto f = view.frontier();
    if (f.empty()) throw Infeasible("uniform-frontier: nothing left to explore");
    return f[rng.below(f.size())];
  }
};

class DfsPolicy : public ExplorationPolicy {
 public:
  explicit DfsPolicy(bool random) : random_(random) {}
  std::string name() const override { return random_ ? "random-dfs" : "first-descent"; }
  Vertex next(const ExplorationView& view, Rng& rng) override {
    const auto& w = view.explored();
    for (; seen_ < w.size(); ++seen_) stack_.push_back(w[seen_]);
    while (!stack_.empty()) {
      Vertex top = stack_.back();
      std::vector<Vertex> open;
      for (const Incidence& inc : view.incident(top)) {
        if (!view.is_explored(inc.to)) open.push_back(inc.to);
      }
      if (open.empty()) {
        stack_.pop_back();
        continue;
      }
      return random_ ? open[rng.below(open.size())] : open.front();
    }
    throw Infeasible(name() + ": nothing left to explore");
  }

 private:
  bool random_;
  std::size_t seen_ = 0;
  std::vector<Vertex> stack_;
};

class ChildPlanPolicy : public ExplorationPolicy {
 public:
  ChildPlanPolicy(const PropagationSpec& spec, bool generalized, bool random)
      : spec_(spec), generalized_(generalized), random_(random) {
    spec_.validate();
  }
  std::string name() const override { return random_ ? "random-child" : "ordered-child"; }

  Vertex next(const ExplorationView& view, Rng& rng) override {
    const auto& w = view.explored();
    for (; seen_ < w.size(); ++seen_) handle(w[seen_], view, rng);
    while (!queue_.empty()) {
      Vertex y = queue_.front();
      queue_.pop_front();
      if (!view.is_explored(y) && view.is_visible(y)) return y;
    }
    // The plan is exhausted without a mend (another hole or an infeasible demand): widen by BFS.
    for (Vertex x : w) {
      for (const Incidence& inc : view.incident(x)) {
        if (!view.is_explored(inc.to)) return inc.to;
      }
    }
    throw Infeasible(name() + ": nothing left to explore");
  }

 private:
  Label current(const ExplorationView& view, Vertex x) const {
    auto it = plan_.find(x);
    return it != plan_.end() ? it->second : view.label(x);
  }

  void handle(Vertex x, const ExplorationView& view, Rng& rng) {
    Vertex hole = view.hole();
    if (x == hole) {
      Vertex p = view.parent(x);
      if (p == kNoVertex) {
        plan_[x] = spec_.l0_index();
        finish_hole(view, rng);
      } else {
        hole_pending_ = true;
        queue_.push_front(p);
      }
      return;
    }
    demands(x, view, rng);
    if (hole_pending_ && x == view.parent(hole)) {
      hole_pending_ = false;
      plan_.emplace(hole, spec_.wildcard_index());
      finish_hole(view, rng);
    }
  }

  void finish_hole(const ExplorationView& view, Rng& rng) {
    Vertex hole = view.hole();
    demands(hole, view, rng);
    // Children that were relaxed by the hole may need their own demands met.
    for (Vertex c : view.children(hole)) {
      if (plan_.count(c)) continue;
      Label l = view.label(c);
      if (l != kBottom && l != spec_.wildcard_index()) queue_.push_back(c);
    }
  }

  void demands(Vertex x, const ExplorationView& view, Rng& rng) {
    Label l = current(view, x);
    if (l == kBottom || l == spec_.wildcard_index()) return;
    std::vector<Vertex> kids = view.children(x);
    if (generalized_ && static_cast<int>(kids.size()) != spec_.delta) return;
    Vertex hole = view.hole();
    Vertex p = view.parent(x);
    if (p != kNoVertex && p != hole && view.label(p) == kBottom) return;
    for (Vertex c : kids) {
      if (c != hole && current(view, c) == kBottom) return;  // relaxed by another hole
    }
    if (random_) std::shuffle(kids.begin(), kids.end(), rng);
    int k = spec_.k();
    std::vector<int> need(spec_.mu[l].begin(), spec_.mu[l].end());
    std::vector<Vertex> free;
    for (Vertex c : kids) {
      Label lc = c == hole && !plan_.count(c) ? kBottom : current(view, c);
      if (lc >= 0 && lc < k && need[lc] > 0) {
        --need[lc];
      } else {
        free.push_back(c);
      }
    }
    std::size_t next = 0;
    for (int j = 0; j < k; ++j) {
      for (; need[j] > 0 && next < free.size(); --need[j]) {
        Vertex c = free[next++];
        plan_[c] = j;
        if (c != hole) queue_.push_back(c);
      }
    }
  }

  PropagationSpec spec_;
  bool generalized_;
  bool random_;
  std::size_t seen_ = 0;
  bool hole_pending_ = false;
  std::unordered_map<Vertex, Label> plan_;
  std::deque<Vertex> queue_;
};

}  // namespace

std::unique_ptr<ExplorationPolicy> bfs_policy() { return std::make_unique<BfsPolicy>(); }
std::unique_ptr<ExplorationPolicy> uniform_frontier_policy() { return std::make_unique<UniformFrontierPolicy>(); }
std::unique_ptr<ExplorationPolicy> random_dfs_policy() { return std::make_unique<DfsPolicy>(true); }
std::unique_ptr<ExplorationPolicy> first_descent_policy() { return std::make_unique<DfsPolicy>(false); }

std::unique_ptr<ExplorationPolicy> random_child_policy(const PropagationSpec& spec, bool generalized) {
  return std::make_unique<ChildPlanPolicy>(spec, generalized, true);
}

std::unique_ptr<ExplorationPolicy> ordered_child_policy(const PropagationSpec& spec, bool generalized) {
  return std::make_unique<ChildPlanPolicy>(spec, generalized, false);
}

std::vector<std::string> policy_names() {
  return {"bfs", "uniform-frontier", "random-dfs", "first-descent", "random-child", "ordered-child"};
}

PolicyFactory policy_by_name(const std::string& name, const LclProblem& p) {
  if (name == "bfs") return [] { return bfs_policy(); };
  if (name == "uniform-frontier") return [] { return uniform_frontier_policy(); };
  if (name == "random-dfs") return [] { return random_dfs_policy(); };
  if (name == "first-descent") return [] { return first_descent_policy(); };
  if (name == "random-child" || name == "ordered-child") {
    if (!p.propagation) throw ArgumentError(name + " needs a propagation problem");
    PropagationSpec spec = *p.propagation;
    bool gen = p.generalized;
    if (name == "random-child") return [spec, gen] { return random_child_policy(spec, gen); };
    return [spec, gen] { return ordered_child_policy(spec, gen); };
  }
  throw ArgumentError("unknown policy '" + name + "'");
}

std::optional<MendRun> run_policy_bounded(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                                          Vertex v, ExplorationPolicy& policy, std::uint64_t seed,
                                          const RunOptions& opt) {
  MendOracle oracle(p, g, lambda, v, opt.budget);
  ExplorationView view(p, g, lambda, v);
  Rng rng(seed);
  std::vector<Vertex> traj{v};
  std::size_t cap = opt.max_explored ? opt.max_explored : g.n();
  auto extend = [&](std::size_t len) {
    while (traj.size() < len && view.frontier_size() > 0) {
      Vertex y = policy.next(view, rng);
      view.explore(y);
      traj.push_back(y);
    }
  };
  // Gallop on the prefix length; contains_mend is monotone along the trajectory.
  std::size_t len = 1;
  for (;;) {
    len = std::min(len, cap);
    extend(len);
    std::span<const Vertex> prefix(traj.data(), traj.size());
    if (oracle.contains(prefix)) {
      auto stop = oracle.stop_index(prefix);
      MendRun run;
      run.explored.assign(traj.begin(), traj.begin() + static_cast<std::ptrdiff_t>(stop->first + 1));
      run.mend = std::move(stop->second);
      run.diff = hamming_diff(lambda, run.mend);
      run.steps = stop->first;
      run.seed = seed;
      return run;
    }
    if (traj.size() >= cap) return std::nullopt;
    if (traj.size() < len) throw Infeasible("no mend exists in the component of the hole");
    len *= 2;
  }
}

MendRun run_policy(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v,
                   ExplorationPolicy& policy, std::uint64_t seed) {
  auto r = run_policy_bounded(p, g, lambda, v, policy, seed, {});
  if (!r) throw Infeasible("no mend exists for this instance");
  return std::move(*r);
}

VolumeEstimate estimate_expected_volume(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                                        Vertex v, const PolicyFactory& policy, std::size_t trials,
                                        std::uint64_t seed, unsigned jobs) {
  if (trials < 1) throw ArgumentError("trials must be at least 1");
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, trials));
  std::vector<double> vol(trials, 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next++;
      if (i >= trials || failed) return;
      try {
        auto pol = policy();
        vol[i] = static_cast<double>(run_policy(p, g, lambda, v, *pol, seed + i).explored.size());
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  VolumeEstimate e;
  e.trials = trials;
  double sum = 0;
  for (double x : vol) sum += x;
  e.mean = sum / static_cast<double>(trials);
  double ss = 0;
  for (double x : vol) ss += (x - e.mean) * (x - e.mean);
  e.stderr_ = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0.0;
  e.min = *std::min_element(vol.begin(), vol.end());
  e.max = *std::max_element(vol.begin(), vol.end());
  return e;
}

MendRun deterministic_ball_mender(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v) {
  MendOracle oracle(p, g, lambda, v);
  auto [rho, witness] = oracle.radius();
  MendRun run;
  for (const BallEntry& b : ball(g, std::span<const Vertex>(&v, 1), rho)) run.explored.push_back(b.v);
  run.mend = std::move(witness);
  run.diff = hamming_diff(lambda, run.mend);
  run.steps = run.explored.size() - 1;
  return run;
}

HintedRun hinted_ball_mender(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v,
                             std::function<std::size_t(std::size_t)> f) {
  auto full = std::make_shared<std::optional<MendRun>>();
  return [&p, &g, &lambda, v, f, full](std::size_t m) -> std::optional<MendRun> {
    if (!*full) *full = deterministic_ball_mender(p, g, lambda, v);
    if ((*full)->explored.size() > f(m)) return std::nullopt;
    return **full;
  };
}

MendRun guess_and_double(const HintedRun& run, const std::function<std::size_t(std::size_t)>& f,
                         GuessTrace* trace, std::size_t max_hint) {
  GuessTrace local;
  GuessTrace& t = trace ? *trace : local;
  t = {};
  std::size_t m = 1;
  for (;;) {
    t.hints.push_back(m);
    if (auto r = run(m)) {
      t.total_explored += r->explored.size();
      return std::move(*r);
    }
    std::size_t fm = f(m);
    t.total_explored += fm + 1;
    // Smallest x with f(x) >= 2 f(m).
    std::size_t goal = 2 * fm;
    std::size_t hi = m + 1;
    while (f(hi) < goal) {
      if (hi > max_hint) throw Infeasible("guess_and_double: size hint exceeded its bound");
      hi *= 2;
    }
    std::size_t lo = m;
    while (hi - lo > 1) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (f(mid) >= goal) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    m = hi;
    if (m > max_hint) throw Infeasible("guess_and_double: size hint exceeded its bound");
  }
}

}  // namespace mendlab
