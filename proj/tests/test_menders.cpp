#include "doctest.h"
#include "mendlab/families.hpp"
#include "mendlab/menders.hpp"

#include <algorithm>
#include <set>

using namespace mendlab;

namespace {

struct Instance {
  PropagationSpec spec;
  RootedTree tree;
  LclProblem problem;
  PartialLabeling lambda;
};

Instance r_instance(int i, int h, bool generalized = true) {
  Instance s{r_i_problem(i), build_balanced_tree(3, h), {}, {}};
  s.problem = build_problem(s.spec, generalized);
  s.lambda = wildcard_labeling(s.spec, s.tree);
  return s;
}

bool connected_within(const Graph& g, const std::vector<Vertex>& w) {
  std::set<Vertex> in(w.begin(), w.end());
  std::set<Vertex> seen{w.front()};
  std::vector<Vertex> stack{w.front()};
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (const Incidence& inc : g.incident(x)) {
      if (in.count(inc.to) && seen.insert(inc.to).second) stack.push_back(inc.to);
    }
  }
  return seen.size() == in.size();
}

void check_run(const LclProblem& p, const Graph& g, const PartialLabeling& lam, Vertex v, const MendRun& r) {
  CHECK(r.explored.front() == v);
  CHECK(is_mend(p, g, lam, r.mend, v).is_mend());
  std::set<Vertex> w(r.explored.begin(), r.explored.end());
  CHECK(w.size() == r.explored.size());
  for (Vertex x : r.diff) CHECK(w.count(x));
  CHECK(connected_within(g, r.explored));
  CHECK(r.steps + 1 == r.explored.size());
}

class Teleport : public ExplorationPolicy {
 public:
  std::string name() const override { return "teleport"; }
  Vertex next(const ExplorationView& view, Rng&) override {
    for (std::size_t x = 0;; ++x) {
      if (!view.is_visible(static_cast<Vertex>(x))) return static_cast<Vertex>(x);
    }
  }
};

class Peek : public ExplorationPolicy {
 public:
  std::string name() const override { return "peek"; }
  Vertex next(const ExplorationView& view, Rng&) override {
    for (std::size_t x = 0;; ++x) {
      if (!view.is_visible(static_cast<Vertex>(x))) {
        (void)view.label(static_cast<Vertex>(x));
        return view.frontier().front();
      }
    }
  }
};

}  // namespace

TEST_CASE("immediate mend explores only the hole") {
  Graph g(3, {{0, 1}, {1, 2}});
  auto p = always_happy_problem();
  PartialLabeling lam(p.alphabet(), 3, 0);
  lam[1] = kBottom;
  auto pol = bfs_policy();
  auto r = run_policy(p, g, lam, 1, *pol, 0);
  CHECK(r.explored == std::vector<Vertex>{1});
  CHECK(r.steps == 0);
  CHECK(deterministic_ball_mender(p, g, lam, 1).explored.size() == 1);
}

TEST_CASE("ball mender on R2") {
  auto s = r_instance(2, 4);
  auto r = deterministic_ball_mender(s.problem, s.tree.graph(), s.lambda, 0);
  CHECK(r.explored.size() == 121);
  check_run(s.problem, s.tree.graph(), s.lambda, 0, r);
}

TEST_CASE("random-child follows the demands") {
  for (int i = 1; i <= 3; ++i) {
    auto s = r_instance(i, 4);
    std::size_t expect = 0;
    for (int d = 0, layer = 1; d <= 4; ++d, layer *= i) expect += static_cast<std::size_t>(layer);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      auto pol = random_child_policy(s.spec);
      auto r = run_policy(s.problem, s.tree.graph(), s.lambda, 0, *pol, seed);
      CHECK(r.explored.size() == expect);
      CHECK(r.diff.size() == expect);
      check_run(s.problem, s.tree.graph(), s.lambda, 0, r);
    }
    auto est = estimate_expected_volume(s.problem, s.tree.graph(), s.lambda, 0,
                                        policy_by_name("random-child", s.problem), 16, 1, 2);
    CHECK(est.mean == doctest::Approx(static_cast<double>(expect)));
    CHECK(est.stderr_ == 0);
  }
}

TEST_CASE("random-child on an inner hole") {
  auto s = r_instance(2, 4);
  const Graph& g = s.tree.graph();
  PartialLabeling lam(s.lambda);
  // A valid complete R2 labeling: every vertex red.
  for (std::size_t x = 0; x < g.n(); ++x) lam[static_cast<Vertex>(x)] = s.spec.l0_index();
  Vertex v = s.tree.children(0)[1];
  lam[v] = kBottom;
  auto pol = random_child_policy(s.spec);
  auto r = run_policy(s.problem, g, lam, v, *pol, 4);
  check_run(s.problem, g, lam, v, r);
  CHECK(MendOracle(s.problem, g, lam, v).min_mend().value == 1);
}

TEST_CASE("policies produce mends") {
  auto s = r_instance(2, 3);
  const Graph& g = s.tree.graph();
  for (const auto& name : policy_names()) {
    auto make = policy_by_name(name, s.problem);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      auto pol = make();
      CHECK(pol->name() == name);
      auto r = run_policy(s.problem, g, s.lambda, 0, *pol, seed);
      check_run(s.problem, g, s.lambda, 0, r);
      CHECK(r.explored.size() >= 15);
    }
  }
  auto inst = sinkless_instance(3);
  auto make = policy_by_name("bfs", inst.problem);
  auto pol = make();
  auto r = run_policy(inst.problem, inst.graph, inst.lambda, inst.hole, *pol, 0);
  check_run(inst.problem, inst.graph, inst.lambda, inst.hole, r);
  CHECK_THROWS_AS(policy_by_name("random-child", inst.problem), ArgumentError);
  CHECK_THROWS_AS(policy_by_name("nope", inst.problem), ArgumentError);
}

TEST_CASE("degree-two sink needs the hidden vertex") {
  auto inst = degree_two_sink_instance(3, 2);
  for (const auto& name : {"bfs", "uniform-frontier", "random-dfs"}) {
    auto pol = policy_by_name(name, inst.problem)();
    auto r = run_policy(inst.problem, inst.graph, inst.lambda, inst.hole, *pol, 5);
    check_run(inst.problem, inst.graph, inst.lambda, inst.hole, r);
    CHECK(std::find(r.explored.begin(), r.explored.end(), inst.hidden) != r.explored.end());
  }
}

TEST_CASE("estimates are reproducible") {
  auto s = r_instance(2, 3);
  auto make = policy_by_name("uniform-frontier", s.problem);
  auto a = estimate_expected_volume(s.problem, s.tree.graph(), s.lambda, 0, make, 12, 100, 1);
  auto b = estimate_expected_volume(s.problem, s.tree.graph(), s.lambda, 0, make, 12, 100, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.min >= 15);
  CHECK(a.max <= 40);
  auto det = estimate_expected_volume(s.problem, s.tree.graph(), s.lambda, 0, policy_by_name("bfs", s.problem), 5, 0);
  CHECK(det.stderr_ == 0);
  CHECK_THROWS_AS(estimate_expected_volume(s.problem, s.tree.graph(), s.lambda, 0, make, 0, 0), ArgumentError);
}

TEST_CASE("bounded runs stop at the cap") {
  auto s = r_instance(3, 3);
  auto pol = bfs_policy();
  RunOptions opt;
  opt.max_explored = 10;
  CHECK_FALSE(run_policy_bounded(s.problem, s.tree.graph(), s.lambda, 0, *pol, 0, opt));
}

TEST_CASE("policies that cheat are rejected") {
  auto s = r_instance(2, 3);
  Teleport t;
  CHECK_THROWS_AS(run_policy(s.problem, s.tree.graph(), s.lambda, 0, t, 0), PolicyViolation);
  Peek k;
  CHECK_THROWS_AS(run_policy(s.problem, s.tree.graph(), s.lambda, 0, k, 0), PolicyViolation);
}

TEST_CASE("guess and double") {
  auto f = [](std::size_t m) { return m; };
  HintedRun run = [](std::size_t m) -> std::optional<MendRun> {
    if (m < 10) return std::nullopt;
    MendRun r;
    r.explored.assign(10, 0);
    return r;
  };
  GuessTrace trace;
  guess_and_double(run, f, &trace);
  CHECK(trace.hints == std::vector<std::size_t>{1, 2, 4, 8, 16});
  CHECK(trace.total_explored == 2 + 3 + 5 + 9 + 10);
  CHECK(trace.total_explored <= 40);

  // f(m) = m^2: the next hint is the smallest x with x^2 >= 2 m^2.
  GuessTrace sq;
  HintedRun never_small = [](std::size_t m) -> std::optional<MendRun> {
    if (m < 6) return std::nullopt;
    return MendRun{};
  };
  guess_and_double(never_small, [](std::size_t m) { return m * m; }, &sq);
  CHECK(sq.hints == std::vector<std::size_t>{1, 2, 3, 5, 8});

  auto s = r_instance(2, 4);
  auto hinted = hinted_ball_mender(s.problem, s.tree.graph(), s.lambda, 0, f);
  GuessTrace ball;
  auto r = guess_and_double(hinted, f, &ball);
  CHECK(r.explored.size() == 121);
  CHECK(ball.total_explored <= 4 * 121);
  CHECK_THROWS_AS(guess_and_double([](std::size_t) { return std::optional<MendRun>{}; }, f, nullptr, 1000),
                  Infeasible);
}
