#include "doctest.h"
#include "mendlab/engines.hpp"

#include <random>

using namespace mendlab;

namespace {

PropagationSpec single(int mu, int delta) { return PropagationSpec{{"red"}, "red", "white", {{mu}}, delta}; }

// Exhaustive minimum over labelings that change only `allowed` vertices (all when empty).
long long brute(const LclProblem& p, const Graph& g, const PartialLabeling& lam, Vertex v,
                const std::vector<Vertex>& allowed = {}) {
  std::size_t n = g.n();
  std::vector<Vertex> vars = allowed;
  if (vars.empty()) {
    for (Vertex x = 0; x < static_cast<Vertex>(n); ++x) vars.push_back(x);
  }
  int a = static_cast<int>(p.alphabet().size());
  std::vector<int> digit(vars.size(), -1);
  long long best = -1;
  PartialLabeling cur = lam;
  for (;;) {
    bool ok = true;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      Vertex x = vars[i];
      if (digit[i] < 0) {
        if (lam[x] != kBottom || x == v) ok = false;
        cur[x] = kBottom;
      } else {
        cur[x] = digit[i];
      }
    }
    if (ok && verify_partial(p, g, cur).accepted) {
      long long d = static_cast<long long>(hamming_diff(lam, cur).size());
      if (best < 0 || d < best) best = d;
    }
    std::size_t i = 0;
    while (i < vars.size() && ++digit[i] == a) digit[i++] = -1;
    if (i == vars.size()) break;
  }
  return best;
}

struct Random {
  RootedTree tree;
  PartialLabeling lam;
  Vertex hole;
};

Random random_instance(const PropagationSpec& spec, std::mt19937& rng, int n) {
  std::vector<Edge> edges;
  for (int x = 1; x < n; ++x) edges.push_back({static_cast<Vertex>(rng() % x), static_cast<Vertex>(x)});
  RootedTree t(Graph(n, edges), 0);
  auto p = build_problem(spec, true);
  PartialLabeling lam(p.alphabet(), n);
  for (int x = 0; x < n; ++x) lam[x] = static_cast<Label>(rng() % (spec.k() + 2)) - 1;
  for (;;) {
    auto r = verify_partial(p, t.graph(), lam);
    if (r.accepted) break;
    lam[r.witness] = kBottom;
  }
  if (lam.holes().empty()) lam[static_cast<Vertex>(rng() % n)] = kBottom;
  auto holes = lam.holes();
  return {std::move(t), std::move(lam), holes[rng() % holes.size()]};
}

}  // namespace

TEST_CASE("three engines agree on the R2 worst case") {
  auto spec = single(2, 3);
  auto p = build_problem(spec, true);
  for (int h : {2, 3, 4}) {
    auto inst = worst_case_instance(spec, h);
    const Graph& g = inst.tree.graph();
    long long want = (1LL << (h + 1)) - 1;
    auto s = oracle_min_mend(p, g, inst.lambda, inst.hole);
    REQUIRE(s.status == OracleStatus::Exact);
    CHECK(s.found);
    CHECK(s.volume == want);
    CHECK(is_mend(p, g, inst.lambda, s.witness, inst.hole).is_mend());
    auto d = scope_tree_dp(p, g, inst.lambda, inst.hole, std::vector<std::int64_t>(g.n(), 1), Combine::Sum);
    REQUIRE(d.has_value());
    CHECK(d->value == want);
    CHECK(is_mend(p, g, inst.lambda, d->witness, inst.hole).is_mend());
    MendOracle o(p, g, inst.lambda, inst.hole);
    CHECK(o.engine() == "propagation-dp");
    CHECK(o.min_mend().value == want);
  }
}

TEST_CASE("contains_mend examples") {
  auto spec = single(2, 3);
  auto p = build_problem(spec, true);
  auto inst = worst_case_instance(spec, 4);
  const Graph& g = inst.tree.graph();
  std::vector<Vertex> all(g.n());
  for (Vertex x = 0; x < static_cast<Vertex>(g.n()); ++x) all[x] = x;
  CHECK(contains_mend(p, g, inst.lambda, 0, all).has_value());
  std::vector<Vertex> root{0};
  CHECK_FALSE(contains_mend(p, g, inst.lambda, 0, root).has_value());
  // two first children at every level: 31 vertices
  std::vector<Vertex> w{0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (inst.tree.depth(w[i]) == 4) continue;
    auto kids = inst.tree.children(w[i]);
    w.push_back(kids[0]);
    w.push_back(kids[1]);
  }
  CHECK(w.size() == 31);
  auto r = contains_mend(p, g, inst.lambda, 0, w);
  REQUIRE(r.has_value());
  CHECK(hamming_diff(inst.lambda, *r).size() == 31);
  w.pop_back();
  CHECK_FALSE(contains_mend(p, g, inst.lambda, 0, w).has_value());
  CHECK_FALSE(oracle_min_mend(p, g, inst.lambda, 0, kDefaultBudget, std::span<const Vertex>(w)).found);
}

TEST_CASE("single fixable hole costs one") {
  auto spec = single(1, 2);
  auto p = build_problem(spec, true);
  auto inst = worst_case_instance(spec, 3);
  PartialLabeling lam(p.alphabet(), inst.tree.n(), spec.wildcard_index());
  lam[6] = kBottom;
  auto r = oracle_min_mend(p, inst.tree.graph(), lam, 6);
  CHECK(r.volume == 1);
}

TEST_CASE("mending radius of R1, R2, R3 worst cases") {
  for (int i = 1; i <= 3; ++i) {
    auto spec = single(i, 3);
    auto p = build_problem(spec, true);
    auto inst = worst_case_instance(spec, 4);
    CHECK(mending_radius(p, inst.tree.graph(), inst.lambda, 0) == 4);
  }
}

TEST_CASE("engines agree with exhaustive search on random instances") {
  std::mt19937 rng(5);
  std::vector<PropagationSpec> specs{single(2, 3), single(1, 2),
                                     PropagationSpec{{"a", "b"}, "a", "w", {{1, 1}, {0, 1}}, 2},
                                     PropagationSpec{{"a", "b"}, "a", "w", {{0, 2}, {1, 0}}, 3}};
  for (int trial = 0; trial < 80; ++trial) {
    const auto& spec = specs[trial % specs.size()];
    auto inst = random_instance(spec, rng, 4 + static_cast<int>(rng() % 5));
    auto p = build_problem(spec, true);
    const Graph& g = inst.tree.graph();
    long long want = brute(p, g, inst.lam, inst.hole);
    auto s = oracle_min_mend(p, g, inst.lam, inst.hole);
    REQUIRE(s.status == OracleStatus::Exact);
    auto d = scope_tree_dp(p, g, inst.lam, inst.hole, std::vector<std::int64_t>(g.n(), 1), Combine::Sum);
    if (want < 0) {
      CHECK_FALSE(s.found);
      CHECK_FALSE(d.has_value());
      continue;
    }
    CHECK(s.volume == want);
    REQUIRE(d.has_value());
    CHECK(d->value == want);
    CHECK(is_mend(p, g, inst.lam, s.witness, inst.hole).is_mend());
    CHECK(is_mend(p, g, inst.lam, d->witness, inst.hole).is_mend());

    // region restriction against exhaustive search over the region
    std::vector<Vertex> w{inst.hole};
    for (Vertex x = 0; x < static_cast<Vertex>(g.n()); ++x) {
      if (x != inst.hole && rng() % 2) w.push_back(x);
    }
    bool expect = brute(p, g, inst.lam, inst.hole, w) >= 0;
    MendOracle o(p, g, inst.lam, inst.hole);
    CHECK(o.contains(w).has_value() == expect);
    std::vector<std::int64_t> cost(g.n(), kForbidden);
    for (Vertex x : w) cost[x] = 1;
    CHECK(scope_tree_dp(p, g, inst.lam, inst.hole, cost, Combine::Sum).has_value() == expect);
    CHECK(oracle_min_mend(p, g, inst.lam, inst.hole, kDefaultBudget, std::span<const Vertex>(w)).found ==
          expect);
  }
}

TEST_CASE("stop index equals the first prefix containing a mend") {
  std::mt19937 rng(9);
  auto spec = single(2, 3);
  auto p = build_problem(spec, true);
  auto inst = worst_case_instance(spec, 3);
  const Graph& g = inst.tree.graph();
  for (int trial = 0; trial < 10; ++trial) {
    // random connected exploration order from the root
    std::vector<Vertex> order{0};
    std::vector<char> in(g.n(), 0);
    in[0] = 1;
    std::vector<Vertex> frontier;
    for (const Incidence& inc : g.incident(0)) frontier.push_back(inc.to);
    while (!frontier.empty()) {
      std::size_t i = rng() % frontier.size();
      Vertex x = frontier[i];
      frontier.erase(frontier.begin() + static_cast<long>(i));
      if (in[x]) continue;
      in[x] = 1;
      order.push_back(x);
      for (const Incidence& inc : g.incident(x)) {
        if (!in[inc.to]) frontier.push_back(inc.to);
      }
    }
    std::size_t want = 0;
    while (!contains_mend(p, g, inst.lambda, 0, std::span<const Vertex>(order).subspan(0, want + 1))) ++want;
    MendOracle a(p, g, inst.lambda, 0);
    auto sa = a.stop_index(order);
    REQUIRE(sa.has_value());
    CHECK(sa->first == want);
    std::vector<std::int64_t> cost(g.n(), kForbidden);
    for (std::size_t i = 0; i < order.size(); ++i) cost[order[i]] = static_cast<std::int64_t>(i);
    auto m = scope_tree_dp(p, g, inst.lambda, 0, cost, Combine::Max);
    REQUIRE(m.has_value());
    CHECK(static_cast<std::size_t>(m->value) == want);
  }
}

TEST_CASE("budget exhaustion is reported with a lower bound") {
  auto spec = single(2, 3);
  auto p = build_problem(spec, true);
  auto inst = worst_case_instance(spec, 4);
  auto r = oracle_min_mend(p, inst.tree.graph(), inst.lambda, 0, 10);
  CHECK(r.status == OracleStatus::BudgetExceeded);
  CHECK(r.lower_bound >= 1);
  CHECK(r.lower_bound <= 31);
}
