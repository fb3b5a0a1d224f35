#include "doctest.h"
#include "mendlab/propagation.hpp"

#include <random>

using namespace mendlab;

namespace {

PropagationSpec single(int mu, int delta) { return PropagationSpec{{"red"}, "red", "white", {{mu}}, delta}; }

PropagationSpec mk(int k) {
  PropagationSpec s;
  for (int i = 1; i <= k; ++i) s.labels.push_back("l" + std::to_string(i));
  s.l0 = "l1";
  s.wildcard = "w";
  s.mu.assign(k, std::vector<int>(k, 0));
  for (int i = 0; i < k; ++i) {
    s.mu[i][i] = 1;
    if (i + 1 < k) s.mu[i][i + 1] = 1;
  }
  s.delta = 2;
  return s;
}

// Direct matrix power with 64-bit entries.
std::vector<std::vector<long long>> mpow(const PropagationSpec& s, int d) {
  int k = s.k();
  std::vector<std::vector<long long>> r(k, std::vector<long long>(k, 0));
  for (int i = 0; i < k; ++i) r[i][i] = 1;
  for (int step = 0; step < d; ++step) {
    std::vector<std::vector<long long>> nr(k, std::vector<long long>(k, 0));
    for (int i = 0; i < k; ++i)
      for (int m = 0; m < k; ++m)
        for (int j = 0; j < k; ++j) nr[i][j] += r[i][m] * s.mu[m][j];
    r = nr;
  }
  return r;
}

// Exhaustive minimum mend: tries every labeling (⊥ allowed only where λ had ⊥).
long long brute_min_mend(const LclProblem& p, const Graph& g, const PartialLabeling& lam, Vertex v) {
  std::size_t n = g.n();
  int a = static_cast<int>(p.alphabet().size());
  std::vector<int> digit(n, 0);
  long long best = -1;
  PartialLabeling cur = lam;
  for (;;) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) {
      int d = digit[x];
      if (d == a) {
        if (lam[static_cast<Vertex>(x)] != kBottom || static_cast<Vertex>(x) == v) ok = false;
        cur[static_cast<Vertex>(x)] = kBottom;
      } else {
        cur[static_cast<Vertex>(x)] = d;
      }
    }
    if (ok && verify_partial(p, g, cur).accepted) {
      long long d = static_cast<long long>(hamming_diff(lam, cur).size());
      if (best < 0 || d < best) best = d;
    }
    std::size_t i = 0;
    while (i < n && ++digit[i] > a) digit[i++] = 0;
    if (i == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(build_problem(PropagationSpec{{"red", "white"}, "red", "white", {{1, 0}, {0, 0}}, 3}, true), SpecError);
  CHECK_THROWS_AS(single(4, 3).validate(), SpecError);
  CHECK_NOTHROW(single(3, 3).validate());
}

TEST_CASE("matrix row sums") {
  CHECK(matrix_row_sum(single(2, 3), 0, 3) == 8);
  CHECK(matrix_row_sum(mk(3), 1, 0) == 1);
  CHECK(matrix_row_sum(mk(2), 0, 5) == 6);
  std::mt19937 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    PropagationSpec s{{"a", "b", "c"}, "a", "w", {}, 9};
    s.mu.assign(3, std::vector<int>(3, 0));
    for (auto& row : s.mu)
      for (int& x : row) x = static_cast<int>(rng() % 3);
    for (int d = 0; d < 8; ++d) {
      auto m = mpow(s, d);
      for (int l = 0; l < 3; ++l) {
        long long want = m[l][0] + m[l][1] + m[l][2];
        CHECK(matrix_row_sum(s, l, d) == want);
      }
    }
  }
}

TEST_CASE("volume bounds") {
  auto b = volume_bounds(single(2, 3), 4);
  CHECK(b.lower == 31);
  CHECK(b.upper == 31);
  b = volume_bounds(single(1, 3), 4);
  CHECK(b.lower == 5);
  CHECK(b.upper == 5);
  b = volume_bounds(mk(2), 3);
  CHECK(b.lower == 10);
  CHECK(b.upper == 10);
  b = volume_bounds(single(3, 3), 80);
  CHECK(b.lower == (BigInt(1) << 0) * ((boost::multiprecision::pow(BigInt(3), 81) - 1) / 2));
}

TEST_CASE("growth classification") {
  CHECK(classify_growth(single(0, 3)).kind == GrowthClass::Kind::EventuallyZero);
  auto g2 = classify_growth(single(2, 3));
  CHECK(g2.kind == GrowthClass::Kind::Exponential);
  CHECK(g2.witness_beta == doctest::Approx(1.0));
  CHECK(g2.describe() == "Exponential beta=1");
  auto g3 = classify_growth(single(3, 3));
  CHECK(g3.witness_beta == doctest::Approx(2.0));
  CHECK(classify_growth(single(1, 3)).kind == GrowthClass::Kind::Constant);
  auto m3 = classify_growth(mk(3));
  CHECK(m3.kind == GrowthClass::Kind::Polynomial);
  CHECK(m3.degree == 2);
  CHECK(m3.cumulative_degree == 3);
  // max entry of M3^d is C(d,2)
  for (int d = 2; d <= 30; ++d) {
    auto m = mpow(mk(3), d);
    CHECK(m[0][2] == static_cast<long long>(d) * (d - 1) / 2);
  }
  // two 2-cycles sharing a vertex: b lies on two cycles of length 2
  PropagationSpec s{{"a", "b", "c"}, "a", "w", {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, 2};
  auto gs = classify_growth(s);
  CHECK(gs.kind == GrowthClass::Kind::Exponential);
  CHECK(gs.witness == 1);
  CHECK(gs.cycles == 2);
  CHECK(gs.period == 2);
  CHECK(gs.witness_beta == doctest::Approx(std::sqrt(2.0) - 1));
  // unreachable cycles do not count
  PropagationSpec u{{"a", "b"}, "a", "w", {{0, 0}, {0, 2}}, 2};
  CHECK(classify_growth(u).kind == GrowthClass::Kind::EventuallyZero);
}

TEST_CASE("worst-case instance shape") {
  auto inst = worst_case_instance(single(2, 3), 4);
  CHECK(inst.tree.n() == 121);
  CHECK(inst.lambda.holes() == std::vector<Vertex>{0});
  CHECK(worst_case_instance(single(2, 3), 0).tree.n() == 1);
  auto r3 = worst_case_instance(single(3, 3), 3);
  CHECK(verify_partial(build_problem(single(3, 3), true), r3.tree.graph(), r3.lambda).accepted);
}

TEST_CASE("tree DP on worst cases") {
  CHECK(exact_min_volume_tree_dp(single(2, 3), worst_case_instance(single(2, 3), 4).tree,
                                 worst_case_instance(single(2, 3), 4).lambda, 0).volume == 31);
  for (int i = 1; i <= 3; ++i) {
    for (int h = 0; h <= 5; ++h) {
      auto inst = worst_case_instance(single(i, 3), h);
      auto r = exact_min_volume_tree_dp(single(i, 3), inst.tree, inst.lambda, inst.hole);
      auto b = volume_bounds(single(i, 3), h);
      CHECK(BigInt(r.volume) == b.lower);
      auto p = build_problem(single(i, 3), true);
      CHECK(is_mend(p, inst.tree.graph(), inst.lambda, r.witness, inst.hole).is_mend());
    }
  }
  auto r3 = worst_case_instance(single(3, 3), 2);
  CHECK(exact_min_volume_tree_dp(single(3, 3), r3.tree, r3.lambda, 0).volume == 13);
  auto r1 = worst_case_instance(single(1, 3), 4);
  CHECK(exact_min_volume_tree_dp(single(1, 3), r1.tree, r1.lambda, 0).volume == 5);
}

TEST_CASE("tree DP matches exhaustive search on random small instances") {
  std::mt19937 rng(21);
  std::vector<PropagationSpec> specs{single(2, 3), single(1, 2), mk(2),
                                     PropagationSpec{{"a", "b"}, "a", "w", {{0, 2}, {1, 0}}, 3}};
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto& spec = specs[trial % specs.size()];
    int n = 4 + static_cast<int>(rng() % 5);
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
    Vertex v = holes[rng() % holes.size()];
    long long want = brute_min_mend(p, t.graph(), lam, v);
    auto got = propagation_min_mend(spec, true, t, lam, v);
    if (want < 0) {
      CHECK_FALSE(got.has_value());
      continue;
    }
    REQUIRE(got.has_value());
    CHECK(got->volume == want);
    CHECK(is_mend(p, t.graph(), lam, got->witness, v).is_mend());
    ++checked;
  }
  CHECK(checked > 60);
}

TEST_CASE("region-restricted DP") {
  auto inst = worst_case_instance(single(2, 3), 4);
  std::vector<Vertex> root_only{0};
  CHECK_FALSE(propagation_min_mend(single(2, 3), true, inst.tree, inst.lambda, 0, root_only).has_value());
  auto full = exact_min_volume_tree_dp(single(2, 3), inst.tree, inst.lambda, 0);
  auto w = hamming_diff(inst.lambda, full.witness);
  auto r = propagation_min_mend(single(2, 3), true, inst.tree, inst.lambda, 0, w);
  REQUIRE(r.has_value());
  CHECK(r->volume == 31);
  std::vector<Vertex> all(inst.tree.n());
  for (Vertex x = 0; x < static_cast<Vertex>(all.size()); ++x) all[x] = x;
  CHECK(propagation_min_mend(single(2, 3), true, inst.tree, inst.lambda, 0, all).has_value());
}
