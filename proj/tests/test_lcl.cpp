#include "doctest.h"
#include "mendlab/lcl.hpp"
#include "mendlab/propagation.hpp"

#include <random>

using namespace mendlab;

namespace {

PropagationSpec r_spec(int i) {
  return PropagationSpec{{"red"}, "red", "white", {{i}}, 3};
}

// Root red, each red internal vertex colors its first two children red.
PartialLabeling fig1_middle(const RootedTree& t) {
  PartialLabeling lam(r_spec(2).alphabet(), t.n(), 1);
  lam[t.root()] = 0;
  for (Vertex x : t.order()) {
    if (lam[x] != 0) continue;
    auto kids = t.children(x);
    for (std::size_t i = 0; i < kids.size() && i < 2; ++i) lam[kids[i]] = 0;
  }
  return lam;
}

}  // namespace

TEST_CASE("verify_full on the R2 figure coloring") {
  auto t = build_balanced_tree(3, 4);
  auto p = build_problem(r_spec(2), true);
  auto lam = fig1_middle(t);
  CHECK(verify_full(p, t.graph(), lam).accepted);
  PartialLabeling white(lam.alphabet, t.n(), 1);
  auto res = verify_full(p, t.graph(), white);
  CHECK_FALSE(res.accepted);
  CHECK(res.witness == t.root());
  PartialLabeling with_hole = lam;
  with_hole[5] = kBottom;
  CHECK_THROWS_AS(verify_full(p, t.graph(), with_hole), PreconditionError);
}

TEST_CASE("constant verifier accepts everything") {
  LclProblem p("always", Alphabet({"a", "b"}), 1, [](const LocalView&) { return true; });
  auto t = build_balanced_tree(2, 3);
  PartialLabeling lam(p.alphabet(), t.n(), 1);
  CHECK(verify_full(p, t.graph(), lam).accepted);
}

TEST_CASE("verify_partial relaxes near holes") {
  auto t = build_balanced_tree(3, 4);
  auto p = build_problem(r_spec(2), true);
  PartialLabeling empty(p.alphabet(), t.n());
  CHECK(verify_partial(p, t.graph(), empty).accepted);
  auto inst = worst_case_instance(r_spec(2), 4);
  CHECK(verify_partial(p, inst.tree.graph(), inst.lambda).accepted);
  PartialLabeling bad(p.alphabet(), t.n(), 1);
  bad[t.root()] = 0;
  auto res = verify_partial(p, t.graph(), bad);
  CHECK_FALSE(res.accepted);
  CHECK(res.witness == t.root());
}

TEST_CASE("relaxed verifier properties on random labelings") {
  std::mt19937 rng(11);
  auto t = build_balanced_tree(3, 3);
  auto p = build_problem(r_spec(2), true);
  for (int trial = 0; trial < 200; ++trial) {
    PartialLabeling lam(p.alphabet(), t.n());
    for (Vertex v = 0; v < static_cast<Vertex>(t.n()); ++v) lam[v] = static_cast<Label>(rng() % 2);
    // hole-free equivalence
    CHECK(verify_partial(p, t.graph(), lam).accepted == verify_full(p, t.graph(), lam).accepted);
    // sub-solution closure: punch holes until the labeling is a partial solution
    for (;;) {
      auto r = verify_partial(p, t.graph(), lam);
      if (r.accepted) break;
      lam[r.witness] = kBottom;
    }
    std::vector<Vertex> s;
    for (Vertex v = 0; v < static_cast<Vertex>(t.n()); ++v) {
      if (rng() % 2) s.push_back(v);
    }
    CHECK(verify_partial(p, t.graph(), restrict_labeling(lam, s)).accepted);
  }
}

TEST_CASE("verdicts are invariant under renaming vertices outside the view") {
  std::mt19937 rng(5);
  auto t = build_balanced_tree(3, 3);
  auto p = build_problem(r_spec(2), true);
  std::size_t n = t.n();
  for (int trial = 0; trial < 50; ++trial) {
    PartialLabeling lam(p.alphabet(), n);
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) lam[v] = static_cast<Label>(rng() % 3) - 1;
    Vertex c = static_cast<Vertex>(rng() % n);
    auto inside = neighborhood(t.graph(), c, p.radius());
    std::vector<Vertex> outside;
    std::vector<char> in(n, 0);
    for (Vertex x : inside) in[x] = 1;
    for (Vertex x = 0; x < static_cast<Vertex>(n); ++x) {
      if (!in[x]) outside.push_back(x);
    }
    auto shuffled = outside;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<Vertex> perm(n);
    for (Vertex x = 0; x < static_cast<Vertex>(n); ++x) perm[x] = x;
    for (std::size_t i = 0; i < outside.size(); ++i) perm[outside[i]] = shuffled[i];
    Graph g2 = permute(t.graph(), perm);
    PartialLabeling lam2 = lam;
    for (Vertex x = 0; x < static_cast<Vertex>(n); ++x) lam2[perm[x]] = lam[x];
    CHECK(happy_at(p, t.graph(), lam, c) == happy_at(p, g2, lam2, perm[c]));
  }
}

TEST_CASE("is_mend on the R2 worst case") {
  auto inst = worst_case_instance(r_spec(2), 4);
  auto p = build_problem(r_spec(2), true);
  auto mend = fig1_middle(inst.tree);
  auto chk = is_mend(p, inst.tree.graph(), inst.lambda, mend, inst.hole);
  CHECK(chk.valid);
  CHECK(chk.progress);
  CHECK(hamming_diff(inst.lambda, mend).size() == 31);
  auto same = is_mend(p, inst.tree.graph(), inst.lambda, inst.lambda, inst.hole);
  CHECK_FALSE(same.progress);
  CHECK_THROWS_AS(is_mend(p, inst.tree.graph(), mend, mend, inst.hole), PreconditionError);
}

TEST_CASE("single-label patch is a mend") {
  auto t = build_balanced_tree(3, 2);
  auto p = build_problem(r_spec(1), true);
  PartialLabeling lam(p.alphabet(), t.n(), 1);
  lam[t.root()] = 0;
  lam[1] = 0;
  lam[4] = 0;  // first child of vertex 1
  CHECK(verify_full(p, t.graph(), lam).accepted);
  PartialLabeling holed = lam;
  holed[7] = kBottom;
  auto chk = is_mend(p, t.graph(), holed, lam, 7);
  CHECK(chk.is_mend());
}

TEST_CASE("verdict cache agrees with direct evaluation") {
  std::mt19937 rng(9);
  auto t = build_balanced_tree(3, 3);
  auto p = build_problem(PropagationSpec{{"a", "b"}, "a", "w", {{1, 1}, {0, 2}}, 3}, true);
  VerdictCache cache(p);
  for (int trial = 0; trial < 300; ++trial) {
    PartialLabeling lam(p.alphabet(), t.n());
    for (Vertex v = 0; v < static_cast<Vertex>(t.n()); ++v) lam[v] = static_cast<Label>(rng() % 4) - 1;
    Vertex c = static_cast<Vertex>(rng() % t.n());
    LocalView view(t.graph(), lam, c, 1);
    CHECK(cache.happy(view) == p.happy(view));
  }
}
