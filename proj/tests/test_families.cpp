#include "doctest.h"
#include "mendlab/engines.hpp"
#include "mendlab/families.hpp"

#include <cmath>

using namespace mendlab;

namespace {

// Sum over d <= h of the l0 row of mu^d, by plain repeated multiplication.
long long cumulative_row(const PropagationSpec& s, int h) {
  int k = s.k();
  std::vector<long long> row(k, 0);
  row[0] = 1;
  long long total = 0;
  for (int d = 0; d <= h; ++d) {
    for (long long x : row) total += x;
    std::vector<long long> nx(k, 0);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) nx[j] += row[i] * s.mu[i][j];
    }
    row = nx;
  }
  return total;
}

std::vector<Vertex> path_up(const Graph& g, Vertex from, Vertex root) {
  std::vector<Vertex> up(g.n(), kNoVertex);
  std::vector<Vertex> q{root};
  std::vector<char> seen(g.n(), 0);
  seen[root] = 1;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (const Incidence& inc : g.incident(q[i])) {
      if (!seen[inc.to]) {
        seen[inc.to] = 1;
        up[inc.to] = q[i];
        q.push_back(inc.to);
      }
    }
  }
  std::vector<Vertex> path;
  for (Vertex x = from; x != kNoVertex; x = up[x]) path.push_back(x);
  return path;
}

// Reverses every edge on the given path in the port labels of lam.
PartialLabeling flip_path(const Graph& g, PartialLabeling lam, const std::vector<Vertex>& path,
                          Label root_label) {
  const Alphabet& a = lam.alphabet;
  lam[path.back()] = root_label;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    for (Vertex x : {path[i], path[i + 1]}) {
      Vertex y = x == path[i] ? path[i + 1] : path[i];
      std::string s = a.name(lam[x]);
      int port = g.port(x, y);
      s[port] = s[port] == 'o' ? 'i' : 'o';
      lam[x] = a.index_of(s);
    }
  }
  return lam;
}

}  // namespace

TEST_CASE("R_i growth classes") {
  CHECK(classify_growth(r_i_problem(1)).kind == GrowthClass::Kind::Constant);
  auto g2 = classify_growth(r_i_problem(2));
  CHECK(g2.kind == GrowthClass::Kind::Exponential);
  CHECK(g2.witness_beta == doctest::Approx(1.0));
  auto g3 = classify_growth(r_i_problem(3));
  CHECK(g3.kind == GrowthClass::Kind::Exponential);
  CHECK(g3.witness_beta == doctest::Approx(2.0));
  CHECK_THROWS_AS(r_i_problem(0), ArgumentError);
  CHECK_THROWS_AS(r_i_problem(4), ArgumentError);
}

TEST_CASE("R_i worst case volumes match the row sums") {
  for (int i = 1; i <= 3; ++i) {
    auto spec = r_i_problem(i);
    for (int h = 0; h <= 5; ++h) {
      auto inst = worst_case_instance(spec, h);
      auto r = exact_min_volume_tree_dp(spec, inst.tree, inst.lambda, inst.hole);
      CHECK(r.volume == cumulative_row(spec, h));
    }
  }
}

TEST_CASE("polynomial spec") {
  auto s = polynomial_spec(1, 2);
  CHECK(s.delta == 4);
  CHECK(s.mu[0][0] == 2);
  CHECK(std::log(static_cast<double>(s.mu[0][0])) / std::log(s.delta) == doctest::Approx(0.5));
  auto t = polynomial_spec(2, 3);
  CHECK(std::log(static_cast<double>(t.mu[0][0])) / std::log(t.delta) == doctest::Approx(2.0 / 3));
  CHECK_THROWS_AS(polynomial_spec(2, 2), ArgumentError);
  CHECK_THROWS_AS(polynomial_spec(0, 2), ArgumentError);
  CHECK_THROWS_AS(polynomial_spec(1, 40), ArgumentError);
  auto inst = worst_case_instance(s, 3);
  CHECK(exact_min_volume_tree_dp(s, inst.tree, inst.lambda, inst.hole).volume == cumulative_row(s, 3));
}

TEST_CASE("polylog spec") {
  auto one = polylog_spec(1);
  CHECK(classify_growth(one).kind == GrowthClass::Kind::Constant);
  auto two = polylog_spec(2);
  for (int h = 0; h <= 6; ++h) {
    auto inst = worst_case_instance(two, h);
    auto r = exact_min_volume_tree_dp(two, inst.tree, inst.lambda, inst.hole);
    CHECK(r.volume == cumulative_row(two, h));
    CHECK(r.volume == (h + 1) * (h + 2) / 2);
  }
  auto three = classify_growth(polylog_spec(3));
  CHECK(three.kind == GrowthClass::Kind::Polynomial);
  CHECK(three.degree == 2);
}

TEST_CASE("always happy") {
  auto p = always_happy_problem();
  RootedTree t = build_balanced_tree(2, 3);
  PartialLabeling lam(p.alphabet(), t.n(), 0);
  lam[0] = kBottom;
  auto r = oracle_min_mend(p, t.graph(), lam, 0);
  CHECK(r.volume == 1);
}

TEST_CASE("port alphabet") {
  Alphabet a = port_alphabet(3);
  CHECK(a.size() == 1 + 2 + 4 + 8);
  CHECK(a.contains("-"));
  CHECK(a.contains("ioi"));
  CHECK(out_degree(a, a.index_of("oio")) == 2);
}

TEST_CASE("orientation labelings agree on every edge") {
  auto inst = sinkless_instance(3, 4);
  const Graph& g = inst.graph;
  for (const Edge& e : g.edges()) {
    char a = inst.lambda.is_hole(e.u) ? '?' : inst.lambda.alphabet.name(inst.lambda[e.u])[g.port(e.u, e.v)];
    char b = inst.lambda.is_hole(e.v) ? '?' : inst.lambda.alphabet.name(inst.lambda[e.v])[g.port(e.v, e.u)];
    CHECK(a != b);
  }
  CHECK(verify_partial(inst.problem, g, inst.lambda).accepted);
}

TEST_CASE("degree two sink instances") {
  for (int h = 2; h <= 6; ++h) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      auto inst = degree_two_sink_instance(h, seed);
      const Graph& g = inst.graph;
      CHECK(g.n() == 3 * ((std::size_t{1} << h) - 1) + 2);
      CHECK(g.is_tree());
      int twos = 0;
      for (Vertex x = 0; x < static_cast<Vertex>(g.n()); ++x) twos += g.degree(x) == 2;
      CHECK(twos == 1);
      CHECK(g.degree(inst.hidden) == 2);
      CHECK(verify_partial(inst.problem, g, inst.lambda).accepted);
      auto path = path_up(g, inst.hidden, inst.hole);
      CHECK(path.size() == static_cast<std::size_t>(h + 1));
      Label root_label = inst.lambda.alphabet.index_of("iii");
      auto fixed = flip_path(g, inst.lambda, path, root_label);
      // the root must send an edge out and the chain of flipped edges can only stop at the
      // degree-two vertex, so the path is optimal
      CHECK(is_mend(inst.problem, g, inst.lambda, fixed, inst.hole).is_mend());
      if (h <= 4) {
        MendOracle o(inst.problem, g, inst.lambda, inst.hole);
        CHECK(o.engine() == "tree-scope-dp");
        auto m = o.min_mend();
        CHECK(m.value == h + 1);
        CHECK(is_mend(inst.problem, g, inst.lambda, m.witness, inst.hole).is_mend());
      }
    }
  }
}

TEST_CASE("degree two sink: hole next to the hidden vertex") {
  auto inst = degree_two_sink_instance(3, 7);
  PartialLabeling lam = orient_toward(inst.graph, inst.hidden, inst.problem.alphabet());
  Vertex nb = inst.graph.incident(inst.hidden)[0].to;
  lam[nb] = kBottom;
  lam[inst.hidden] = inst.lambda.alphabet.index_of("ii");
  REQUIRE(verify_partial(inst.problem, inst.graph, lam).accepted);
  auto r = oracle_min_mend(inst.problem, inst.graph, lam, nb);
  REQUIRE(r.status == OracleStatus::Exact);
  CHECK(r.volume <= 2);
}

TEST_CASE("sinkless orientation") {
  for (int h = 1; h <= 6; ++h) {
    auto inst = sinkless_instance(h, 0);
    auto r = MendOracle(inst.problem, inst.graph, inst.lambda, inst.hole).min_mend();
    CHECK(r.value == h + 1);
  }
  auto leaf = sinkless_instance(3, 14);
  CHECK(leaf.graph.degree(14) == 1);
  CHECK(MendOracle(leaf.problem, leaf.graph, leaf.lambda, 14).min_mend().value == 1);
}

TEST_CASE("adversarial tree") {
  for (int h = 0; h <= 6; ++h) {
    RootedTree t = adversarial_tree(h);
    CHECK(t.n() == 3 * (std::size_t{1} << h) - 2);
    CHECK(t.height() == h);
    if (h > 0) CHECK(t.child_count(t.root()) == 3);
  }
}

TEST_CASE("random unbalanced trees") {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    RootedTree t = random_unbalanced_tree(3, 5, 0.6, rng);
    CHECK(t.height() <= 5);
    for (Vertex x = 0; x < static_cast<Vertex>(t.n()); ++x) CHECK(t.child_count(x) <= 3);
    CHECK(t.child_count(0) == 3);
  }
  Rng a(9), b(9);
  CHECK(random_unbalanced_tree(3, 4, 0.5, a).n() == random_unbalanced_tree(3, 4, 0.5, b).n());
}
