#include "mendlab/families.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace mendlab {

PropagationSpec r_i_problem(int i) {
  if (i < 1 || i > 3) throw ArgumentError("R_i needs i in {1, 2, 3}");
  PropagationSpec s;
  s.labels = {"red"};
  s.wildcard = "white";
  s.mu = {{i}};
  s.delta = 3;
  s.l0 = "red";
  return s;
}

PropagationSpec polynomial_spec(int p, int q) {
  if (p < 1 || q <= p) throw ArgumentError("polynomial spec needs q > p >= 1");
  if (q > 20) throw ArgumentError("polynomial spec: 2^q would exceed the supported degree");
  PropagationSpec s;
  s.labels = {"a"};
  s.wildcard = "w";
  s.mu = {{1 << p}};
  s.delta = 1 << q;
  s.l0 = "a";
  return s;
}

PropagationSpec polylog_spec(int k) {
  if (k < 1) throw ArgumentError("polylog spec needs k >= 1");
  PropagationSpec s;
  for (int i = 1; i <= k; ++i) s.labels.push_back("l" + std::to_string(i));
  s.wildcard = "w";
  s.mu.assign(k, std::vector<int>(k, 0));
  for (int i = 0; i < k; ++i) {
    s.mu[i][i] = 1;
    if (i + 1 < k) s.mu[i][i + 1] = 1;
  }
  s.delta = 2;
  s.l0 = "l1";
  return s;
}

LclProblem always_happy_problem() {
  LclProblem p("always-happy", Alphabet({"x"}), 0, [](const LocalView&) { return true; });
  p.port_invariant = true;
  return p;
}

Alphabet port_alphabet(int max_degree) {
  if (max_degree < 0 || max_degree > 12) throw ArgumentError("port alphabet supports degree 0..12");
  std::vector<std::string> names;
  for (int d = 0; d <= max_degree; ++d) {
    for (int mask = 0; mask < (1 << d); ++mask) {
      std::string s(d, 'i');
      for (int b = 0; b < d; ++b) {
        if (mask >> b & 1) s[b] = 'o';
      }
      names.push_back(s.empty() ? std::string("-") : s);
    }
  }
  return Alphabet(std::move(names));
}

namespace {

struct PortTable {
  std::vector<int> len;
  std::vector<std::uint32_t> out;  // bit b set: port b points away

  explicit PortTable(const Alphabet& a) {
    for (const std::string& s : a.labels()) {
      if (s == "-") {
        len.push_back(0);
        out.push_back(0);
        continue;
      }
      std::uint32_t m = 0;
      for (std::size_t b = 0; b < s.size(); ++b) {
        if (s[b] == 'o') m |= 1u << b;
      }
      len.push_back(static_cast<int>(s.size()));
      out.push_back(m);
    }
  }
};

// Checks the length rule and port agreement with every neighbor; returns the out-degree or -1.
int consistent_out_degree(const PortTable& t, const LocalView& view) {
  Label l = view.label(0);
  if (t.len[l] != view.degree(0)) return -1;
  for (const ViewArc& a : view.arcs(0)) {
    Label nl = view.label(a.to);
    if (t.len[nl] != view.degree(a.to)) return -1;
    int back = -1;
    for (const ViewArc& b : view.arcs(a.to)) {
      if (b.to == 0) back = b.port;
    }
    bool mine = t.out[l] >> a.port & 1;
    bool theirs = t.out[nl] >> back & 1;
    if (mine == theirs) return -1;
  }
  return __builtin_popcount(t.out[l]);
}

LclProblem orientation_problem(const std::string& name, int max_degree,
                               std::function<bool(int degree, int out)> rule) {
  Alphabet a = port_alphabet(max_degree);
  auto table = std::make_shared<PortTable>(a);
  auto verifier = [table, rule](const LocalView& view) {
    int out = consistent_out_degree(*table, view);
    return out >= 0 && rule(view.degree(0), out);
  };
  LclProblem p(name, a, 1, verifier);
  p.admissible = [table](int degree, Label l) { return table->len[l] == degree; };
  p.scope = LabelScope::Neighbors;
  return p;
}

}  // namespace

int out_degree(const Alphabet& a, Label l) {
  const std::string& s = a.name(l);
  return static_cast<int>(std::count(s.begin(), s.end(), 'o'));
}

LclProblem degree_two_sink_problem(int max_degree) {
  return orientation_problem("degree-two-sink", max_degree,
                             [](int degree, int out) { return out > 0 || degree == 2; });
}

LclProblem sinkless_orientation_problem(int max_degree) {
  return orientation_problem("sinkless-orientation", max_degree,
                             [](int degree, int out) { return out > 0 || degree <= 1; });
}

PartialLabeling orient_toward(const Graph& g, Vertex target, const Alphabet& a) {
  PartialLabeling lam(a, g.n());
  std::vector<Vertex> up(g.n(), kNoVertex);
  std::vector<char> seen(g.n(), 0);
  std::queue<Vertex> q;
  q.push(target);
  seen[target] = 1;
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop();
    for (const Incidence& inc : g.incident(x)) {
      if (!seen[inc.to]) {
        seen[inc.to] = 1;
        up[inc.to] = x;
        q.push(inc.to);
      }
    }
  }
  for (std::size_t x = 0; x < g.n(); ++x) {
    if (static_cast<Vertex>(x) == target || !seen[x]) continue;
    std::string s;
    for (const Incidence& inc : g.incident(static_cast<Vertex>(x))) s += inc.to == up[x] ? 'o' : 'i';
    lam[static_cast<Vertex>(x)] = a.index_of(s.empty() ? "-" : s);
  }
  return lam;
}

OrientationInstance degree_two_sink_instance(int height, std::uint64_t seed) {
  if (height < 2) throw ArgumentError("degree-two sink instance needs height >= 2");
  std::size_t n = 1 + 3 * ((std::size_t{1} << height) - 1) + 1;
  check_size(n, "degree-two sink instance");
  std::vector<Edge> edges;
  std::vector<Vertex> layer{0};
  Vertex next = 1;
  for (int d = 1; d <= height; ++d) {
    std::vector<Vertex> nl;
    for (Vertex x : layer) {
      int kids = d == 1 ? 3 : 2;
      for (int c = 0; c < kids; ++c) {
        edges.push_back({x, next});
        nl.push_back(next++);
      }
    }
    layer = std::move(nl);
  }
  Rng rng(seed);
  std::size_t pick = edges.size() - layer.size() + rng.below(layer.size());
  Vertex s = next++;
  Edge old = edges[pick];
  edges[pick] = {old.u, s};
  edges.push_back({s, old.v});
  OrientationInstance inst;
  inst.graph = Graph(n, std::move(edges), {}, 3);
  inst.problem = degree_two_sink_problem(3);
  inst.hole = 0;
  inst.hidden = s;
  inst.lambda = orient_toward(inst.graph, 0, inst.problem.alphabet());
  return inst;
}

OrientationInstance sinkless_instance(int height, Vertex hole) {
  RootedTree t = build_balanced_tree(2, height);
  if (hole < 0 || static_cast<std::size_t>(hole) >= t.n()) throw ArgumentError("hole out of range");
  std::vector<Edge> edges = t.graph().edges();
  for (Edge& e : edges) e.orient = Orientation::None;
  OrientationInstance inst;
  inst.graph = Graph(t.n(), std::move(edges), {}, 3);
  inst.problem = sinkless_orientation_problem(3);
  inst.hole = hole;
  inst.lambda = orient_toward(inst.graph, hole, inst.problem.alphabet());
  return inst;
}

RootedTree random_unbalanced_tree(int delta, int height, double p_full, Rng& rng) {
  if (delta < 1 || height < 0) throw ArgumentError("random tree needs delta >= 1 and height >= 0");
  std::vector<Edge> edges;
  std::vector<Vertex> parent{kNoVertex};
  std::vector<Vertex> layer{0};
  for (int d = 1; d <= height && !layer.empty(); ++d) {
    std::vector<Vertex> nl;
    for (Vertex x : layer) {
      int kids = delta;
      if (x != 0 && rng.uniform() >= p_full) kids = static_cast<int>(rng.below(delta));
      for (int c = 0; c < kids; ++c) {
        Vertex y = static_cast<Vertex>(parent.size());
        parent.push_back(x);
        edges.push_back({x, y, Orientation::Forward});
        nl.push_back(y);
      }
    }
    check_size(parent.size(), "random tree");
    layer = std::move(nl);
  }
  std::size_t n = parent.size();
  return RootedTree(Graph(n, std::move(edges), std::move(parent)), 0);
}

RootedTree adversarial_tree(int height) {
  if (height < 0) throw ArgumentError("adversarial tree needs height >= 0");
  check_size(3 * (std::size_t{1} << height), "adversarial tree");
  std::vector<Edge> edges;
  std::vector<Vertex> parent;
  std::function<Vertex(int, Vertex)> grow = [&](int h, Vertex up) {
    Vertex x = static_cast<Vertex>(parent.size());
    parent.push_back(up);
    if (up != kNoVertex) edges.push_back({up, x, Orientation::Forward});
    if (h > 0) {
      grow(h - 1, x);
      grow(h - 1, x);
      grow(0, x);
    }
    return x;
  };
  grow(height, kNoVertex);
  std::size_t n = parent.size();
  return RootedTree(Graph(n, std::move(edges), std::move(parent)), 0);
}

PartialLabeling wildcard_labeling(const PropagationSpec& spec, const RootedTree& t) {
  PartialLabeling lam(spec.alphabet(), t.n(), spec.wildcard_index());
  lam[t.root()] = kBottom;
  return lam;
}

}  // namespace mendlab
