#include "mendlab/layered.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "mendlab/encoding.hpp"

namespace mendlab {

LayeredTree layered_tree(int h, int j0) {
  if (h < 0 || h > 24) throw ArgumentError("layered tree height must be in 0..24");
  if (j0 < 0 || j0 >= (1 << h)) throw ArgumentError("sink position out of range");
  std::size_t n = (std::size_t{1} << (h + 1)) - 1;
  check_size(n, "layered tree");
  LayeredTree t;
  t.h = h;
  t.j0 = j0;
  std::vector<Edge> edges;
  std::vector<Vertex> parent(n, kNoVertex);
  t.coord.resize(n);
  for (int i = 0; i <= h; ++i) {
    int width = 1 << i;
    for (int j = 0; j < width; ++j) {
      Vertex x = LayeredTree::id(i, j);
      t.coord[x] = {i, j};
      if (i > 0) {
        parent[x] = LayeredTree::id(i - 1, j / 2);
        edges.push_back({parent[x], x, Orientation::Forward});
      }
      if (j + 1 < width) {
        Orientation o = Orientation::None;
        if (i == h) o = j < j0 ? Orientation::Forward : Orientation::Backward;
        edges.push_back({x, LayeredTree::id(i, j + 1), o});
      }
    }
  }
  t.graph = Graph(n, std::move(edges), std::move(parent));
  return t;
}

namespace {

struct Local {
  const LocalView& view;

  bool is_child(int of, int x) const { return view.parent(x) == of; }
  bool is_parent(int of, int x) const { return view.parent(of) == x; }
  std::vector<int> children(int i) const {
    std::vector<int> out;
    for (const ViewArc& a : view.arcs(i)) {
      if (is_child(i, a.to)) out.push_back(a.to);
    }
    return out;
  }
  std::vector<ViewArc> sibling_arcs(int i) const {
    std::vector<ViewArc> out;
    for (const ViewArc& a : view.arcs(i)) {
      if (!is_child(i, a.to) && !is_parent(i, a.to)) out.push_back(a);
    }
    return out;
  }
  const ViewArc* arc(int from, int to) const {
    for (const ViewArc& a : view.arcs(from)) {
      if (a.to == to) return &a;
    }
    return nullptr;
  }
  bool siblings(int a, int b) const {
    const ViewArc* e = arc(a, b);
    return e && !is_child(a, b) && !is_parent(a, b);
  }
};

}  // namespace

std::vector<std::string> structural_violations(const LocalView& view) {
  if (view.radius() < 2) throw PreconditionError("structural constraints need a view of radius 2");
  Local L{view};
  std::vector<std::string> out;
  int par = view.parent(0);
  bool has_parent = par != LocalView::kNoParent;
  bool parent_local = par >= 0;
  std::vector<int> kids = L.children(0);
  std::vector<ViewArc> sibs = L.sibling_arcs(0);

  const ViewArc* up = parent_local ? L.arc(0, par) : nullptr;
  if (has_parent && (!up || up->dir != -1)) out.push_back("1a");

  bool ok1b = kids.empty() || kids.size() == 2;
  for (int c : kids) {
    if (L.arc(0, c)->dir != 1) ok1b = false;
  }
  if (!ok1b) out.push_back("1b");

  if (sibs.empty() != !has_parent) out.push_back("2a");
  if (sibs.size() == 1) {
    bool ok = parent_local && up && L.sibling_arcs(par).size() <= 1;
    if (!ok) out.push_back("2a'");
  }
  if (sibs.size() > 2) out.push_back("2a''");

  if (!kids.empty()) {
    bool ok = true;
    for (std::size_t a = 0; a < kids.size(); ++a) {
      for (std::size_t b = a + 1; b < kids.size(); ++b) {
        if (!L.siblings(kids[a], kids[b])) ok = false;
      }
    }
    if (!ok) out.push_back("2b");
  }

  if (kids.size() == 2) {
    bool ok = true;
    for (const ViewArc& s : sibs) {
      std::vector<int> theirs = L.children(s.to);
      if (theirs.size() != 2) {
        ok = false;
        continue;
      }
      int links = 0;
      for (int a : kids) {
        for (int b : theirs) links += L.arc(a, b) ? 1 : 0;
      }
      if (links != 1) ok = false;
    }
    if (!ok) out.push_back("2c");
  }

  {
    bool ok = true;
    for (const ViewArc& s : sibs) {
      int other = view.parent(s.to);
      if (other == par && par != LocalView::kParentOutside) continue;
      if (parent_local && other >= 0 && L.siblings(par, other)) continue;
      ok = false;
    }
    if (!ok) out.push_back("2c'");
  }

  {
    bool ok = true;
    for (const ViewArc& s : sibs) {
      if ((s.dir != 0) != kids.empty()) ok = false;
    }
    if (!ok) out.push_back("3a");
  }
  if (sibs.size() == 2 && sibs[0].dir == 1 && sibs[1].dir == 1) out.push_back("3b");
  return out;
}

StructuralReport broken_vertices(const Graph& g) {
  StructuralReport r;
  PartialLabeling none(Alphabet({"x"}), g.n(), 0);
  for (std::size_t x = 0; x < g.n(); ++x) {
    LocalView view(g, none, static_cast<Vertex>(x), 2);
    auto tags = structural_violations(view);
    if (tags.empty()) continue;
    r.broken.push_back(static_cast<Vertex>(x));
    for (auto& t : tags) r.violations.emplace_back(static_cast<Vertex>(x), std::move(t));
  }
  return r;
}

Alphabet red_black() { return Alphabet({"red", "black"}); }

PathToSinkMode path_to_sink_mode(const std::string& name) {
  if (name == "promise") return PathToSinkMode::Promise;
  if (name == "oriented_general" || name == "oriented-general") return PathToSinkMode::OrientedGeneral;
  if (name == "unoriented_general" || name == "unoriented-general") return PathToSinkMode::UnorientedGeneral;
  throw ArgumentError("unknown path-to-sink mode '" + name + "'");
}

namespace {

bool view_is_sink(const LocalView& view, int i) {
  Local L{view};
  if (!L.children(i).empty()) return false;
  for (const ViewArc& a : L.sibling_arcs(i)) {
    if (a.dir == 1) return false;
  }
  return true;
}

bool labeling_rules(const LocalView& view) {
  Label l = view.label(0);
  if (view.parent(0) == LocalView::kNoParent && l != kRed) return false;
  if (l != kRed) return true;
  if (view_is_sink(view, 0)) return true;
  for (const ViewArc& a : view.arcs(0)) {
    if (view.parent(a.to) == 0 && view.label(a.to) == kRed) return true;
  }
  return false;
}

bool oriented_general_rules(const LocalView& view) {
  return !structural_violations(view).empty() || labeling_rules(view);
}

}  // namespace

LclProblem path_to_sink_problem(PathToSinkMode mode, int delta) {
  LclProblem p;
  switch (mode) {
    case PathToSinkMode::Promise:
      p = LclProblem("path-to-sink", red_black(), 1, labeling_rules);
      break;
    case PathToSinkMode::OrientedGeneral:
      p = LclProblem("path-to-sink-oriented", red_black(), 2, oriented_general_rules);
      break;
    case PathToSinkMode::UnorientedGeneral:
      p = LclProblem("path-to-sink-unoriented", red_black(), 8, [delta](const LocalView& view) {
        return decoded_verdict(view, delta, oriented_general_rules);
      });
      break;
  }
  p.scope = LabelScope::TreeFamily;
  return p;
}

namespace {

std::vector<Vertex> children_of(const Graph& g, Vertex x) {
  std::vector<Vertex> out;
  for (const Incidence& inc : g.incident(x)) {
    if (g.parent(inc.to) == x) out.push_back(inc.to);
  }
  return out;
}

// Shortest downward path from x (excluded) to the nearest vertex accepted by `stop`.
std::vector<Vertex> path_down(const Graph& g, Vertex x, const std::vector<char>& target) {
  std::vector<Vertex> q{x};
  std::vector<Vertex> from(g.n(), kNoVertex);
  for (std::size_t i = 0; i < q.size(); ++i) {
    Vertex y = q[i];
    if (y != x && target[y]) {
      std::vector<Vertex> path;
      for (Vertex z = y; z != x; z = from[z]) path.push_back(z);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (Vertex c : children_of(g, y)) {
      if (from[c] == kNoVertex && c != x) {
        from[c] = y;
        q.push_back(c);
      }
    }
  }
  return {};
}

std::vector<char> targets(const Graph& g, bool generalized) {
  std::vector<char> t(g.n(), 0);
  for (std::size_t x = 0; x < g.n(); ++x) t[x] = is_sink(g, static_cast<Vertex>(x));
  if (generalized) {
    for (Vertex b : broken_vertices(g).broken) t[b] = 1;
  }
  return t;
}

}  // namespace

bool is_sink(const Graph& g, Vertex x) {
  for (const Incidence& inc : g.incident(x)) {
    if (g.parent(inc.to) == x) return false;
    if (inc.to != g.parent(x) && g.direction_from(inc.edge, x) == 1) return false;
  }
  return true;
}

Algorithm1Run algorithm1_mend(const Graph& g, const PartialLabeling& lambda, Vertex v, bool generalized) {
  if (!g.has_parent_map()) throw PreconditionError("algorithm 1 needs a parent map");
  if (v < 0 || static_cast<std::size_t>(v) >= g.n() || !lambda.is_hole(v)) {
    throw PreconditionError("algorithm 1: vertex is not a hole");
  }
  LclProblem p = path_to_sink_problem(generalized ? PathToSinkMode::OrientedGeneral : PathToSinkMode::Promise);
  std::vector<char> target = targets(g, generalized);
  PartialLabeling lam = lambda;
  Algorithm1Run out;
  Vertex current = v;
  auto phase2 = [&](Vertex from) {
    out.phase2 = true;
    auto path = path_down(g, from, target);
    if (path.empty() && !target[from]) throw Infeasible("algorithm 1: no sink below the climb");
    out.target = path.empty() ? from : path.back();
    for (Vertex y : path) {
      if (lam.is_hole(y) || (lam[y] == kRed && happy_at(p, g, lam, y))) break;
      lam[y] = kRed;
    }
  };
  if (g.parent(v) == kNoVertex) {
    lam[v] = kRed;
    if (!happy_at(p, g, lam, v)) phase2(v);
  } else {
    for (;;) {
      lam[current] = kBlack;
      Vertex parent = g.parent(current);
      if (parent == kNoVertex) throw Infeasible("algorithm 1: climbed to the root without a sink below");
      if (happy_at(p, g, lam, parent)) break;
      current = parent;
      ++out.climb_steps;
      if (!path_down(g, current, target).empty()) {
        phase2(current);
        break;
      }
    }
  }
  out.run.mend = std::move(lam);
  out.run.diff = hamming_diff(lambda, out.run.mend);
  out.run.explored = out.run.diff;
  if (std::find(out.run.explored.begin(), out.run.explored.end(), v) == out.run.explored.end()) {
    out.run.explored.insert(out.run.explored.begin(), v);
  }
  out.run.steps = out.run.diff.size();
  return out;
}

PartialLabeling all_black(const Graph& g, Vertex hole) {
  PartialLabeling lam(red_black(), g.n(), kBlack);
  lam[hole] = kBottom;
  return lam;
}

PartialLabeling random_partial_solution(const Graph& g, Vertex hole, int extra_holes, bool generalized,
                                        Rng& rng) {
  if (!g.has_parent_map()) throw PreconditionError("random partial solution needs a parent map");
  std::size_t n = g.n();
  PartialLabeling lam(red_black(), n);
  for (std::size_t x = 0; x < n; ++x) lam[static_cast<Vertex>(x)] = rng.below(2) ? kRed : kBlack;
  lam[hole] = kBottom;
  for (int i = 0; i < extra_holes; ++i) lam[static_cast<Vertex>(rng.below(n))] = kBottom;
  std::vector<char> target = targets(g, generalized);
  std::vector<char> exempt(n, 0);
  if (generalized) {
    for (Vertex b : broken_vertices(g).broken) exempt[b] = 1;
  }
  auto satisfied = [&](Vertex x) {
    if (lam.is_hole(x) || exempt[x]) return true;
    if (g.parent(x) == kNoVertex && lam[x] != kRed) return false;
    if (lam[x] != kRed || is_sink(g, x)) return true;
    for (Vertex c : children_of(g, x)) {
      if (lam[c] == kRed || lam.is_hole(c)) return true;
    }
    return false;
  };
  // Deepest first, so a parent is fixed after its children.
  std::vector<int> depth(n, -1);
  std::vector<Vertex> order;
  for (std::size_t x = 0; x < n; ++x) {
    int d = 0;
    for (Vertex y = static_cast<Vertex>(x); g.parent(y) != kNoVertex && d <= static_cast<int>(n); y = g.parent(y)) ++d;
    depth[x] = d;
    order.push_back(static_cast<Vertex>(x));
  }
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return depth[a] > depth[b]; });
  for (Vertex x : order) {
    if (!satisfied(x) && g.parent(x) != kNoVertex) lam[x] = kBlack;
  }
  // Roots become red with a red path toward the nearest sink or hole.
  std::vector<char> goal = target;
  for (std::size_t x = 0; x < n; ++x) goal[x] = goal[x] || lam.is_hole(static_cast<Vertex>(x));
  for (std::size_t r = 0; r < n; ++r) {
    Vertex x = static_cast<Vertex>(r);
    if (g.parent(x) != kNoVertex || lam.is_hole(x) || exempt[x]) continue;
    lam[x] = kRed;
    if (satisfied(x)) continue;
    auto path = path_down(g, x, goal);
    if (path.empty() && !target[x]) {
      lam[x] = kBottom;
      continue;
    }
    for (Vertex y : path) {
      if (lam.is_hole(y)) break;
      lam[y] = kRed;
    }
  }
  return lam;
}

SinkStrategy sink_strategy(const std::string& name) {
  if (name == "midpoint") return SinkStrategy::Midpoint;
  if (name == "random_pivot" || name == "random-pivot") return SinkStrategy::RandomPivot;
  if (name == "leftmost") return SinkStrategy::Leftmost;
  throw ArgumentError("unknown sink-search strategy '" + name + "'");
}

std::string to_string(SinkStrategy s) {
  switch (s) {
    case SinkStrategy::Midpoint:
      return "midpoint";
    case SinkStrategy::RandomPivot:
      return "random_pivot";
    case SinkStrategy::Leftmost:
      return "leftmost";
  }
  return "";
}

namespace {

// 0-1 BFS: entering an unexplored vertex costs 1. Marks the cheapest path to `to` explored.
std::size_t walk_to(const Graph& g, std::vector<char>& explored, const std::vector<Vertex>& w, Vertex to) {
  if (explored[to]) return 0;
  constexpr int kUnset = std::numeric_limits<int>::max();
  std::vector<int> dist(g.n(), kUnset);
  std::vector<Vertex> from(g.n(), kNoVertex);
  std::deque<Vertex> dq;
  for (Vertex x : w) {
    dist[x] = 0;
    dq.push_back(x);
  }
  while (!dq.empty()) {
    Vertex x = dq.front();
    dq.pop_front();
    if (x == to) break;
    for (const Incidence& inc : g.incident(x)) {
      int c = explored[inc.to] ? 0 : 1;
      if (dist[x] + c < dist[inc.to]) {
        dist[inc.to] = dist[x] + c;
        from[inc.to] = x;
        if (c == 0) {
          dq.push_front(inc.to);
        } else {
          dq.push_back(inc.to);
        }
      }
    }
  }
  std::size_t added = 0;
  for (Vertex z = to; z != kNoVertex && !explored[z]; z = from[z]) {
    explored[z] = 1;
    ++added;
  }
  return added;
}

}  // namespace

SinkSearchResult sink_search(const LayeredTree& t, SinkStrategy strategy, std::uint64_t seed) {
  const Graph& g = t.graph;
  Rng rng(seed);
  std::vector<char> explored(g.n(), 0);
  std::vector<Vertex> w{t.root()};
  explored[t.root()] = 1;
  SinkSearchResult r;
  auto visit = [&](Vertex target) {
    std::size_t added = walk_to(g, explored, w, target);
    w.clear();
    for (std::size_t x = 0; x < g.n(); ++x) {
      if (explored[x]) w.push_back(static_cast<Vertex>(x));
    }
    return added;
  };
  int low = 0, high = (1 << t.h) - 1;
  while (low < high) {
    int l = low;
    switch (strategy) {
      case SinkStrategy::Midpoint:
        l = low + (high - low) / 2;
        break;
      case SinkStrategy::RandomPivot:
        l = low + static_cast<int>(rng.below(static_cast<std::uint64_t>(high - low + 1)));
        break;
      case SinkStrategy::Leftmost:
        l = low;
        break;
    }
    SinkQuery q;
    q.position = l;
    q.is_short = std::min(high - l, l - low) < t.h;
    Vertex x = LayeredTree::id(t.h, l);
    q.cost = visit(x);
    r.queries.push_back(q);
    bool right_out = false, left_out = false;
    for (const Incidence& inc : g.incident(x)) {
      if (t.coord[inc.to].first != t.h) continue;
      bool out = g.direction_from(inc.edge, x) == 1;
      if (t.coord[inc.to].second > l) right_out = out;
      if (t.coord[inc.to].second < l) left_out = out;
    }
    if (right_out) {
      low = l + 1;
    } else if (left_out) {
      high = l - 1;
    } else {
      low = high = l;
    }
  }
  r.found = low;
  r.final_walk = visit(LayeredTree::id(t.h, low));
  r.explored = w.size();
  return r;
}

}  // namespace mendlab
