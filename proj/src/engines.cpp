#include "mendlab/engines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mendlab {

namespace detail {

inline std::int64_t combine_cost(Combine c, std::int64_t a, std::int64_t b) {
  if (a >= kForbidden || b >= kForbidden) return kForbidden;
  return c == Combine::Sum ? a + b : std::max(a, b);
}

bool graph_is_forest(const Graph& g) {
  std::vector<Vertex> uf(g.n());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](Vertex x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    Vertex a = find(e.u), b = find(e.v);
    if (a == b) return false;
    uf[a] = b;
  }
  return true;
}

bool parent_map_is_forest(const Graph& g) {
  if (!g.has_parent_map()) return false;
  std::vector<std::uint8_t> state(g.n(), 0);  // 0 new, 1 on stack, 2 done
  for (std::size_t s = 0; s < g.n(); ++s) {
    std::vector<Vertex> path;
    Vertex x = static_cast<Vertex>(s);
    while (x != kNoVertex && state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = g.parent(x);
    }
    if (x != kNoVertex && state[x] == 1) return false;
    for (Vertex y : path) state[y] = 2;
  }
  return true;
}

// Rooted forest in which every verdict reads only a vertex, its forest parent and children.
struct Forest {
  std::vector<Vertex> parent;
  std::vector<std::vector<Vertex>> children;
  std::vector<int> depth;
};

Forest build_forest(const LclProblem& p, const Graph& g, Vertex v) {
  std::size_t n = g.n();
  Forest f;
  f.parent.assign(n, kNoVertex);
  f.children.assign(n, {});
  f.depth.assign(n, 0);
  if (p.effective_scope() == LabelScope::TreeFamily) {
    for (std::size_t x = 0; x < n; ++x) {
      Vertex q = g.parent(static_cast<Vertex>(x));
      f.parent[x] = q;
      if (q != kNoVertex) f.children[q].push_back(static_cast<Vertex>(x));
    }
    std::vector<Vertex> stack;
    for (std::size_t x = 0; x < n; ++x) {
      if (f.parent[x] == kNoVertex) stack.push_back(static_cast<Vertex>(x));
    }
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (Vertex c : f.children[x]) {
        f.depth[c] = f.depth[x] + 1;
        stack.push_back(c);
      }
    }
    return f;
  }
  std::vector<char> seen(n, 0);
  auto grow = [&](Vertex s) {
    std::vector<Vertex> queue{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      Vertex x = queue[i];
      for (const Incidence& inc : g.incident(x)) {
        if (seen[inc.to]) continue;
        seen[inc.to] = 1;
        f.parent[inc.to] = x;
        f.depth[inc.to] = f.depth[x] + 1;
        f.children[x].push_back(inc.to);
        queue.push_back(inc.to);
      }
    }
  };
  grow(v);
  for (std::size_t x = 0; x < n; ++x) {
    if (!seen[x]) grow(static_cast<Vertex>(x));
  }
  return f;
}

class ScopeDp {
 public:
  ScopeDp(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v)
      : p_(p), g_(g), lambda_(lambda), v_(v), forest_(build_forest(p, g, v)),
        base_(static_cast<int>(p.alphabet().size()) + 1), nodes_(g.n()) {
    for (Vertex x : neighborhood(g, v, p.radius())) near_v_.push_back(x);
  }

  std::optional<DpMend> run(const std::vector<std::int64_t>& cost, Combine combine) {
    std::size_t n = g_.n();
    if (cost.size() != n) throw ArgumentError("change-cost vector has the wrong size");
    if (cost[v_] >= kForbidden) return std::nullopt;
    auto variable = [&](Vertex x) {
      return cost[x] < kForbidden && (x == v_ || lambda_[x] != kBottom);
    };
    std::vector<char> in_r(n, 0);
    std::vector<Vertex> region;
    auto add = [&](Vertex x) {
      if (!in_r[x]) {
        in_r[x] = 1;
        region.push_back(x);
      }
    };
    for (std::size_t xi = 0; xi < n; ++xi) {
      Vertex x = static_cast<Vertex>(xi);
      if (!variable(x)) continue;
      add(x);
      if (forest_.parent[x] != kNoVertex) add(forest_.parent[x]);
      for (Vertex c : forest_.children[x]) add(c);
    }
    // Vertices that lose the hole's relaxation but whose scope holds no variable.
    for (Vertex x : near_v_) {
      if (in_r[x]) continue;
      if (!fixed_happy(x)) return std::nullopt;
    }
    std::sort(region.begin(), region.end(), [&](Vertex a, Vertex b) {
      return forest_.depth[a] != forest_.depth[b] ? forest_.depth[a] > forest_.depth[b] : a < b;
    });

    auto domain = [&](Vertex x) {
      std::vector<Label> d;
      if (!variable(x)) {
        d.push_back(lambda_[x]);
        return d;
      }
      int deg = g_.degree(x);
      for (Label l = 0; l < static_cast<Label>(p_.alphabet().size()); ++l) {
        if (l == lambda_[x] || p_.allows(deg, l)) d.push_back(l);
      }
      return d;
    };

    struct Table {
      std::vector<Label> dom;
      std::vector<Label> pdom;
      std::vector<Vertex> kids;           // forest children inside the region
      std::vector<std::int64_t> value;    // [a * |pdom| + e]
      std::vector<std::int32_t> choice;   // [(a * |pdom| + e) * |kids| + j] = index into kid domain
    };
    std::vector<int> slot(n, -1);
    for (std::size_t i = 0; i < region.size(); ++i) slot[region[i]] = static_cast<int>(i);
    std::vector<Table> tables(region.size());
    auto table_of = [&](Vertex x) -> Table& { return tables[slot[x]]; };
    for (Vertex x : region) {
      Table& t = table_of(x);
      t.dom = domain(x);
      Vertex q = forest_.parent[x];
      if (q == kNoVertex) {
        t.pdom = {kBottom};
      } else if (in_r[q]) {
        t.pdom = domain(q);
      } else {
        t.pdom = {lambda_[q]};
      }
      for (Vertex c : forest_.children[x]) {
        if (in_r[c]) t.kids.push_back(c);
      }
    }

    for (Vertex x : region) {
      Table& t = table_of(x);
      Node& node = node_of(x);
      std::size_t nd = t.dom.size(), np = t.pdom.size(), nk = t.kids.size();
      t.value.assign(nd * np, kForbidden);
      t.choice.assign(nd * np * nk, -1);
      for (std::size_t a = 0; a < nd; ++a) {
        Label lx = t.dom[a];
        std::int64_t own = lx != lambda_[x] ? cost[x] : 0;
        // Candidate labels of each DP child given lx, cheapest first.
        std::vector<std::vector<Option>> opts(nk);
        bool dead = false;
        for (std::size_t j = 0; j < nk; ++j) {
          Table& ct = table_of(t.kids[j]);
          for (std::size_t b = 0; b < ct.dom.size(); ++b) {
            std::int64_t val = ct.value[b * ct.pdom.size() + a];
            if (val < kForbidden) opts[j].push_back({val, static_cast<int>(b), ct.dom[b]});
          }
          std::sort(opts[j].begin(), opts[j].end(),
                    [](const Option& l, const Option& r) { return l.value < r.value; });
          if (opts[j].empty()) dead = true;
        }
        if (dead) continue;
        std::vector<int> pick(nk, 0), best_pick(nk, 0);
        for (std::size_t e = 0; e < np; ++e) {
          Label lp = t.pdom[e];
          std::int64_t best = kForbidden;
          if (node.relaxed) {
            std::int64_t acc = own;
            for (std::size_t j = 0; j < nk; ++j) acc = combine_cost(combine, acc, opts[j][0].value);
            best = acc;
            std::fill(best_pick.begin(), best_pick.end(), 0);
          } else {
            set_scope(node, lp, lx);
            enumerate(node, t.kids, opts, 0, own, combine, pick, best, best_pick);
          }
          if (best >= kForbidden) continue;
          t.value[a * np + e] = best;
          for (std::size_t j = 0; j < nk; ++j) {
            t.choice[(a * np + e) * nk + j] = opts[j][best_pick[j]].index;
          }
        }
      }
    }

    DpMend out;
    out.witness = lambda_;
    std::int64_t total = 0;
    std::vector<std::pair<Vertex, int>> stack;  // (vertex, chosen index in its domain)
    for (auto it = region.rbegin(); it != region.rend(); ++it) {
      Vertex x = *it;
      Vertex q = forest_.parent[x];
      if (q != kNoVertex && in_r[q]) continue;
      Table& t = table_of(x);
      int best = -1;
      for (std::size_t a = 0; a < t.dom.size(); ++a) {
        if (t.value[a] < kForbidden && (best < 0 || t.value[a] < t.value[best])) best = static_cast<int>(a);
      }
      if (best < 0) return std::nullopt;
      total = combine_cost(combine, total, t.value[best]);
      stack.emplace_back(x, best);
    }
    std::vector<int> pe(n, 0);  // chosen index of the parent in the child's pdom
    while (!stack.empty()) {
      auto [x, a] = stack.back();
      stack.pop_back();
      Table& t = table_of(x);
      out.witness[x] = t.dom[a];
      std::size_t np = t.pdom.size(), nk = t.kids.size();
      std::size_t e = static_cast<std::size_t>(pe[x]);
      for (std::size_t j = 0; j < nk; ++j) {
        Vertex c = t.kids[j];
        pe[c] = a;
        stack.emplace_back(c, t.choice[(a * np + e) * nk + j]);
      }
    }
    out.value = total;
    return out;
  }

 private:
  struct Option {
    std::int64_t value;
    int index;
    Label label;
  };

  struct Node {
    bool ready = false;
    bool relaxed = false;
    LocalView view;
    int parent_local = -1;
    std::vector<int> kid_local;  // local index of each forest child (all of them)
    std::vector<Vertex> kid_global;
    int table = -1;              // memo table id, -1 when too large
  };

  Node& node_of(Vertex x) {
    Node& nd = nodes_[x];
    if (nd.ready) return nd;
    nd.ready = true;
    nd.view = LocalView(g_, lambda_, x, p_.radius());
    Vertex q = forest_.parent[x];
    nd.parent_local = q == kNoVertex ? -1 : nd.view.local_of(q);
    for (Vertex c : forest_.children[x]) {
      nd.kid_global.push_back(c);
      nd.kid_local.push_back(nd.view.local_of(c));
    }
    for (int i = 0; i < nd.view.size(); ++i) {
      Vertex gx = nd.view.global(i);
      if (gx == v_) {
        nd.view.set_label(i, 0);
      } else if (lambda_[gx] == kBottom) {
        nd.relaxed = true;
      }
    }
    if (!nd.relaxed) {
      int scope_size = 1 + (nd.parent_local >= 0 ? 1 : 0) + static_cast<int>(nd.kid_local.size());
      double cells = std::pow(static_cast<double>(base_), scope_size);
      if (cells <= static_cast<double>(1 << 22)) {
        std::vector<int> key = nd.view.shape_key();
        key.push_back(nd.parent_local);
        key.insert(key.end(), nd.kid_local.begin(), nd.kid_local.end());
        auto [it, inserted] = shapes_.emplace(std::move(key), static_cast<int>(memo_.size()));
        if (inserted) memo_.emplace_back(static_cast<std::size_t>(cells), std::int8_t{-1});
        nd.table = it->second;
      }
    }
    return nd;
  }

  bool fixed_happy(Vertex x) {
    Node& nd = node_of(x);
    if (nd.relaxed) return true;
    return p_.base_happy(nd.view);
  }

  static void set_scope(Node& nd, Label lp, Label lx) {
    nd.view.set_label(0, lx);
    if (nd.parent_local >= 0) nd.view.set_label(nd.parent_local, lp);
  }

  bool verdict(Node& nd) {
    if (nd.table < 0) return p_.base_happy(nd.view);
    std::size_t idx = static_cast<std::size_t>(nd.view.label(0) + 1);
    if (nd.parent_local >= 0) idx = idx * base_ + static_cast<std::size_t>(nd.view.label(nd.parent_local) + 1);
    for (int li : nd.kid_local) idx = idx * base_ + static_cast<std::size_t>(nd.view.label(li) + 1);
    std::int8_t& cell = memo_[nd.table][idx];
    if (cell < 0) cell = p_.base_happy(nd.view) ? 1 : 0;
    return cell == 1;
  }

  // Branch over DP-children labels; fixed children keep the labels already in the view.
  void enumerate(Node& nd, const std::vector<Vertex>& kids,
                 const std::vector<std::vector<Option>>& opts, std::size_t j,
                 std::int64_t acc, Combine combine, std::vector<int>& pick, std::int64_t& best,
                 std::vector<int>& best_pick) {
    if (acc >= best) return;
    if (j == kids.size()) {
      if (verdict(nd)) {
        best = acc;
        best_pick = pick;
      }
      return;
    }
    int li = -1;
    for (std::size_t k = 0; k < nd.kid_global.size(); ++k) {
      if (nd.kid_global[k] == kids[j]) li = nd.kid_local[k];
    }
    for (std::size_t o = 0; o < opts[j].size(); ++o) {
      // Options are sorted, and both combiners are monotone.
      std::int64_t next = combine_cost(combine, acc, opts[j][o].value);
      if (next >= best) break;
      if (li >= 0) nd.view.set_label(li, opts[j][o].label);
      pick[j] = static_cast<int>(o);
      enumerate(nd, kids, opts, j + 1, next, combine, pick, best, best_pick);
    }
  }

  const LclProblem& p_;
  const Graph& g_;
  const PartialLabeling& lambda_;
  Vertex v_;
  Forest forest_;
  int base_;
  std::vector<Node> nodes_;
  std::vector<Vertex> near_v_;
  std::map<std::vector<int>, int> shapes_;
  std::vector<std::vector<std::int8_t>> memo_;
};

struct BudgetHit {};

// Conflict-directed depth-first search for a mend with at most k changes.
class Search {
 public:
  Search(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v,
         std::uint64_t budget, std::optional<std::span<const Vertex>> allowed)
      : p_(p), g_(g), lambda_(lambda), v_(v), budget_(budget), cache_(p), cur_(lambda),
        committed_(g.n(), 0), views_(g.n()), shapes_(g.n(), -2), stamp_(g.n(), 0) {
    std::size_t n = g.n();
    if (allowed) {
      std::vector<char> ok(n, 0);
      for (Vertex x : *allowed) ok[x] = 1;
      if (!ok[v]) throw PreconditionError("the hole must belong to the allowed set");
      for (std::size_t x = 0; x < n; ++x) {
        if (!ok[x]) committed_[x] = 1;
      }
      allowed_count_ = allowed->size();
    } else {
      allowed_count_ = n;
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (lambda[static_cast<Vertex>(x)] == kBottom) committed_[x] = 1;
    }
    committed_[v] = 0;
    setup_twins(allowed.has_value() ? committed_ : std::vector<char>(n, 0));
  }

  OracleResult run() {
    OracleResult res;
    std::int64_t k = 1;
    try {
      for (;;) {
        if (k > static_cast<std::int64_t>(allowed_count_)) {
          res.found = false;
          res.lower_bound = k;
          break;
        }
        next_bound_ = kForbidden;
        if (root(k)) {
          res.found = true;
          res.volume = static_cast<std::int64_t>(changed_.size());
          res.lower_bound = res.volume;
          res.witness = best_;
          break;
        }
        if (next_bound_ >= kForbidden) {
          res.found = false;
          res.lower_bound = k;
          break;
        }
        k = std::max(k + 1, next_bound_);
      }
    } catch (const BudgetHit&) {
      res.status = OracleStatus::BudgetExceeded;
      res.lower_bound = k;
    }
    res.nodes = nodes_;
    return res;
  }

 private:
  bool root(std::int64_t k) {
    int deg = g_.degree(v_);
    for (Label l = 0; l < static_cast<Label>(p_.alphabet().size()); ++l) {
      if (!p_.allows(deg, l)) continue;
      apply(v_, l);
      bool ok = dfs(k);
      if (ok) {
        best_ = cur_;
        return true;
      }
      undo(v_);
    }
    return false;
  }

  void apply(Vertex x, Label l) {
    cur_[x] = l;
    commit(x);
    changed_.push_back(x);
  }
  void undo(Vertex x) {
    changed_.pop_back();
    uncommit(x);
    cur_[x] = lambda_[x];
  }
  void commit(Vertex x) {
    committed_[x] = 1;
    for (Vertex a = x; a != kNoVertex; a = tparent_.empty() ? kNoVertex : tparent_[a]) ++sub_commits_[a];
  }
  void uncommit(Vertex x) {
    committed_[x] = 0;
    for (Vertex a = x; a != kNoVertex; a = tparent_.empty() ? kNoVertex : tparent_[a]) --sub_commits_[a];
  }

  LocalView& view(Vertex x) {
    if (shapes_[x] == -2) {
      views_[x] = LocalView(g_, lambda_, x, p_.radius());
      shapes_[x] = cache_.shape_of(views_[x]);
    }
    return views_[x];
  }

  bool happy(Vertex x) {
    LocalView& vw = view(x);
    for (int i = 0; i < vw.size(); ++i) vw.set_label(i, cur_[vw.global(i)]);
    return cache_.happy(shapes_[x], vw);
  }

  // Some assignment of the open vertices around u makes u happy.
  bool satisfiable(Vertex u, const std::vector<Vertex>& open) {
    std::size_t a = p_.alphabet().size();
    double combos = std::pow(static_cast<double>(a), static_cast<double>(open.size()));
    if (combos > 512) return true;
    LocalView& vw = view(u);
    for (int i = 0; i < vw.size(); ++i) vw.set_label(i, cur_[vw.global(i)]);
    std::vector<int> loc;
    for (Vertex x : open) loc.push_back(vw.local_of(x));
    std::vector<Label> digit(open.size(), 0);
    for (;;) {
      for (std::size_t i = 0; i < open.size(); ++i) vw.set_label(loc[i], digit[i]);
      if (cache_.happy(shapes_[u], vw)) return true;
      std::size_t i = 0;
      while (i < digit.size() && ++digit[i] == static_cast<Label>(a)) digit[i++] = 0;
      if (i == digit.size()) return false;
    }
  }

  bool dfs(std::int64_t k) {
    if (++nodes_ > budget_) throw BudgetHit{};
    std::int64_t used = static_cast<std::int64_t>(changed_.size());
    std::vector<Vertex> unhappy;
    for (const BallEntry& b : ball(g_, changed_, p_.radius())) {
      if (!happy(b.v)) unhappy.push_back(b.v);
    }
    if (unhappy.empty()) return true;
    std::sort(unhappy.begin(), unhappy.end());
    std::vector<std::vector<Vertex>> open(unhappy.size());
    for (std::size_t i = 0; i < unhappy.size(); ++i) {
      LocalView& vw = view(unhappy[i]);
      for (int j = 0; j < vw.size(); ++j) {
        Vertex x = vw.global(j);
        if (!committed_[x]) open[i].push_back(x);
      }
      if (open[i].empty()) return false;
      std::sort(open[i].begin(), open[i].end());
      if (!satisfiable(unhappy[i], open[i])) return false;
    }
    // Disjoint conflicts each need their own change.
    std::vector<std::size_t> by_size(unhappy.size());
    std::iota(by_size.begin(), by_size.end(), 0);
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](std::size_t a, std::size_t b) { return open[a].size() < open[b].size(); });
    ++epoch_;
    std::int64_t packed = 0;
    for (std::size_t i : by_size) {
      bool free = std::none_of(open[i].begin(), open[i].end(), [&](Vertex x) { return stamp_[x] == epoch_; });
      if (!free) continue;
      ++packed;
      for (Vertex x : open[i]) stamp_[x] = epoch_;
    }
    if (used + packed > k) {
      next_bound_ = std::min(next_bound_, used + packed);
      return false;
    }
    const std::vector<Vertex>& cand = open[by_size.front()];
    std::vector<char> skip(cand.size(), 0);
    mark_twins(cand, skip);
    std::vector<Vertex> held;
    bool found = false;
    for (std::size_t i = 0; i < cand.size() && !found; ++i) {
      Vertex x = cand[i];
      if (!skip[i]) {
        int deg = g_.degree(x);
        for (Label l = 0; l < static_cast<Label>(p_.alphabet().size()) && !found; ++l) {
          if (l == cur_[x] || !p_.allows(deg, l)) continue;
          apply(x, l);
          if (dfs(k)) {
            found = true;
            break;
          }
          undo(x);
        }
      }
      if (found) break;
      commit(x);
      held.push_back(x);
    }
    if (found) return true;
    for (auto it = held.rbegin(); it != held.rend(); ++it) uncommit(*it);
    return false;
  }

  // Sibling subtrees with equal canonical ids and no commitments are interchangeable.
  void setup_twins(const std::vector<char>& fixed) {
    std::size_t n = g_.n();
    sub_commits_.assign(n, 0);
    if (!p_.port_invariant || !g_.is_tree()) return;
    tparent_.assign(n, kNoVertex);
    std::vector<Vertex> order{v_};
    std::vector<char> seen(n, 0);
    seen[v_] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (const Incidence& inc : g_.incident(order[i])) {
        if (seen[inc.to]) continue;
        seen[inc.to] = 1;
        tparent_[inc.to] = order[i];
        order.push_back(inc.to);
      }
    }
    tin_.assign(n, 0);
    tout_.assign(n, 0);
    canon_.assign(n, -1);
    std::vector<std::vector<int>> kid_ids(n);
    std::map<std::vector<int>, int> ids;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Vertex x = *it;
      std::vector<int> key{lambda_[x], fixed[x] ? 1 : 0};
      std::sort(kid_ids[x].begin(), kid_ids[x].end());
      key.insert(key.end(), kid_ids[x].begin(), kid_ids[x].end());
      canon_[x] = ids.emplace(std::move(key), static_cast<int>(ids.size())).first->second;
      if (tparent_[x] != kNoVertex) kid_ids[tparent_[x]].push_back(canon_[x]);
    }
    // Euler intervals for subtree membership.
    int clock = 0;
    std::vector<std::vector<Vertex>> kids(n);
    for (Vertex x : order) {
      if (tparent_[x] != kNoVertex) kids[tparent_[x]].push_back(x);
    }
    std::vector<std::pair<Vertex, std::size_t>> st{{v_, 0}};
    tin_[v_] = clock++;
    while (!st.empty()) {
      auto& [x, i] = st.back();
      if (i < kids[x].size()) {
        Vertex c = kids[x][i++];
        tin_[c] = clock++;
        st.emplace_back(c, 0);
      } else {
        tout_[x] = clock;
        st.pop_back();
      }
    }
  }

  bool inside(Vertex x, Vertex root) const { return tin_[root] <= tin_[x] && tin_[x] < tout_[root]; }

  void mark_twins(const std::vector<Vertex>& cand, std::vector<char>& skip) {
    if (canon_.empty()) return;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      Vertex xi = cand[i];
      if (xi == v_ || sub_commits_[xi] != 0) continue;
      for (std::size_t j = 0; j < i; ++j) {
        Vertex xj = cand[j];
        if (xj == v_ || sub_commits_[xj] != 0) continue;
        if (tparent_[xi] != tparent_[xj] || canon_[xi] != canon_[xj]) continue;
        bool clean = true;
        for (Vertex y : cand) {
          if (y != xi && y != xj && (inside(y, xi) || inside(y, xj))) clean = false;
        }
        if (clean) {
          skip[i] = 1;
          break;
        }
      }
    }
  }

  const LclProblem& p_;
  const Graph& g_;
  const PartialLabeling& lambda_;
  Vertex v_;
  std::uint64_t budget_;
  VerdictCache cache_;
  PartialLabeling cur_;
  PartialLabeling best_;
  std::vector<char> committed_;
  std::vector<Vertex> changed_;
  std::vector<LocalView> views_;
  std::vector<int> shapes_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
  std::uint64_t nodes_ = 0;
  std::int64_t next_bound_ = kForbidden;
  std::size_t allowed_count_ = 0;
  std::vector<Vertex> tparent_;
  std::vector<int> sub_commits_;
  std::vector<int> canon_;
  std::vector<int> tin_, tout_;
};

void require_hole(const PartialLabeling& lambda, const Graph& g, Vertex v) {
  if (lambda.size() != g.n()) throw ArgumentError("labeling size does not match graph");
  if (v < 0 || static_cast<std::size_t>(v) >= g.n()) throw ArgumentError("hole out of range");
  if (!lambda.is_hole(v)) throw PreconditionError("vertex " + std::to_string(v) + " is not a hole");
}

}  // namespace detail

using namespace detail;

bool scope_dp_applicable(const LclProblem& p, const Graph& g) {
  switch (p.effective_scope()) {
    case LabelScope::Ball:
      return false;
    case LabelScope::Neighbors:
      return graph_is_forest(g);
    case LabelScope::TreeFamily:
      return parent_map_is_forest(g);
  }
  return false;
}

std::optional<DpMend> scope_tree_dp(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                                    Vertex v, const std::vector<std::int64_t>& change_cost,
                                    Combine combine) {
  require_hole(lambda, g, v);
  if (!scope_dp_applicable(p, g)) throw PreconditionError("tree-scope DP does not apply to this problem");
  ScopeDp dp(p, g, lambda, v);
  return dp.run(change_cost, combine);
}

OracleResult oracle_min_mend(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                             Vertex v, std::uint64_t budget,
                             std::optional<std::span<const Vertex>> allowed) {
  require_hole(lambda, g, v);
  Search s(p, g, lambda, v, budget, allowed);
  return s.run();
}

MendOracle::MendOracle(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v,
                       std::uint64_t budget)
    : p_(p), g_(g), lambda_(lambda), v_(v), budget_(budget) {
  require_hole(lambda, g, v);
  if (p.propagation && g.has_parent_map() && g.is_tree()) {
    Vertex root = kNoVertex;
    for (std::size_t x = 0; x < g.n(); ++x) {
      if (g.parent(static_cast<Vertex>(x)) == kNoVertex) root = static_cast<Vertex>(x);
    }
    tree_ = std::make_unique<RootedTree>(g, root);
    engine_ = Engine::Propagation;
  } else if (scope_dp_applicable(p, g)) {
    dp_ = std::make_unique<ScopeDp>(p, g, lambda, v);
    engine_ = Engine::ScopeDp;
  } else {
    engine_ = Engine::Search;
  }
}

MendOracle::~MendOracle() = default;

std::string MendOracle::engine() const {
  switch (engine_) {
    case Engine::Propagation:
      return "propagation-dp";
    case Engine::ScopeDp:
      return "tree-scope-dp";
    case Engine::Search:
      return "search";
  }
  return "";
}

std::optional<PartialLabeling> MendOracle::contains(std::span<const Vertex> w) {
  ++calls_;
  if (std::find(w.begin(), w.end(), v_) == w.end()) {
    throw PreconditionError("contains_mend: the hole must belong to W");
  }
  switch (engine_) {
    case Engine::Propagation: {
      auto r = propagation_min_mend(*p_.propagation, p_.generalized, *tree_, lambda_, v_, w);
      if (!r) return std::nullopt;
      return std::move(r->witness);
    }
    case Engine::ScopeDp: {
      std::vector<std::int64_t> cost(g_.n(), kForbidden);
      for (Vertex x : w) cost[x] = 1;
      auto r = dp_->run(cost, Combine::Sum);
      if (!r) return std::nullopt;
      return std::move(r->witness);
    }
    case Engine::Search: {
      auto r = oracle_min_mend(p_, g_, lambda_, v_, budget_, w);
      if (r.status == OracleStatus::BudgetExceeded) throw BudgetExceeded("contains_mend search budget exceeded");
      if (!r.found) return std::nullopt;
      return std::move(r.witness);
    }
  }
  return std::nullopt;
}

DpMend MendOracle::min_mend() {
  switch (engine_) {
    case Engine::Propagation: {
      auto r = propagation_min_mend(*p_.propagation, p_.generalized, *tree_, lambda_, v_);
      if (!r) throw Infeasible("no mend exists for this instance");
      return {r->volume, std::move(r->witness)};
    }
    case Engine::ScopeDp: {
      auto r = dp_->run(std::vector<std::int64_t>(g_.n(), 1), Combine::Sum);
      if (!r) throw Infeasible("no mend exists for this instance");
      return std::move(*r);
    }
    case Engine::Search: {
      auto r = oracle_min_mend(p_, g_, lambda_, v_, budget_);
      if (r.status == OracleStatus::BudgetExceeded) {
        throw BudgetExceeded("oracle budget exceeded; volume >= " + std::to_string(r.lower_bound));
      }
      if (!r.found) throw Infeasible("no mend exists for this instance");
      return {r.volume, std::move(r.witness)};
    }
  }
  throw Error("unreachable");
}

std::pair<int, PartialLabeling> MendOracle::radius() {
  std::vector<BallEntry> order = ball(g_, std::span<const Vertex>(&v_, 1), static_cast<int>(g_.n()));
  if (engine_ == Engine::ScopeDp) {
    std::vector<std::int64_t> cost(g_.n(), kForbidden);
    for (const BallEntry& b : order) cost[b.v] = b.dist;
    auto r = dp_->run(cost, Combine::Max);
    if (!r) throw Infeasible("no mend exists in the component of the hole");
    return {static_cast<int>(r->value), std::move(r->witness)};
  }
  int max_d = order.back().dist;
  std::vector<Vertex> prefix;
  auto ball_of = [&](int rho) {
    prefix.clear();
    for (const BallEntry& b : order) {
      if (b.dist > rho) break;
      prefix.push_back(b.v);
    }
    return contains(prefix);
  };
  // Gallop, then bisect; contains_mend is monotone in W.
  int lo = -1, hi = 0;
  std::optional<PartialLabeling> found;
  for (;;) {
    found = ball_of(hi);
    if (found) break;
    if (hi >= max_d) throw Infeasible("no mend exists in the component of the hole");
    lo = hi;
    hi = std::min(max_d, hi == 0 ? 1 : hi * 2);
  }
  while (hi - lo > 1) {
    int mid = lo + (hi - lo) / 2;
    auto r = ball_of(mid);
    if (r) {
      hi = mid;
      found = std::move(r);
    } else {
      lo = mid;
    }
  }
  return {hi, std::move(*found)};
}

std::optional<std::pair<std::size_t, PartialLabeling>> MendOracle::stop_index(
    std::span<const Vertex> order) {
  if (order.empty() || order[0] != v_) throw PreconditionError("trajectory must start at the hole");
  if (engine_ == Engine::ScopeDp) {
    std::vector<std::int64_t> cost(g_.n(), kForbidden);
    for (std::size_t i = 0; i < order.size(); ++i) cost[order[i]] = static_cast<std::int64_t>(i);
    auto r = dp_->run(cost, Combine::Max);
    if (!r) return std::nullopt;
    return std::make_pair(static_cast<std::size_t>(r->value), std::move(r->witness));
  }
  auto r = contains(order);
  if (!r) return std::nullopt;
  std::size_t lo = 0, hi = order.size() - 1;  // prefix [0..hi] contains a mend
  if (auto first = contains(order.subspan(0, 1))) return std::make_pair(std::size_t{0}, std::move(*first));
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    auto m = contains(order.subspan(0, mid + 1));
    if (m) {
      hi = mid;
      r = std::move(m);
    } else {
      lo = mid;
    }
  }
  return std::make_pair(hi, std::move(*r));
}

std::optional<PartialLabeling> contains_mend(const LclProblem& p, const Graph& g,
                                             const PartialLabeling& lambda, Vertex v,
                                             std::span<const Vertex> w, std::uint64_t budget) {
  MendOracle o(p, g, lambda, v, budget);
  return o.contains(w);
}

int mending_radius(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v,
                   std::uint64_t budget) {
  MendOracle o(p, g, lambda, v, budget);
  return o.radius().first;
}

}  // namespace mendlab
