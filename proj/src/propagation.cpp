#include "mendlab/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace mendlab {

Label PropagationSpec::l0_index() const {
  auto it = std::find(labels.begin(), labels.end(), l0);
  if (it == labels.end()) throw SpecError("l0 '" + l0 + "' is not in sigma'");
  return static_cast<Label>(it - labels.begin());
}

Alphabet PropagationSpec::alphabet() const {
  std::vector<std::string> all = labels;
  all.push_back(wildcard);
  return Alphabet(std::move(all));
}

void PropagationSpec::validate() const {
  if (labels.empty()) throw SpecError("sigma' must not be empty");
  if (std::find(labels.begin(), labels.end(), wildcard) != labels.end()) {
    throw SpecError("wildcard '" + wildcard + "' must not belong to sigma'");
  }
  alphabet();
  l0_index();
  if (delta < 1) throw SpecError("delta must be positive");
  if (mu.size() != labels.size()) throw SpecError("mu must be square of dimension |sigma'|");
  for (const auto& row : mu) {
    if (row.size() != labels.size()) throw SpecError("mu must be square of dimension |sigma'|");
    long long s = 0;
    for (int x : row) {
      if (x < 0) throw SpecError("mu entries must be nonnegative");
      s += x;
    }
    if (s > delta) throw SpecError("infeasible spec: a row of mu demands more than delta children");
  }
}

LclProblem build_problem(const PropagationSpec& spec, bool generalized) {
  spec.validate();
  Label l0 = spec.l0_index();
  Label wild = spec.wildcard_index();
  int k = spec.k();
  auto mu = spec.mu;
  int delta = spec.delta;
  auto verifier = [=](const LocalView& view) {
    Label l = view.label(0);
    if (view.rooted() && view.parent(0) == LocalView::kNoParent && l != l0) return false;
    if (l == wild) return true;
    std::vector<int> kids = view.children(0);
    if (generalized && static_cast<int>(kids.size()) != delta) return true;
    std::vector<int> count(k + 1, 0);
    for (int c : kids) ++count[view.label(c)];
    for (int j = 0; j < k; ++j) {
      if (count[j] < mu[l][j]) return false;
    }
    return true;
  };
  LclProblem p(generalized ? "propagation-generalized" : "propagation", spec.alphabet(), 1, verifier);
  p.propagation = std::make_shared<PropagationSpec>(spec);
  p.generalized = generalized;
  p.port_invariant = true;
  return p;
}

namespace {

std::vector<BigInt> row_times(const std::vector<BigInt>& row, const PropagationSpec& spec) {
  int k = spec.k();
  std::vector<BigInt> out(k, 0);
  for (int i = 0; i < k; ++i) {
    if (row[i] == 0) continue;
    for (int j = 0; j < k; ++j) {
      if (spec.mu[i][j] != 0) out[j] += row[i] * spec.mu[i][j];
    }
  }
  return out;
}

BigInt sum_of(const std::vector<BigInt>& row) {
  BigInt s = 0;
  for (const auto& x : row) s += x;
  return s;
}

}  // namespace

BigInt matrix_row_sum(const PropagationSpec& spec, Label l, int d) {
  if (l < 0 || l >= spec.k()) throw ArgumentError("matrix_row_sum: label not in sigma'");
  if (d < 0) throw ArgumentError("matrix_row_sum: negative power");
  std::vector<BigInt> row(spec.k(), 0);
  row[l] = 1;
  for (int i = 0; i < d; ++i) row = row_times(row, spec);
  return sum_of(row);
}

VolumeBounds volume_bounds(const PropagationSpec& spec, int d_max) {
  spec.validate();
  if (d_max < 0) throw ArgumentError("volume_bounds: negative d_max");
  VolumeBounds b;
  b.d_max = d_max;
  Label l0 = spec.l0_index();
  for (Label l = 0; l < spec.k(); ++l) {
    std::vector<BigInt> row(spec.k(), 0);
    row[l] = 1;
    BigInt total = 0;
    for (int d = 0; d <= d_max; ++d) {
      total += sum_of(row);
      if (d < d_max) row = row_times(row, spec);
    }
    if (l == l0) b.lower = total;
    if (l == 0 || total > b.upper) b.upper = total;
  }
  return b;
}

std::vector<bool> reachable_labels(const PropagationSpec& spec) {
  int k = spec.k();
  std::vector<bool> seen(k, false);
  std::vector<int> stack{spec.l0_index()};
  seen[stack[0]] = true;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y = 0; y < k; ++y) {
      if (spec.mu[x][y] > 0 && !seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  return seen;
}

namespace {

// Tarjan SCC on the subgraph induced by `alive`.
std::vector<int> scc_ids(const PropagationSpec& spec, const std::vector<bool>& alive, int& count) {
  int k = spec.k();
  std::vector<int> index(k, -1), low(k, 0), comp(k, -1);
  std::vector<bool> on_stack(k, false);
  std::vector<int> stack;
  int next = 0;
  count = 0;
  std::function<void(int)> visit = [&](int x) {
    index[x] = low[x] = next++;
    stack.push_back(x);
    on_stack[x] = true;
    for (int y = 0; y < k; ++y) {
      if (!alive[y] || spec.mu[x][y] == 0) continue;
      if (index[y] < 0) {
        visit(y);
        low[x] = std::min(low[x], low[y]);
      } else if (on_stack[y]) {
        low[x] = std::min(low[x], index[y]);
      }
    }
    if (low[x] == index[x]) {
      for (;;) {
        int y = stack.back();
        stack.pop_back();
        on_stack[y] = false;
        comp[y] = count;
        if (y == x) break;
      }
      ++count;
    }
  };
  for (int x = 0; x < k; ++x) {
    if (alive[x] && index[x] < 0) visit(x);
  }
  return comp;
}

// Counts simple cycles through l inside component `c` (parallel edges multiply), and the lcm
// of their lengths.
void count_cycles(const PropagationSpec& spec, const std::vector<int>& comp, int c, int l,
                  std::uint64_t& cycles, std::uint64_t& period) {
  int k = spec.k();
  cycles = 0;
  period = 1;
  std::vector<bool> used(k, false);
  std::function<void(int, std::uint64_t, int)> dfs = [&](int x, std::uint64_t weight, int len) {
    for (int y = 0; y < k; ++y) {
      int m = spec.mu[x][y];
      if (m == 0 || comp[y] != c) continue;
      if (y == l) {
        cycles += weight * static_cast<std::uint64_t>(m);
        period = std::lcm(period, static_cast<std::uint64_t>(len + 1));
      } else if (!used[y]) {
        used[y] = true;
        dfs(y, weight * static_cast<std::uint64_t>(m), len + 1);
        used[y] = false;
      }
    }
  };
  used[l] = true;
  dfs(l, 1, 0);
}

}  // namespace

GrowthClass classify_growth(const PropagationSpec& spec) {
  spec.validate();
  int k = spec.k();
  std::vector<bool> alive = reachable_labels(spec);
  int ncomp = 0;
  std::vector<int> comp = scc_ids(spec, alive, ncomp);
  std::vector<int> size(ncomp, 0);
  std::vector<bool> cyclic(ncomp, false), simple(ncomp, true);
  for (int x = 0; x < k; ++x) {
    if (alive[x]) ++size[comp[x]];
  }
  for (int x = 0; x < k; ++x) {
    if (!alive[x]) continue;
    int out = 0;
    int in = 0;
    for (int y = 0; y < k; ++y) {
      if (alive[y] && comp[y] == comp[x]) {
        out += spec.mu[x][y];
        in += spec.mu[y][x];
      }
    }
    if (out > 0) cyclic[comp[x]] = true;
    if (out != 1 || in != 1) simple[comp[x]] = false;
  }
  GrowthClass g;
  for (int x = 0; x < k; ++x) {
    if (!alive[x] || !cyclic[comp[x]] || simple[comp[x]]) continue;
    std::uint64_t c = 0;
    std::uint64_t period = 1;
    count_cycles(spec, comp, comp[x], x, c, period);
    if (c < 2) continue;
    double beta = std::pow(static_cast<double>(c), 1.0 / static_cast<double>(period)) - 1.0;
    if (g.kind != GrowthClass::Kind::Exponential || beta > g.witness_beta + 1e-12) {
      g.kind = GrowthClass::Kind::Exponential;
      g.witness_beta = beta;
      g.witness = x;
      g.cycles = c;
      g.period = period;
    }
  }
  if (g.kind == GrowthClass::Kind::Exponential) return g;
  // Longest chain of cyclic clusters in the condensation. Tarjan numbers components in reverse
  // topological order, so successors have smaller ids.
  std::vector<int> best(ncomp, 0);
  for (int c = 0; c < ncomp; ++c) {
    int succ = 0;
    for (int x = 0; x < k; ++x) {
      if (!alive[x] || comp[x] != c) continue;
      for (int y = 0; y < k; ++y) {
        if (alive[y] && spec.mu[x][y] > 0 && comp[y] != c) succ = std::max(succ, best[comp[y]]);
      }
    }
    best[c] = succ + (cyclic[c] ? 1 : 0);
  }
  int chain = best[comp[spec.l0_index()]];
  g.cumulative_degree = chain;
  if (chain == 0) {
    g.kind = GrowthClass::Kind::EventuallyZero;
  } else if (chain == 1) {
    g.kind = GrowthClass::Kind::Constant;
  } else {
    g.kind = GrowthClass::Kind::Polynomial;
    g.degree = chain - 1;
  }
  return g;
}

std::string GrowthClass::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::EventuallyZero:
      os << "EventuallyZero";
      break;
    case Kind::Constant:
      os << "Constant";
      break;
    case Kind::Polynomial:
      os << "Polynomial degree=" << degree << " cumulative_degree=" << cumulative_degree;
      break;
    case Kind::Exponential:
      os.precision(6);
      os << "Exponential beta=" << witness_beta;
      break;
  }
  return os.str();
}

Instance worst_case_instance(const PropagationSpec& spec, int height) {
  spec.validate();
  Instance inst;
  inst.tree = build_balanced_tree(spec.delta, height);
  inst.lambda = PartialLabeling(spec.alphabet(), inst.tree.n(), spec.wildcard_index());
  inst.hole = inst.tree.root();
  inst.lambda[inst.hole] = kBottom;
  return inst;
}

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  return (a >= kInf || b >= kInf) ? kInf : a + b;
}

// Subtrees with identical (structure, labels, variability) share one DP table.
struct ClassInfo {
  bool variable = false;
  bool is_hole = false;
  int orig = 0;  // slot of the original label
  bool tree_root = false;
  int nchildren = 0;
  std::vector<int> kids;  // >= 0: class id of a DP child; < 0: -(slot+1) of a fixed child
  std::vector<std::int64_t> f;  // f[slot*2 + parent_is_bottom]
};

class TreeDp {
 public:
  TreeDp(const PropagationSpec& spec, bool generalized)
      : spec_(spec), generalized_(generalized), k_(spec.k()), bot_(spec.k() + 1),
        slots_(spec.k() + 2), l0_(spec.l0_index()) {}

  int slot_of(Label l) const { return l == kBottom ? bot_ : l; }
  Label label_of(int s) const { return s == bot_ ? kBottom : s; }

  int intern(const std::vector<int>& key, ClassInfo info) {
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(classes_.size());
    ids_.emplace(key, id);
    classes_.push_back(std::move(info));
    compute(id);
    return id;
  }

  const ClassInfo& cls(int id) const { return classes_[id]; }

  bool in_domain(const ClassInfo& c, int s) const {
    if (!c.variable) return s == c.orig;
    if (c.is_hole) return s != bot_;
    if (c.orig == bot_) return true;
    return s != bot_;
  }

  std::int64_t child_cost(int code, int s, int pbc) const {
    if (code < 0) return (-code - 1) == s ? 0 : kInf;
    return classes_[code].f[s * 2 + pbc];
  }

  // Minimum cost of the children of class c given its slot s and parent-⊥ flag pb.
  std::int64_t solve(const ClassInfo& c, int s, int pb, std::vector<int>* assign) const {
    int n = static_cast<int>(c.kids.size());
    int pbc = s == bot_ ? 1 : 0;
    std::vector<std::int64_t> best(n, kInf);
    std::vector<int> arg(n, -1);
    std::int64_t free_total = 0;
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < slots_; ++t) {
        std::int64_t x = child_cost(c.kids[i], t, pbc);
        if (x < best[i]) {
          best[i] = x;
          arg[i] = t;
        }
      }
      free_total = sat_add(free_total, best[i]);
    }
    bool waived = s == bot_ || pb == 1;
    if (waived) {
      if (assign) *assign = arg;
      return free_total;
    }
    // Option A: some child stays ⊥, which relaxes this vertex.
    std::int64_t a_cost = kInf;
    int a_child = -1;
    if (free_total < kInf) {
      for (int i = 0; i < n; ++i) {
        std::int64_t x = child_cost(c.kids[i], bot_, 0);
        if (x >= kInf) continue;
        std::int64_t total = free_total - best[i] + x;
        if (total < a_cost) {
          a_cost = total;
          a_child = i;
        }
      }
    }
    // Option B: the rule holds with the children's labels.
    std::int64_t b_cost = kInf;
    std::vector<int> b_assign;
    bool root_bad = c.tree_root && s != l0_;
    bool demand = s != k_ && (!generalized_ || c.nchildren == spec_.delta);
    if (!root_bad) {
      if (!demand) {
        b_cost = free_total;
        if (assign) b_assign = arg;
      } else {
        b_cost = demand_dp(c, s, assign ? &b_assign : nullptr);
      }
    }
    if (assign) {
      if (a_cost <= b_cost && a_cost < kInf) {
        *assign = arg;
        (*assign)[a_child] = bot_;
      } else {
        *assign = b_assign;
      }
    }
    return std::min(a_cost, b_cost);
  }

  std::int64_t demand_dp(const ClassInfo& c, int s, std::vector<int>* assign) const {
    std::vector<int> tracked;
    std::vector<int> need;
    for (int j = 0; j < k_; ++j) {
      if (spec_.mu[s][j] > 0) {
        tracked.push_back(j);
        need.push_back(spec_.mu[s][j]);
      }
    }
    int m = static_cast<int>(tracked.size());
    std::vector<int> stride(m + 1, 1);
    for (int i = 0; i < m; ++i) stride[i + 1] = stride[i] * (need[i] + 1);
    int states = stride[m];
    int full = 0;
    for (int i = 0; i < m; ++i) full += need[i] * stride[i];
    int n = static_cast<int>(c.kids.size());
    std::vector<bool> is_tracked(slots_, false);
    for (int j : tracked) is_tracked[j] = true;
    std::vector<std::vector<std::int64_t>> table;
    std::vector<std::int64_t> cur(states, kInf), nxt(states);
    cur[0] = 0;
    if (assign) table.push_back(cur);
    auto inc = [&](int st, int ti) {
      int digit = (st / stride[ti]) % (need[ti] + 1);
      return digit < need[ti] ? st + stride[ti] : st;
    };
    for (int i = 0; i < n; ++i) {
      std::int64_t other = kInf;
      for (int t = 0; t < slots_; ++t) {
        if (!is_tracked[t]) other = std::min(other, child_cost(c.kids[i], t, 0));
      }
      std::vector<std::int64_t> opt(m);
      for (int ti = 0; ti < m; ++ti) opt[ti] = child_cost(c.kids[i], tracked[ti], 0);
      std::fill(nxt.begin(), nxt.end(), kInf);
      for (int st = 0; st < states; ++st) {
        if (cur[st] >= kInf) continue;
        nxt[st] = std::min(nxt[st], sat_add(cur[st], other));
        for (int ti = 0; ti < m; ++ti) {
          int ns = inc(st, ti);
          nxt[ns] = std::min(nxt[ns], sat_add(cur[st], opt[ti]));
        }
      }
      std::swap(cur, nxt);
      if (assign) table.push_back(cur);
    }
    std::int64_t result = cur[full];
    if (assign && result < kInf) {
      assign->assign(n, -1);
      int st = full;
      for (int i = n - 1; i >= 0; --i) {
        std::int64_t target = table[i + 1][st];
        bool done = false;
        for (int ps = 0; ps < states && !done; ++ps) {
          if (table[i][ps] >= kInf) continue;
          if (ps == st) {
            for (int t = 0; t < slots_ && !done; ++t) {
              if (is_tracked[t]) continue;
              if (sat_add(table[i][ps], child_cost(c.kids[i], t, 0)) == target) {
                (*assign)[i] = t;
                done = true;
              }
            }
          }
          for (int ti = 0; ti < m && !done; ++ti) {
            if (inc(ps, ti) != st) continue;
            if (sat_add(table[i][ps], child_cost(c.kids[i], tracked[ti], 0)) == target) {
              (*assign)[i] = tracked[ti];
              st = ps;
              done = true;
            }
          }
        }
      }
    }
    return result;
  }

  const std::vector<int>& assignment(int id, int s, int pb) {
    auto key = std::make_tuple(id, s, pb);
    auto it = assign_memo_.find(key);
    if (it != assign_memo_.end()) return it->second;
    std::vector<int> a;
    solve(classes_[id], s, pb, &a);
    return assign_memo_.emplace(key, std::move(a)).first->second;
  }

  int slots() const { return slots_; }
  int bottom_slot() const { return bot_; }

 private:
  void compute(int id) {
    ClassInfo& c = classes_[id];
    c.f.assign(slots_ * 2, kInf);
    for (int s = 0; s < slots_; ++s) {
      if (!in_domain(c, s)) continue;
      std::int64_t own = s == c.orig ? 0 : 1;
      for (int pb = 0; pb < 2; ++pb) c.f[s * 2 + pb] = sat_add(own, solve(c, s, pb, nullptr));
    }
  }

  const PropagationSpec& spec_;
  bool generalized_;
  int k_;
  int bot_;
  int slots_;
  Label l0_;
  std::map<std::vector<int>, int> ids_;
  std::vector<ClassInfo> classes_;
  std::map<std::tuple<int, int, int>, std::vector<int>> assign_memo_;
};

}  // namespace

std::optional<MendResult> propagation_min_mend(const PropagationSpec& spec, bool generalized,
                                               const RootedTree& t, const PartialLabeling& lambda,
                                               Vertex v,
                                               std::optional<std::span<const Vertex>> region) {
  spec.validate();
  std::size_t n = t.n();
  if (lambda.size() != n) throw ArgumentError("labeling size does not match tree");
  if (!lambda.is_hole(v)) throw PreconditionError("vertex " + std::to_string(v) + " is not a hole");
  TreeDp dp(spec, generalized);

  std::vector<char> variable(n, region ? 0 : 1);
  std::vector<char> in_r(n, region ? 0 : 1);
  std::vector<Vertex> order;  // children before parents
  if (region) {
    bool has_v = false;
    for (Vertex w : *region) {
      variable[w] = 1;
      has_v = has_v || w == v;
    }
    if (!has_v) throw PreconditionError("contains_mend: the hole must belong to W");
    std::vector<Vertex> r;
    auto add = [&](Vertex x) {
      if (!in_r[x]) {
        in_r[x] = 1;
        r.push_back(x);
      }
    };
    for (Vertex w : *region) {
      add(w);
      if (t.parent(w) != kNoVertex) add(t.parent(w));
      for (Vertex c : t.children(w)) add(c);
    }
    std::sort(r.begin(), r.end(), [&](Vertex a, Vertex b) {
      return t.depth(a) != t.depth(b) ? t.depth(a) > t.depth(b) : a < b;
    });
    order = std::move(r);
  } else {
    order.assign(t.order().rbegin(), t.order().rend());
  }

  std::vector<int> cls(n, -1);
  std::vector<int> key;
  auto code_of = [&](Vertex c) { return in_r[c] ? cls[c] : -(dp.slot_of(lambda[c]) + 1); };
  for (Vertex x : order) {
    ClassInfo info;
    info.variable = variable[x] != 0;
    info.is_hole = x == v;
    info.orig = dp.slot_of(lambda[x]);
    info.tree_root = t.parent(x) == kNoVertex;
    info.nchildren = t.child_count(x);
    for (Vertex c : t.children(x)) info.kids.push_back(code_of(c));
    std::sort(info.kids.begin(), info.kids.end());
    key.assign({info.variable ? 1 : 0, info.is_hole ? 1 : 0, info.orig, info.tree_root ? 1 : 0,
                info.nchildren});
    key.insert(key.end(), info.kids.begin(), info.kids.end());
    cls[x] = dp.intern(key, std::move(info));
  }

  MendResult res;
  res.witness = lambda;
  std::int64_t total = 0;
  std::vector<std::pair<Vertex, int>> stack;  // (vertex, parent-⊥ flag)
  std::vector<int> chosen(n, -1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Vertex x = *it;
    Vertex p = t.parent(x);
    if (p != kNoVertex && in_r[p]) continue;
    int pb = (p != kNoVertex && lambda[p] == kBottom) ? 1 : 0;
    const ClassInfo& c = dp.cls(cls[x]);
    int best = -1;
    for (int s = 0; s < dp.slots(); ++s) {
      if (c.f[s * 2 + pb] < kInf && (best < 0 || c.f[s * 2 + pb] < c.f[best * 2 + pb])) best = s;
    }
    if (best < 0) return std::nullopt;
    total += c.f[best * 2 + pb];
    chosen[x] = best;
    stack.emplace_back(x, pb);
  }
  while (!stack.empty()) {
    auto [x, pb] = stack.back();
    stack.pop_back();
    int s = chosen[x];
    res.witness[x] = dp.label_of(s);
    const std::vector<int>& a = dp.assignment(cls[x], s, pb);
    std::vector<Vertex> kids(t.children(x).begin(), t.children(x).end());
    std::stable_sort(kids.begin(), kids.end(),
                     [&](Vertex a1, Vertex b1) { return code_of(a1) < code_of(b1); });
    int cpb = s == dp.bottom_slot() ? 1 : 0;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (!in_r[kids[i]]) continue;
      chosen[kids[i]] = a[i];
      stack.emplace_back(kids[i], cpb);
    }
  }
  res.volume = static_cast<std::int64_t>(hamming_diff(lambda, res.witness).size());
  if (res.volume != total) throw Error("tree DP witness disagrees with its optimum");
  return res;
}

MendResult exact_min_volume_tree_dp(const PropagationSpec& spec, const RootedTree& t,
                                    const PartialLabeling& lambda, Vertex v) {
  auto r = propagation_min_mend(spec, true, t, lambda, v);
  if (!r) throw Infeasible("no mend exists for this instance");
  return std::move(*r);
}

}  // namespace mendlab
