#include "mendlab/lcl.hpp"

#include <algorithm>
#include <unordered_map>

namespace mendlab {

LocalView::LocalView(const Graph& g, const PartialLabeling& lambda, Vertex center, int radius)
    : radius_(radius), rooted_(g.has_parent_map()) {
  Vertex src[1] = {center};
  auto entries = ball(g, std::span<const Vertex>(src, 1), radius);
  int m = static_cast<int>(entries.size());
  global_.resize(m);
  dist_.resize(m);
  degree_.resize(m);
  labels_.resize(m);
  parent_.resize(m);
  std::unordered_map<Vertex, int> local;
  local.reserve(m * 2);
  for (int i = 0; i < m; ++i) {
    global_[i] = entries[i].v;
    dist_[i] = entries[i].dist;
    local.emplace(entries[i].v, i);
  }
  arc_off_.assign(m + 1, 0);
  for (int i = 0; i < m; ++i) {
    Vertex x = global_[i];
    degree_[i] = g.degree(x);
    labels_[i] = lambda[x];
    int port = 0;
    for (const Incidence& inc : g.incident(x)) {
      auto it = local.find(inc.to);
      if (it != local.end()) arcs_.push_back({it->second, port, g.direction_from(inc.edge, x)});
      ++port;
    }
    arc_off_[i + 1] = static_cast<std::uint32_t>(arcs_.size());
    Vertex p = g.parent(x);
    if (p == kNoVertex) {
      parent_[i] = kNoParent;
    } else {
      auto it = local.find(p);
      parent_[i] = it == local.end() ? kParentOutside : it->second;
    }
  }
}

std::vector<int> LocalView::children(int i) const {
  std::vector<int> out;
  for (const ViewArc& a : arcs(i)) {
    if (parent_[a.to] == i) out.push_back(a.to);
  }
  return out;
}

bool LocalView::has_bottom() const {
  return std::any_of(labels_.begin(), labels_.end(), [](Label l) { return l == kBottom; });
}

int LocalView::local_of(Vertex v) const {
  for (int i = 0; i < size(); ++i) {
    if (global_[i] == v) return i;
  }
  return -1;
}

std::vector<int> LocalView::shape_key() const {
  std::vector<int> key;
  key.reserve(4 + size() * 4 + arcs_.size() * 3);
  key.push_back(radius_);
  key.push_back(rooted_ ? 1 : 0);
  key.push_back(size());
  for (int i = 0; i < size(); ++i) {
    key.push_back(dist_[i]);
    key.push_back(degree_[i]);
    key.push_back(parent_[i]);
    key.push_back(static_cast<int>(arc_off_[i + 1] - arc_off_[i]));
    for (const ViewArc& a : arcs(i)) {
      key.push_back(a.to);
      key.push_back(a.port);
      key.push_back(a.dir);
    }
  }
  return key;
}

LclProblem::LclProblem(std::string name, Alphabet alphabet, int radius, Verifier verifier)
    : name_(std::move(name)), alphabet_(std::move(alphabet)), radius_(radius),
      verifier_(std::move(verifier)) {
  if (radius_ < 0) throw SpecError("verifier radius must be nonnegative");
}

bool happy_at(const LclProblem& p, const Graph& g, const PartialLabeling& lambda, Vertex v) {
  return p.happy(LocalView(g, lambda, v, p.radius()));
}

VerifyResult verify_full(const LclProblem& p, const Graph& g, const PartialLabeling& lambda) {
  if (!lambda.complete()) {
    throw PreconditionError("verify_full requires a complete labeling; use verify_partial");
  }
  return verify_partial(p, g, lambda);
}

VerifyResult verify_partial(const LclProblem& p, const Graph& g, const PartialLabeling& lambda) {
  if (lambda.size() != g.n()) throw ArgumentError("labeling size does not match graph");
  for (std::size_t v = 0; v < g.n(); ++v) {
    if (!happy_at(p, g, lambda, static_cast<Vertex>(v))) return {false, static_cast<Vertex>(v)};
  }
  return {};
}

std::vector<Vertex> unhappy_near(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                                 std::span<const Vertex> changed) {
  std::vector<Vertex> out;
  for (Vertex x : neighborhood(g, changed, p.radius())) {
    if (!happy_at(p, g, lambda, x)) out.push_back(x);
  }
  return out;
}

MendCheck is_mend(const LclProblem& p, const Graph& g, const PartialLabeling& lambda,
                  const PartialLabeling& lambda2, Vertex v) {
  if (lambda.size() != g.n() || lambda2.size() != g.n()) {
    throw ArgumentError("labeling size does not match graph");
  }
  if (!lambda.is_hole(v)) throw PreconditionError("is_mend: vertex " + std::to_string(v) + " is not a hole");
  MendCheck out;
  out.valid = true;
  for (std::size_t x = 0; x < g.n(); ++x) {
    if (!happy_at(p, g, lambda2, static_cast<Vertex>(x))) {
      out.valid = false;
      out.violations.emplace_back(static_cast<Vertex>(x), "unhappy");
    }
  }
  out.progress = !lambda2.is_hole(v);
  if (!out.progress) out.violations.emplace_back(v, "hole left unlabeled");
  for (std::size_t x = 0; x < g.n(); ++x) {
    if (!lambda.is_hole(static_cast<Vertex>(x)) && lambda2.is_hole(static_cast<Vertex>(x))) {
      out.progress = false;
      out.violations.emplace_back(static_cast<Vertex>(x), "labeled vertex erased");
    }
  }
  return out;
}

int VerdictCache::shape_of(const LocalView& view) {
  double cells = 1;
  double base = static_cast<double>(p_.alphabet().size() + 1);
  for (int i = 0; i < view.size(); ++i) cells *= base;
  if (cells > static_cast<double>(1 << 22)) return -1;
  auto [it, inserted] = ids_.emplace(view.shape_key(), static_cast<int>(tables_.size()));
  if (inserted) tables_.emplace_back(static_cast<std::size_t>(cells), std::int8_t{-1});
  return it->second;
}

bool VerdictCache::happy(int shape, const LocalView& view) {
  if (shape < 0) {
    ++evaluations_;
    return p_.happy(view);
  }
  std::size_t base = p_.alphabet().size() + 1;
  std::size_t idx = 0;
  for (int i = view.size() - 1; i >= 0; --i) idx = idx * base + static_cast<std::size_t>(view.label(i) + 1);
  std::int8_t& cell = tables_[shape][idx];
  if (cell < 0) {
    ++evaluations_;
    cell = p_.happy(view) ? 1 : 0;
  }
  return cell == 1;
}

std::string label_name(const Alphabet& a, Label l) {
  return l == kBottom ? std::string("⊥") : a.name(l);
}

}  // namespace mendlab
