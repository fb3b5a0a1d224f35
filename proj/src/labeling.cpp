#include "mendlab/labeling.hpp"

#include <algorithm>
#include <unordered_set>

namespace mendlab {

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw SpecError("alphabet must not be empty");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw SpecError("duplicate label '" + l + "'");
  }
}

Label Alphabet::index_of(const std::string& name) const {
  auto it = std::find(labels_.begin(), labels_.end(), name);
  if (it == labels_.end()) throw SpecError("unknown label '" + name + "'");
  return static_cast<Label>(it - labels_.begin());
}

bool Alphabet::contains(const std::string& name) const {
  return std::find(labels_.begin(), labels_.end(), name) != labels_.end();
}

bool PartialLabeling::complete() const {
  return std::none_of(assignment.begin(), assignment.end(), [](Label l) { return l == kBottom; });
}

std::vector<Vertex> PartialLabeling::holes() const {
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] == kBottom) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

PartialLabeling restrict_labeling(const PartialLabeling& lambda, std::span<const Vertex> s) {
  PartialLabeling out(lambda.alphabet, lambda.size());
  for (Vertex v : s) out[v] = lambda[v];
  return out;
}

std::vector<Vertex> hamming_diff(const PartialLabeling& a, const PartialLabeling& b) {
  if (a.size() != b.size() || !(a.alphabet == b.alphabet)) {
    throw ArgumentError("hamming_diff: labelings live on different hosts or alphabets");
  }
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (a.assignment[v] != b.assignment[v]) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

}  // namespace mendlab
