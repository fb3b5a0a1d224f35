#pragma once

#include <span>
#include <string>
#include <vector>

#include "mendlab/core.hpp"

namespace mendlab {

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& name(Label l) const { return labels_.at(l); }
  // Throws SpecError for unknown names.
  Label index_of(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<std::string>& labels() const { return labels_; }

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> labels_;
};

struct PartialLabeling {
  Alphabet alphabet;
  std::vector<Label> assignment;  // kBottom encodes an unlabeled vertex

  PartialLabeling() = default;
  PartialLabeling(Alphabet a, std::size_t n, Label fill = kBottom)
      : alphabet(std::move(a)), assignment(n, fill) {}

  std::size_t size() const { return assignment.size(); }
  Label operator[](Vertex v) const { return assignment[v]; }
  Label& operator[](Vertex v) { return assignment[v]; }
  bool is_hole(Vertex v) const { return assignment[v] == kBottom; }
  bool complete() const;
  std::vector<Vertex> holes() const;

  bool operator==(const PartialLabeling&) const = default;
};

PartialLabeling restrict_labeling(const PartialLabeling& lambda, std::span<const Vertex> s);
std::vector<Vertex> hamming_diff(const PartialLabeling& a, const PartialLabeling& b);

}  // namespace mendlab
