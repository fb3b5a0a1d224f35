#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace mendlab {

using Vertex = std::int32_t;
using Label = std::int32_t;

inline constexpr Vertex kNoVertex = -1;
inline constexpr Label kBottom = -1;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class PolicyViolation : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class ModelInapplicable : public Error {
 public:
  using Error::Error;
};

// Vertex-count cap for generators; MENDLAB_MAX_N overrides the default of 1e7.
std::size_t max_vertices();
void set_max_vertices(std::size_t cap);
void check_size(std::size_t n, const std::string& what);

// Counter-based generator: value i of stream `seed` is splitmix64(seed, i).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  double uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace mendlab
