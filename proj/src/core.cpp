#include "mendlab/core.hpp"

#include <atomic>
#include <cstdlib>

namespace mendlab {

namespace {

std::size_t initial_cap() {
  if (const char* env = std::getenv("MENDLAB_MAX_N")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 10'000'000;
}

std::atomic<std::size_t>& cap_ref() {
  static std::atomic<std::size_t> cap{initial_cap()};
  return cap;
}

}  // namespace

std::size_t max_vertices() { return cap_ref().load(); }

void set_max_vertices(std::size_t cap) { cap_ref().store(cap); }

void check_size(std::size_t n, const std::string& what) {
  if (n > max_vertices()) {
    throw InstanceTooLarge(what + ": " + std::to_string(n) + " vertices exceeds cap " +
                           std::to_string(max_vertices()));
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::result_type Rng::operator()() {
  std::uint64_t c = counter_++;
  return mix64(mix64(seed_) ^ (c * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // rejection sampling keeps the draw exactly uniform
  std::uint64_t limit = max() - (max() % bound + 1) % bound;
  for (;;) {
    std::uint64_t x = (*this)();
    if (x <= limit) return x % bound;
  }
}

double Rng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

}  // namespace mendlab
