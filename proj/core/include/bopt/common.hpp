#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bopt {

// splitmix64. All seeded randomness in the library goes through this
// generator so that results do not depend on the platform's std::random
// distributions.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic child seed for a named stream of a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = base;
  std::uint64_t mixed = splitmix64(s) ^ (stream * 0xd1342543de82ef95ULL + 0x9e3779b97f4a7c15ULL);
  return splitmix64(mixed);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n), bias-free via rejection.
  std::size_t next_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::next_index: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_index(i)]);
    }
  }

  // First n entries of a random permutation of 0..total-1.
  std::vector<std::size_t> sample_without_replacement(std::size_t total, std::size_t n) {
    if (n > total) throw std::invalid_argument("sample_without_replacement: n > total");
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      std::swap(idx[i], idx[i + next_index(total - i)]);
    }
    idx.resize(n);
    return idx;
  }

 private:
  std::uint64_t state_;
};

}  // namespace bopt
