#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <string_view>

namespace rotsym {

// All randomness in the library flows through an explicitly seeded Rng.
// Generators are single-owner: parallel work derives independent child
// seeds via derive_seed instead of sharing one instance.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return unit_(gen_); }  // [0, 1)

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() { return normal_(gen_); }

  Eigen::Vector3d normal3() { return {normal(), normal(), normal()}; }

  std::size_t index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return d(gen_);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// FNV-1a over the tag, folded with the master seed. Stable across
// platforms so per-class generation is order-independent.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t h = 14695981039346656037ull ^ master;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h ^= master >> 32;
  h *= 1099511628211ull;
  return h;
}

}  // namespace rotsym
