#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace iontomo {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from (seed, stream id).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

// Seeded generator with bit-reproducible output across platforms: mt19937_64
// (fully specified by the standard) plus hand-rolled variate transforms, since
// std::*_distribution sequences are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Independent child stream; derived from the original seed, not engine state.
  Rng child(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal, Box-Muller (two uniforms per call)
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // one multinomial draw of n shots over probabilities p (sum ~ 1)
  std::vector<long long> multinomial(const std::vector<double>& p, long long n) {
    std::vector<double> cum(p.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      acc += p[k];
      cum[k] = acc;
    }
    cum.back() = 1.0;  // guard against round-off at the top
    std::vector<long long> counts(p.size(), 0);
    for (long long s = 0; s < n; ++s) {
      const double u = uniform();
      std::size_t k = 0;
      while (k + 1 < cum.size() && u >= cum[k]) ++k;
      ++counts[k];
    }
    return counts;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace iontomo
