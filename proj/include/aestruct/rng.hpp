#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace aestruct {

/// SplitMix64: deterministic, splittable 64-bit generator. Identical seeds give
/// identical streams on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Independent child stream; advances this generator once.
  SplitMix64 split() { return SplitMix64(next() ^ 0x5851f42d4c957f2dULL); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// `count` points drawn uniformly per coordinate from `domain` intervals.
inline std::vector<std::vector<double>> sample_points(std::span<const std::pair<double, double>> domain,
                                                      std::size_t count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> points(count, std::vector<double>(domain.size()));
  for (auto& p : points) {
    for (std::size_t i = 0; i < domain.size(); ++i) p[i] = rng.uniform(domain[i].first, domain[i].second);
  }
  return points;
}

}  // namespace aestruct
