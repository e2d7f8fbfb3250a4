#pragma once

// Golden-section minimization and a tiny deterministic RNG. The RNG is
// hand-rolled (splitmix64 bits -> [0,1) doubles) so that seeded runs are
// bit-identical across standard libraries.

#include <cstdint>
#include <utility>

namespace vsheet {

struct GoldenResult {
  double x;
  double value;
};

// Minimize f on [a, b]; f need only be unimodal near the minimum for full
// accuracy, otherwise this still converges to a local minimum inside [a, b].
template <typename F>
GoldenResult golden_minimize(F&& f, double a, double b, double xtol, int max_iter = 200) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return (f1 <= f2) ? GoldenResult{x1, f1} : GoldenResult{x2, f2};
}

// splitmix64: deterministic across platforms, good enough for test sampling.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

}  // namespace vsheet
