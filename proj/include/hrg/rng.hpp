#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

namespace hrg {

// 64-bit FNV-1a over a stream name. Named streams keep seed derivation
// readable at call sites: derive_seed(seed, {stream_tag("removal"), i}).
constexpr std::uint64_t stream_tag(std::string_view name) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Child-stream seed: the root seed folded with each path component through
// the splitmix64 finalizer. All randomness in the project flows from one
// root seed through this function, which is what makes whole runs
// reproducible from a single --seed.
inline std::uint64_t derive_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(root + 0x9e3779b97f4a7c15ull);
  for (std::uint64_t p : path)
    s = mix64(s ^ mix64(p + 0x9e3779b97f4a7c15ull));
  return s;
}

// Deterministic generator: mt19937_64 (exactly specified by the standard)
// plus hand-rolled samplers, because the std distribution objects are
// implementation-defined and would break bit-reproducibility across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t min = (-n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= min) return r % n;
    }
  }

  long long uniform_int(long long n) {
    return static_cast<long long>(uniform_below(static_cast<std::uint64_t>(n)));
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Number of failures before the first success; p <= 0 never succeeds.
  long long geometric(double p) {
    if (p >= 1.0) return 0;
    if (p <= 0.0) return std::numeric_limits<long long>::max() / 2;
    double u = next_double();
    double g = std::floor(std::log1p(-u) / std::log1p(-p));
    if (g >= static_cast<double>(std::numeric_limits<long long>::max() / 2))
      return std::numeric_limits<long long>::max() / 2;
    return static_cast<long long>(g);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[uniform_below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

// Visits the indices of Bernoulli(p) successes among {0,...,count-1} in
// increasing order, skipping runs of failures geometrically.
template <class F>
void for_each_bernoulli_hit(long long count, double p, Rng& rng, F&& visit) {
  if (p <= 0.0 || count <= 0) return;
  if (p >= 1.0) {
    for (long long k = 0; k < count; ++k) visit(k);
    return;
  }
  long long k = rng.geometric(p);
  while (k < count) {
    visit(k);
    long long skip = rng.geometric(p);
    if (skip > count - k) break;  // avoid overflow near the end
    k += 1 + skip;
  }
}

}  // namespace hrg
