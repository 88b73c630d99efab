#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace scrl {

// Deterministic splitmix64 stream. All randomness in the project flows from a
// root seed through Rng::derive so that components draw from independent,
// reproducible sub-streams.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller; one draw per call
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // [0, n)
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

  // Named sub-stream seed: hashes (root, tag, a, b) into a fresh seed.
  static uint64_t derive(uint64_t root, std::string_view tag, uint64_t a = 0,
                         uint64_t b = 0) {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](uint64_t v) {
      h ^= v;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    };
    mix(root);
    for (char c : tag) mix(static_cast<uint64_t>(static_cast<unsigned char>(c)));
    mix(0x517cc1b727220a95ULL + a);
    mix(0x6c62272e07bb0142ULL + b);
    Rng warm(h);
    warm.next_u64();
    return warm.next_u64();
  }

 private:
  uint64_t state_;
};

}  // namespace scrl
