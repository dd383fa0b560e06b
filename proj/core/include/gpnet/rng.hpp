#ifndef GPNET_RNG_HPP
#define GPNET_RNG_HPP

#include <cmath>
#include <cstdint>

namespace gpnet {

// SplitMix64: counter-based 64-bit generator. Streams derived with
// derive() are statistically independent, which gives deterministic
// per-replicate streams regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1).
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; fully determined by the uint64 stream.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.28318530717958647692 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Derived stream for a sub-task (e.g. one replicate of a study).
  static Rng derive(std::uint64_t master_seed, std::uint64_t stream_id) {
    Rng mix(master_seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
    return Rng(mix.next());
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gpnet

#endif
