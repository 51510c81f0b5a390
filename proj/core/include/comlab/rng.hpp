#ifndef COMLAB_RNG_HPP
#define COMLAB_RNG_HPP

#include <cstdint>

namespace comlab {

// Seeded 64-bit splitmix generator. Used everywhere randomness is needed so
// that identical seeds give bit-identical results on any platform (std::
// distributions are implementation-defined and would break that guarantee).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Modulo bias is below 2^-50 for desk-scale n.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace comlab

#endif
