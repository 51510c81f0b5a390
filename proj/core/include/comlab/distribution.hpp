#ifndef COMLAB_DISTRIBUTION_HPP
#define COMLAB_DISTRIBUTION_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace comlab {

// Global numeric conventions: all information quantities are in bits
// (log base 2) except the LMSR module, which works in nats. Normalization
// checks use norm_tolerance; value comparisons use equality_tolerance.
inline constexpr double norm_tolerance = 1e-12;
inline constexpr double equality_tolerance = 1e-9;

// A probability distribution over the outcome space, indexed like the
// structure's outcome labels.
struct OutcomeDistribution {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
};

// -sum p log2 p with 0 log 0 = 0.
inline double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h < 0.0 ? 0.0 : h;
}

inline double entropy_bits(const OutcomeDistribution& p) {
  return entropy_bits(std::span<const double>(p.probs));
}

// sum p log2(p/q). A support violation (p > 0 where q = 0) yields +infinity,
// the distinguished "infinite divergence" value, not an error.
inline double kl_divergence_bits(std::span<const double> p,
                                 std::span<const double> q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
      d += p[i] * std::log2(p[i] / q[i]);
    }
  }
  return d < 0.0 ? 0.0 : d;  // clamp float noise; KL is nonnegative
}

inline double kl_divergence_bits(const OutcomeDistribution& p,
                                 const OutcomeDistribution& q) {
  return kl_divergence_bits(std::span<const double>(p.probs),
                            std::span<const double>(q.probs));
}

// Total variation distance, (1/2) sum |p - q|, in [0, 1].
inline double tv_distance(std::span<const double> p,
                          std::span<const double> q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

inline double tv_distance(const OutcomeDistribution& p,
                          const OutcomeDistribution& q) {
  return tv_distance(std::span<const double>(p.probs),
                     std::span<const double>(q.probs));
}

// Binary entropy in bits.
inline double binary_entropy_bits(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace comlab

#endif
