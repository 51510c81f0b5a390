#ifndef COMLAB_TESTS_JOINT_TABLE_HPP
#define COMLAB_TESTS_JOINT_TABLE_HPP

#include <cmath>
#include <map>
#include <vector>

#include "comlab/structure.hpp"

namespace comlab::testing {

// Test-side oracle: an explicit joint distribution over discrete variables
// with information functionals computed straight from marginal tables. Kept
// independent of the library's posterior/rectangle machinery on purpose so
// the two routes can be compared.
class JointTable {
 public:
  JointTable(std::vector<int> sizes, std::vector<double> probs)
      : sizes_(std::move(sizes)), probs_(std::move(probs)) {}

  // Variables: agents 0..n-1, then the target as variable n.
  static JointTable from_structure(const InformationStructure& s) {
    std::vector<int> sizes;
    for (int i = 0; i < s.agent_count(); ++i) sizes.push_back(s.signal_space_size(i));
    sizes.push_back(s.outcome_count());
    std::vector<double> probs;
    s.for_each_cell_in(s.full_space(),
                       [&](std::span<const int>, double w,
                           std::span<const double> row) {
                         for (double p : row) probs.push_back(w * p);
                       });
    return JointTable(std::move(sizes), std::move(probs));
  }

  double entropy(const std::vector<int>& vars) const {
    double h = 0.0;
    for (const auto& [key, p] : marginal(vars)) {
      if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
  }

  double mutual_info(const std::vector<int>& a,
                     const std::vector<int>& b) const {
    return entropy(a) + entropy(b) - entropy(merge(a, b));
  }

  double cond_mutual_info(const std::vector<int>& a, const std::vector<int>& b,
                          const std::vector<int>& c) const {
    return entropy(merge(a, c)) + entropy(merge(b, c)) - entropy(c) -
           entropy(merge(merge(a, b), c));
  }

 private:
  static std::vector<int> merge(std::vector<int> a, const std::vector<int>& b) {
    for (int v : b) a.push_back(v);
    return a;
  }

  std::map<std::vector<int>, double> marginal(
      const std::vector<int>& vars) const {
    std::map<std::vector<int>, double> out;
    std::vector<int> tuple(sizes_.size(), 0);
    for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
      std::size_t rem = flat;
      for (std::size_t i = sizes_.size(); i-- > 0;) {
        tuple[i] = static_cast<int>(rem % sizes_[i]);
        rem /= sizes_[i];
      }
      std::vector<int> key;
      for (int v : vars) key.push_back(tuple[v]);
      out[key] += probs_[flat];
    }
    return out;
  }

  std::vector<int> sizes_;
  std::vector<double> probs_;
};

}  // namespace comlab::testing

#endif
