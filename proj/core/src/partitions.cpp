#include "comlab/partitions.hpp"

#include <algorithm>

namespace comlab {

std::uint64_t bell_number_capped(int n, std::uint64_t cap) {
  // Bell triangle with saturating adds.
  std::vector<std::uint64_t> row{1};
  std::uint64_t bell = 1;
  const std::uint64_t sat = cap + 1;
  for (int i = 1; i < n; ++i) {
    std::vector<std::uint64_t> next;
    next.reserve(row.size() + 1);
    next.push_back(bell);
    for (std::uint64_t v : row) {
      std::uint64_t s = next.back() + v;
      if (s > sat || s < next.back()) s = sat;
      next.push_back(s);
    }
    row = std::move(next);
    bell = row.back();
    if (bell >= sat) return sat;
  }
  return n <= 0 ? 1 : bell;
}

void for_each_set_partition(
    int n, const std::function<void(std::span<const int>, int)>& fn) {
  if (n <= 0) return;
  std::vector<int> rgs(n, 0);
  std::vector<int> max_prefix(n, 0);  // max of rgs[0..k-1]
  for (;;) {
    int blocks = 0;
    for (int v : rgs) blocks = std::max(blocks, v + 1);
    fn(std::span<const int>(rgs), blocks);

    int k = n - 1;
    while (k > 0) {
      const int limit = max_prefix[k] + 1;
      if (rgs[k] < limit) break;
      --k;
    }
    if (k == 0) return;
    ++rgs[k];
    for (int j = k + 1; j < n; ++j) {
      rgs[j] = 0;
      max_prefix[j] = std::max(max_prefix[j - 1], rgs[j - 1]);
    }
  }
}

std::vector<std::vector<int>> blocks_from_rgs(std::span<const int> rgs,
                                              std::span<const int> elements) {
  int blocks = 0;
  for (int v : rgs) blocks = std::max(blocks, v + 1);
  std::vector<std::vector<int>> out(blocks);
  for (std::size_t k = 0; k < rgs.size(); ++k) {
    out[rgs[k]].push_back(elements[k]);
  }
  return out;
}

}  // namespace comlab
