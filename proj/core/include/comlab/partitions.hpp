#ifndef COMLAB_PARTITIONS_HPP
#define COMLAB_PARTITIONS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace comlab {

// Number of set partitions of an n-element set, saturating at cap+1 so
// callers can test "Bell(n) > cap" without overflow.
std::uint64_t bell_number_capped(int n, std::uint64_t cap);

// Visits every set partition of {0..n-1} in lexicographic order of the
// restricted growth string (rgs[k] = block id of element k, rgs[0] = 0).
// The visitor receives the rgs and the number of blocks.
void for_each_set_partition(
    int n, const std::function<void(std::span<const int>, int)>& fn);

// Materializes blocks of `elements` from a restricted growth string over
// positions. Blocks come out ordered by their smallest element.
std::vector<std::vector<int>> blocks_from_rgs(std::span<const int> rgs,
                                              std::span<const int> elements);

}  // namespace comlab

#endif
