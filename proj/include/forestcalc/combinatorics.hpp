#pragma once

#include <functional>
#include <vector>

namespace forestcalc {

using Block = std::vector<int>;
using SetPartition = std::vector<Block>;

/// Visits every set partition of {0..n-1} once (restricted growth order).
/// Blocks are sorted and listed by their least element.
void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& visit);
std::vector<SetPartition> set_partitions(int n);

/// Visits every vector of n nonnegative integers summing to k.
void for_each_composition(int n, int k, const std::function<void(const std::vector<int>&)>& visit);

} // namespace forestcalc
