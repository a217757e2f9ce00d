#include "forestcalc/combinatorics.hpp"

#include "forestcalc/errors.hpp"

namespace forestcalc {

void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& visit) {
  if (n < 0) throw ValidationError("set partitions need n >= 0");
  if (n == 0) {
    visit({});
    return;
  }
  std::vector<int> label(n, 0);
  std::function<void(int, int)> grow = [&](int i, int blocks) {
    if (i == n) {
      SetPartition p(blocks);
      for (int v = 0; v < n; ++v) p[label[v]].push_back(v);
      visit(p);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      label[i] = b;
      grow(i + 1, std::max(blocks, b + 1));
    }
  };
  grow(1, 1);
}

std::vector<SetPartition> set_partitions(int n) {
  std::vector<SetPartition> out;
  for_each_set_partition(n, [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

void for_each_composition(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  if (n < 0 || k < 0) throw ValidationError("compositions need n, k >= 0");
  std::vector<int> parts(n, 0);
  if (n == 0) {
    if (k == 0) visit(parts);
    return;
  }
  std::function<void(int, int)> fill = [&](int i, int left) {
    if (i == n - 1) {
      parts[i] = left;
      visit(parts);
      return;
    }
    for (int v = left; v >= 0; --v) {
      parts[i] = v;
      fill(i + 1, left - v);
    }
  };
  fill(0, k);
}

} // namespace forestcalc
