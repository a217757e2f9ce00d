#pragma once

#include <map>
#include <vector>

#include "forestcalc/rational.hpp"

namespace forestcalc {

/// Gaussian moments <prod_i phi_i^{c_i}> for a fixed covariance, by the
/// pairing recursion: pair one copy of the first field with every other
/// field copy in turn. Results are memoised on the exponent vector, so one
/// instance should be reused for all moments of the same covariance.
/// T is Rational or MinExpression (anything with += , * T and * Rational).
template <typename T>
class WickMoments {
public:
  /// entries[i][j] is the covariance entry; only i <= j is read.
  explicit WickMoments(std::vector<std::vector<T>> entries) : c_(std::move(entries)) {}

  int size() const { return static_cast<int>(c_.size()); }

  T operator()(std::vector<int> counts) {
    int total = 0;
    for (int c : counts) total += c;
    if (total % 2) return T();
    return moment(counts);
  }

private:
  const T& entry(int i, int j) const { return i <= j ? c_[i][j] : c_[j][i]; }

  T moment(std::vector<int>& counts) {
    int first = 0;
    while (first < size() && counts[first] == 0) ++first;
    if (first == size()) return T(Rational(1));
    auto it = memo_.find(counts);
    if (it != memo_.end()) return it->second;

    T acc;
    std::vector<int> rest = counts;
    --rest[first];
    for (int j = first; j < size(); ++j) {
      if (rest[j] == 0) continue;
      const T& cij = entry(first, j);
      if (cij == T()) continue;
      Rational mult = rest[j];
      --rest[j];
      acc += cij * moment(rest) * mult;
      ++rest[j];
    }
    return memo_.emplace(counts, std::move(acc)).first->second;
  }

  std::vector<std::vector<T>> c_;
  std::map<std::vector<int>, T> memo_;
};

} // namespace forestcalc
