#include "forestcalc/mayer.hpp"

#include "forestcalc/errors.hpp"
#include "forestcalc/forest.hpp"
#include "forestcalc/limits.hpp"
#include "forestcalc/min_expression.hpp"
#include "forestcalc/parallel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

namespace forestcalc {

bool compatible(const Polymer& x, const Polymer& y) {
  for (int a : x)
    if (std::find(y.begin(), y.end(), a) != y.end()) return false;
  return true;
}

OverlapPattern OverlapPattern::of(const std::vector<Polymer>& sequence) {
  if (sequence.empty()) throw ValidationError("a polymer sequence needs at least one element");
  require_within(static_cast<int>(sequence.size()), limits().mayer, "polymers in a connected coefficient");
  OverlapPattern p;
  p.k = static_cast<int>(sequence.size());
  for (const auto& l : all_links(p.k))
    if (!compatible(sequence[l.a], sequence[l.b])) p.overlaps |= 1u << link_index(p.k, l);
  return p;
}

bool OverlapPattern::overlap(int i, int j) const {
  if (i == j) return true;
  return overlaps & (1u << link_index(k, make_link(i, j)));
}

bool OverlapPattern::connected() const {
  std::uint32_t reached = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (int i = 0; i < k; ++i)
      if (frontier & (1u << i))
        for (int j = 0; j < k; ++j)
          if (j != i && !(reached & (1u << j)) && overlap(i, j)) next |= 1u << j;
    reached |= next;
    frontier = next;
  }
  return reached == (1u << k) - 1;
}

Rational connected_coefficient_tree(const OverlapPattern& pattern) {
  const int k = pattern.k;
  require_within(k, limits().mayer, "polymers in a connected coefficient");
  if (k == 1) return 1;
  if (!pattern.connected()) return 0;
  const auto pairs = all_links(k);
  Rational total = 0;
  for (const auto& tree : enumerate_trees(k)) {
    bool live = true;
    for (const auto& l : tree.links()) live = live && pattern.overlap(l.a, l.b);
    if (!live) continue;
    // prod eps over the tree is (-1)^{k-1}
    MinExpression integrand(Rational((k - 1) % 2 ? -1 : 1));
    for (const auto& l : pairs) {
      if (tree.find(l) >= 0 || !pattern.overlap(l.a, l.b)) continue;
      integrand *= MinExpression(Rational(1)) - MinExpression::symbol(*tree.path_mask(l.a, l.b));
    }
    total += integrate_min_expression(integrand, k - 1);
  }
  return total;
}

Rational connected_coefficient_tree(const std::vector<Polymer>& sequence) {
  return connected_coefficient_tree(OverlapPattern::of(sequence));
}

Rational connected_coefficient_graphs(const OverlapPattern& pattern) {
  const int k = pattern.k;
  require_within(k, limits().mayer, "polymers in a connected coefficient");
  if (k == 1) return 1;
  std::vector<Link> edges;
  for (const auto& l : all_links(k))
    if (pattern.overlap(l.a, l.b)) edges.push_back(l);
  Rational total = 0;
  for (std::uint32_t sub = 0; sub < (1u << edges.size()); ++sub) {
    std::vector<int> comp(k);
    for (int v = 0; v < k; ++v) comp[v] = v;
    std::function<int(int)> find = [&](int v) { return comp[v] == v ? v : comp[v] = find(comp[v]); };
    int components = k, size = 0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!(sub & (1u << e))) continue;
      ++size;
      int a = find(edges[e].a), b = find(edges[e].b);
      if (a != b) {
        comp[a] = b;
        --components;
      }
    }
    if (components == 1) total += size % 2 ? -1 : 1;
  }
  return total;
}

Rational connected_coefficient_graphs(const std::vector<Polymer>& sequence) {
  return connected_coefficient_graphs(OverlapPattern::of(sequence));
}

void PolymerGas::validate() const {
  if (boxes < 1) throw ValidationError("a polymer gas needs at least one box");
  if (activities.size() != polymers.size()) throw ValidationError("one activity per polymer is required");
  for (const auto& y : polymers) {
    if (y.empty()) throw ValidationError("polymers must be nonempty");
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] < 0 || y[i] >= boxes) throw ValidationError("polymer box out of range");
      if (i > 0 && y[i] <= y[i - 1]) throw ValidationError("polymer boxes must be sorted and distinct");
    }
  }
}

PolymerGas lattice_1d(int n, int max_length, const Rational& activity) {
  if (n < 1) throw ValidationError("lattice needs at least one box");
  if (max_length < 2) throw ValidationError("polymers have length at least 2");
  PolymerGas gas;
  gas.boxes = n;
  for (int len = 2; len <= std::min(max_length, n); ++len)
    for (int start = 0; start + len <= n; ++start) {
      Polymer y(len);
      for (int i = 0; i < len; ++i) y[i] = start + i;
      gas.polymers.push_back(y);
      gas.activities.push_back(activity);
    }
  return gas;
}

namespace {

// Shared driver: sum over ordered k-sequences of prod activity * C^T, with
// C^T cached per overlap pattern. Returns one partial sum per k (without 1/k!).
template <typename T>
std::vector<T> sequence_sums(const std::vector<Polymer>& polymers, const std::vector<T>& activities, int max_k,
                             const T& zero, std::size_t* pattern_count) {
  require_within(max_k, limits().mayer, "Mayer sequence length");
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < polymers.size(); ++i)
    if (!(activities[i] == zero)) live.push_back(i);

  std::map<std::pair<int, std::uint32_t>, Rational> cache;
  std::mutex cache_mutex;
  auto coefficient = [&](const OverlapPattern& p) {
    {
      std::lock_guard lock(cache_mutex);
      auto it = cache.find({p.k, p.overlaps});
      if (it != cache.end()) return it->second;
    }
    Rational c = connected_coefficient_tree(p);
    std::lock_guard lock(cache_mutex);
    return cache.emplace(std::make_pair(p.k, p.overlaps), c).first->second;
  };

  std::vector<T> out(max_k + 1, zero);
  for (int k = 1; k <= max_k; ++k) {
    // split by the first polymer; the rest is walked depth-first
    out[k] = parallel_sum<T>(
        live.size(),
        [&](std::size_t first) {
          T acc = zero;
          std::vector<Polymer> seq{polymers[live[first]]};
          std::vector<std::size_t> picks{live[first]};
          std::function<void()> extend = [&]() {
            if (static_cast<int>(seq.size()) == k) {
              auto pattern = OverlapPattern::of(seq);
              if (!pattern.connected()) return;
              Rational c = coefficient(pattern);
              if (is_zero(c)) return;
              T term = activities[picks[0]];
              for (std::size_t i = 1; i < picks.size(); ++i) term = term * activities[picks[i]];
              acc += term * c;
              return;
            }
            for (auto idx : live) {
              seq.push_back(polymers[idx]);
              picks.push_back(idx);
              extend();
              seq.pop_back();
              picks.pop_back();
            }
          };
          extend();
          return acc;
        },
        zero);
  }
  if (pattern_count) *pattern_count = cache.size();
  return out;
}

} // namespace

FormalSeries mayer_log_series(const PolymerGas& gas, int grade) {
  gas.validate();
  if (grade < 0) throw ValidationError("grade must be nonnegative");
  auto sums = sequence_sums<Rational>(gas.polymers, gas.activities, grade, Rational(0), nullptr);
  FormalSeries out(grade);
  for (int k = 1; k <= grade; ++k) out[k] = sums[k] / factorial(k);
  return out;
}

FormalSeries reduced_partition(const PolymerGas& gas, int grade) {
  gas.validate();
  if (grade < 0) throw ValidationError("grade must be nonnegative");
  FormalSeries z(grade);
  std::vector<std::uint64_t> masks;
  for (const auto& y : gas.polymers) {
    std::uint64_t m = 0;
    for (int b : y) m |= std::uint64_t{1} << b;
    masks.push_back(m);
  }
  std::function<void(std::size_t, std::uint64_t, int, Rational)> walk = [&](std::size_t from, std::uint64_t used,
                                                                             int size, Rational weight) {
    z[size] += weight;
    if (size == grade) return;
    for (std::size_t i = from; i < masks.size(); ++i)
      if (!(masks[i] & used)) walk(i + 1, used | masks[i], size + 1, weight * gas.activities[i]);
  };
  if (gas.boxes > 64) throw SizeLimitError("reduced partition supports at most 64 boxes");
  walk(0, 0, 0, Rational(1));
  return z;
}

bool MayerReport::ok() const {
  for (const auto& r : residuals)
    if (!is_zero(r)) return false;
  return true;
}

MayerReport mayer_residuals(const PolymerGas& gas, int grade) {
  gas.validate();
  MayerReport rep;
  rep.grade = grade;
  auto sums = sequence_sums<Rational>(gas.polymers, gas.activities, grade, Rational(0), &rep.patterns);
  rep.log_series = FormalSeries(grade);
  for (int k = 1; k <= grade; ++k) rep.log_series[k] = sums[k] / factorial(k);
  rep.partition = reduced_partition(gas, grade);
  rep.exp_log = series_exp(rep.log_series);
  for (int k = 0; k <= grade; ++k) rep.residuals.push_back(rep.exp_log[k] - rep.partition[k]);
  return rep;
}

MayerReport verify_mayer(const PolymerGas& gas, int grade) {
  auto rep = mayer_residuals(gas, grade);
  for (int k = 0; k <= grade; ++k)
    if (!is_zero(rep.residuals[k])) {
      std::ostringstream msg;
      msg << "Mayer identity fails at grade " << k << ": exp(log series) = " << to_string(rep.exp_log[k])
          << ", Z_r = " << to_string(rep.partition[k]);
      throw IdentityFailure(msg.str());
    }
  return rep;
}

FormalSeries mayer_log_sum(const std::vector<Polymer>& polymers, const std::vector<FormalSeries>& activities,
                           int max_k) {
  if (polymers.size() != activities.size()) throw ValidationError("one activity per polymer is required");
  if (activities.empty()) return FormalSeries(0);
  const int order = activities.front().order();
  FormalSeries zero(order);
  auto sums = sequence_sums<FormalSeries>(polymers, activities, max_k, zero, nullptr);
  FormalSeries out(order);
  for (int k = 1; k <= max_k; ++k) out += sums[k] * (Rational(1) / factorial(k));
  return out;
}

PressureReport finite_volume_pressure(const BoxModel& model) {
  auto acts = cluster_expansion(model);
  const int n = model.boxes();
  const int p = model.order;
  const Rational inv_n(1, n);

  PressureReport rep;
  rep.single_box = FormalSeries(p);
  std::vector<FormalSeries> inverse_single;
  for (int b = 0; b < n; ++b) {
    const auto& ab = acts.at({b});
    rep.single_box += series_log(ab);
    inverse_single.push_back(ab.inverse());
  }
  rep.single_box *= inv_n;

  std::vector<Polymer> polymers;
  std::vector<FormalSeries> reduced;
  int lowest = p + 1;
  for (const auto& [y, a] : acts.activities) {
    if (y.size() < 2 || a.is_zero()) continue;
    FormalSeries ar = a;
    for (int b : y) ar *= inverse_single[b];
    int v = 0;
    while (v <= p && is_zero(ar[v])) ++v;
    if (v > p) continue;
    if (v == 0) throw ValidationError("reduced activity with a constant term; the Mayer sum would not be graded");
    lowest = std::min(lowest, v);
    polymers.push_back(y);
    reduced.push_back(ar);
  }
  rep.mayer = FormalSeries(p);
  if (!polymers.empty()) rep.mayer = mayer_log_sum(polymers, reduced, p / lowest) * inv_n;
  rep.total = rep.single_box + rep.mayer;
  rep.direct = series_log(partition_series(model)) * inv_n;
  return rep;
}

} // namespace forestcalc
