#include "doctest.h"

#include "forestcalc/errors.hpp"
#include "forestcalc/forest.hpp"
#include "forestcalc/mayer.hpp"

#include <random>

using namespace forestcalc;

namespace {

Rational r(long p, long q = 1) { return Rational(p, q); }

// Oracle: every subset of the overlap edges, connectivity by repeated sweeps.
Rational graphs_oracle(int k, const std::vector<std::vector<bool>>& overlap) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (overlap[i][j]) edges.emplace_back(i, j);
  Rational total = 0;
  for (std::uint32_t sub = 0; sub < (1u << edges.size()); ++sub) {
    std::vector<bool> seen(k, false);
    seen[0] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t e = 0; e < edges.size(); ++e)
        if ((sub >> e) & 1) {
          auto [a, b] = edges[e];
          if (seen[a] != seen[b]) seen[a] = seen[b] = grew = true;
        }
    }
    if (std::find(seen.begin(), seen.end(), false) == seen.end()) total += __builtin_popcount(sub) % 2 ? -1 : 1;
  }
  return total;
}

OverlapPattern pattern_from_bits(int k, std::uint32_t bits) {
  OverlapPattern p;
  p.k = k;
  p.overlaps = bits;
  return p;
}

std::vector<std::vector<bool>> matrix_of(const OverlapPattern& p) {
  std::vector<std::vector<bool>> m(p.k, std::vector<bool>(p.k));
  for (int i = 0; i < p.k; ++i)
    for (int j = 0; j < p.k; ++j) m[i][j] = p.overlap(i, j);
  return m;
}

} // namespace

TEST_CASE("connected coefficients on small sequences") {
  Polymer a{0, 1}, b{1, 2}, c{3, 4};
  CHECK(connected_coefficient_tree({a}) == 1);
  CHECK(connected_coefficient_tree({a, a}) == -1);
  CHECK(connected_coefficient_tree({a, c}) == 0);
  CHECK(connected_coefficient_graphs({a, c}) == 0);
  CHECK(connected_coefficient_tree({a, a, a}) == 2);
  CHECK(connected_coefficient_graphs({a, a, a}) == 2);
  // path pattern a~b, b~b', a !~ b' : only the path graph itself
  Polymer d{2, 3};
  CHECK(connected_coefficient_tree({a, b, d}) == 1);
  CHECK(connected_coefficient_graphs({a, b, d}) == 1);
  // complete overlap on k vertices gives (-1)^{k-1} (k-1)!
  CHECK(connected_coefficient_tree({a, a, a, a}) == -6);
  CHECK(connected_coefficient_tree({a, a, a, a, a}) == 24);
  CHECK_THROWS_AS(connected_coefficient_tree(std::vector<Polymer>{}), ValidationError);
  CHECK_THROWS_AS(connected_coefficient_tree(std::vector<Polymer>(9, a)), SizeLimitError);
}

TEST_CASE("tree formula equals the connected-graph sum on every pattern up to k = 4") {
  for (int k = 1; k <= 4; ++k) {
    const std::uint32_t patterns = 1u << (k * (k - 1) / 2);
    for (std::uint32_t bits = 0; bits < patterns; ++bits) {
      auto p = pattern_from_bits(k, bits);
      CAPTURE(k);
      CAPTURE(bits);
      Rational tree = connected_coefficient_tree(p);
      CHECK(tree == connected_coefficient_graphs(p));
      CHECK(tree == graphs_oracle(k, matrix_of(p)));
      if (!p.connected()) CHECK(tree == 0);
    }
  }
}

TEST_CASE("tree formula equals the connected-graph sum on random k = 5 patterns") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    auto p = pattern_from_bits(5, static_cast<std::uint32_t>(rng() & 0x3ff));
    CHECK(connected_coefficient_tree(p) == graphs_oracle(5, matrix_of(p)));
  }
}

TEST_CASE("Mayer series for a single polymer is log(1 + a z)") {
  PolymerGas gas{3, {{0, 1}}, {r(2, 3)}};
  auto log_series = mayer_log_series(gas, 4);
  FormalSeries one_plus(4, {r(1), r(2, 3)});
  CHECK(log_series == series_log(one_plus));
  CHECK(log_series[2] == -r(2, 9));
  CHECK(verify_mayer(gas, 4).ok());
}

TEST_CASE("disjoint polymers add their logarithms") {
  PolymerGas gas{4, {{0, 1}, {2, 3}}, {r(1, 2), r(-3)}};
  auto expected = series_log(FormalSeries(3, {r(1), r(1, 2)})) + series_log(FormalSeries(3, {r(1), r(-3)}));
  CHECK(mayer_log_series(gas, 3) == expected);
  CHECK(mayer_log_series(PolymerGas{2, {}, {}}, 3).is_zero());
}

TEST_CASE("reduced partition counts compatible sets") {
  // dimers on a path of 5 sites: 1 empty, 4 single, 3 pairs of disjoint dimers
  auto z = reduced_partition(lattice_1d(5, 2, r(1)), 3);
  CHECK(z.coefficients() == std::vector<Rational>{1, 4, 3, 0});
  CHECK(lattice_1d(5, 3, r(1)).polymers.size() == 7);
  CHECK_THROWS_AS(lattice_1d(5, 1, r(1)), ValidationError);
}

TEST_CASE("exp of the Mayer series reproduces the reduced partition function") {
  auto rep = verify_mayer(lattice_1d(5, 3, r(1, 3)), 4);
  CHECK(rep.ok());
  CHECK(rep.exp_log == rep.partition);
  auto zero = verify_mayer(lattice_1d(4, 3, r(0)), 3);
  CHECK(zero.log_series.is_zero());
  CHECK(zero.partition == FormalSeries::constant(3, 1));

  std::mt19937_64 rng(19);
  for (int t = 0; t < 3; ++t) {
    auto gas = lattice_1d(4, 3, r(1));
    for (auto& a : gas.activities) a = random_rational(rng, 3, 4);
    CHECK(mayer_residuals(gas, 4).ok());
  }
}

TEST_CASE("finite-volume pressure from activities and the Mayer sum") {
  BoxModel model{RationalMatrix{{1, r(1, 2), r(1, 5)}, {r(1, 2), 2, r(1, 3)}, {r(1, 5), r(1, 3), 1}}, 4};
  auto rep = finite_volume_pressure(model);
  CHECK(rep.ok());
  CHECK(rep.mayer[1] == 0);
  BoxModel single{RationalMatrix{{1}}, 2};
  CHECK(finite_volume_pressure(single).total[1] == -3);
}
