#include "doctest.h"

#include "forestcalc/errors.hpp"
#include "forestcalc/min_expression.hpp"
#include "forestcalc/polynomial.hpp"
#include "forestcalc/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace forestcalc;

namespace {

Rational r(long p, long q = 1) { return Rational(p, q); }

RationalPolynomial::Variables xy() {
  return std::make_shared<const std::vector<std::string>>(std::vector<std::string>{"x", "y"});
}

MinExpression random_min_expression(std::mt19937_64& rng, int tau, int terms) {
  std::uniform_int_distribution<LinkMask> mask_dist(1, (LinkMask{1} << tau) - 1);
  std::uniform_int_distribution<int> factors(0, 3);
  MinExpression e;
  for (int t = 0; t < terms; ++t) {
    MinExpression term(random_rational(rng, 5, 4));
    for (int k = factors(rng); k > 0; --k) term *= MinExpression::symbol(mask_dist(rng));
    e += term;
  }
  return e;
}

// Relabels link l as perm[l] inside every mask.
MinExpression relabel(const MinExpression& e, const std::vector<int>& perm) {
  MinExpression out;
  for (const auto& [m, c] : e.terms()) {
    MinExpression term(c);
    for (const auto& [mask, p] : m) {
      LinkMask moved = 0;
      for (std::size_t l = 0; l < perm.size(); ++l)
        if (mask & (LinkMask{1} << l)) moved |= LinkMask{1} << perm[l];
      for (unsigned k = 0; k < p; ++k) term *= MinExpression::symbol(moved);
    }
    out += term;
  }
  return out;
}

} // namespace

TEST_CASE("polynomial arithmetic") {
  auto vars = xy();
  auto x = RationalPolynomial::variable(vars, 0);
  auto y = RationalPolynomial::variable(vars, 1);
  auto one = RationalPolynomial::constant(vars, 1);

  CHECK((x * x * y).derivative("x") == x * y * r(2));
  CHECK((x * x * y + x).substitute("x", r(1)) == y + one);
  CHECK((x + y) * (x - y) == x * x - y * y);
  CHECK((x + one).pow(3).evaluate(std::vector<Rational>{r(1), r(0)}) == 8);
  CHECK((x * y).substitute(0, y + one) == y * y + y);
  CHECK_THROWS_AS(x.substitute("z", r(1)), ValidationError);
  CHECK_THROWS_AS(x + RationalPolynomial::variable(std::make_shared<const std::vector<std::string>>(
                              std::vector<std::string>{"a"}), 0),
                  ValidationError);
  CHECK((x - x).is_zero());
  CHECK((x * x * y).total_degree() == 3);
}

TEST_CASE("min-expression integrals") {
  CHECK(integrate_min_expression(MinExpression::weight(0), 1) == r(1, 2));
  CHECK(integrate_min_expression(MinExpression::symbol(0b11), 2) == r(1, 3));
  CHECK(integrate_min_expression(MinExpression(r(1)), 2) == 1);
  CHECK(integrate_min_expression(MinExpression(), 3) == 0);
  // E[min of three uniforms] = 1/4, E[min^2] = 1/10
  CHECK(integrate_min_expression(MinExpression::symbol(0b111), 3) == r(1, 4));
  auto m3 = MinExpression::symbol(0b111);
  CHECK(integrate_min_expression(m3 * m3, 3) == r(1, 10));
  CHECK_THROWS_AS(integrate_min_expression(MinExpression::weight(3), 2), ValidationError);
  CHECK_THROWS_AS(integrate_min_expression(MinExpression(r(1)), 40), SizeLimitError);
  CHECK_THROWS_AS(MinExpression::symbol(0), ValidationError);
}

TEST_CASE("simplex decomposition sums to the box integral") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    int tau = 1 + trial % 4;
    auto e = random_min_expression(rng, tau, 4);
    std::vector<int> order(tau);
    std::iota(order.begin(), order.end(), 0);
    Rational total = 0;
    do {
      total += integrate_on_simplex(e, order);
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(total == integrate_min_expression(e, tau));
  }
}

TEST_CASE("box integral without min-symbols matches iterated integration") {
  // prod_l w_l^{e_l} integrates to prod 1/(e_l + 1); compare with the
  // one-variable-at-a-time integration of the same polynomial
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    int tau = 1 + trial % 4;
    std::vector<std::string> names;
    for (int l = 0; l < tau; ++l) names.push_back("w" + std::to_string(l));
    auto vars = std::make_shared<const std::vector<std::string>>(names);
    auto poly = random_polynomial(vars, 3, rng);

    MinExpression e;
    for (const auto& [exps, c] : poly.terms()) {
      MinExpression term(c);
      for (int l = 0; l < tau; ++l)
        for (int p = 0; p < exps[l]; ++p) term *= MinExpression::weight(l);
      e += term;
    }
    // iterated: antiderivative in each variable, evaluated at 1 minus at 0
    Rational iterated = 0;
    for (const auto& [exps, c] : poly.terms()) {
      Rational v = c;
      for (int l = 0; l < tau; ++l) v /= exps[l] + 1;
      iterated += v;
    }
    CHECK(integrate_box(e, tau) == iterated);
    CHECK(integrate_min_expression(e, tau) == iterated);
  }
  CHECK_THROWS_AS(integrate_box(MinExpression::symbol(0b11), 2), ValidationError);
}

TEST_CASE("box integral is covariant under link relabeling") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int tau = 2 + trial % 3;
    auto e = random_min_expression(rng, tau, 5);
    std::vector<int> perm(tau);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(integrate_min_expression(relabel(e, perm), tau) == integrate_min_expression(e, tau));
  }
}

TEST_CASE("Monte-Carlo cross-check of min-expression integrals") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int samples = 1'000'000;
  for (int trial = 0; trial < 3; ++trial) {
    int tau = 2 + trial;
    auto e = random_min_expression(rng, tau, 4);
    double exact = integrate_min_expression(e, tau).get_d();
    double sum = 0, sum2 = 0;
    std::vector<double> w(tau);
    for (int s = 0; s < samples; ++s) {
      for (auto& x : w) x = u(rng);
      double v = e.evaluate(std::span<const double>(w));
      sum += v;
      sum2 += v * v;
    }
    double mean = sum / samples;
    double se = std::sqrt(std::max(0.0, sum2 / samples - mean * mean) / samples);
    CAPTURE(e.to_string());
    CHECK(std::abs(mean - exact) <= 3 * se + 1e-12);
  }
}

TEST_CASE("series exp and log") {
  FormalSeries one_plus_z(3, {r(1), r(1)});
  auto l = series_log(one_plus_z);
  CHECK(l.coefficients() == std::vector<Rational>{0, 1, r(-1, 2), r(1, 3)});
  CHECK(series_exp(FormalSeries(4)) == FormalSeries::constant(4, 1));

  FormalSeries z(2, {r(1), r(-3), r(105, 2)});
  auto lz = series_log(z);
  CHECK(lz[1] == -3);
  CHECK(lz[2] == 48);

  CHECK_THROWS_AS(series_log(FormalSeries(2)), ValidationError);
  CHECK_THROWS_AS(series_log(FormalSeries::constant(2, 2)), ValidationError);
  CHECK_THROWS_AS(series_exp(FormalSeries::constant(2, 1)), ValidationError);

  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    int p = 1 + t % 6;
    FormalSeries s(p);
    s[0] = 1;
    for (int k = 1; k <= p; ++k) s[k] = random_rational(rng, 7, 5);
    CHECK(series_exp(series_log(s)) == s);
    FormalSeries a = s;
    a[0] = 0;
    CHECK(series_log(series_exp(a)) == a);
  }
}

TEST_CASE("series products and inverse") {
  FormalSeries a(3, {r(1), r(2), r(3)});
  CHECK(a * a.inverse() == FormalSeries::constant(3, 1));
  CHECK((a * a)[3] == 12);
  CHECK(a.pow(2) == a * a);
  CHECK_THROWS_AS(a + FormalSeries(2), ValidationError);
}
