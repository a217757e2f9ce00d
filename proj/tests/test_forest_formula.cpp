#include "doctest.h"

#include "forestcalc/errors.hpp"
#include "forestcalc/forest_formula.hpp"

#include <random>

using namespace forestcalc;

namespace {

RationalPolynomial var(int n, std::string_view name) {
  auto vars = link_variables(n);
  RationalPolynomial probe(vars);
  return RationalPolynomial::variable(vars, probe.index_of(name));
}

RationalPolynomial constant(int n, long c) { return RationalPolynomial::constant(link_variables(n), Rational(c)); }

} // namespace

TEST_CASE("link variable naming") {
  auto v = link_variables(3);
  CHECK(*v == std::vector<std::string>{"x12", "x13", "x23"});
  CHECK_THROWS_AS(InterpolationJob(3, RationalPolynomial::constant(link_variables(2), 1)), ValidationError);
}

TEST_CASE("forest terms of constants and single links") {
  InterpolationJob c(3, constant(3, 5));
  CHECK(forest_term(c, Forest::empty(3), FormulaRule::symmetric) == 5);
  CHECK(forest_term(c, Forest::from_links(3, {{0, 1}}), FormulaRule::symmetric) == 0);
  CHECK(forest_term(c, Forest::from_links(3, {{0, 1}}), FormulaRule::rooted) == 0);
  CHECK(forest_sum(c, WeakeningRule::symmetric) == 5);
  CHECK(forest_sum(c, WeakeningRule::rooted) == 5);
  CHECK(ordered_forest_sum(c) == 5);

  InterpolationJob x(2, var(2, "x12"));
  CHECK(forest_term(x, Forest::from_links(2, {{0, 1}}), FormulaRule::symmetric) == 1);
  CHECK(forest_term(x, Forest::empty(2), FormulaRule::symmetric) == 0);
  CHECK(forest_sum(x, WeakeningRule::symmetric) == 1);
  CHECK(ordered_forest_sum(x) == 1);
}

TEST_CASE("n = 3 triangle monomial") {
  auto h = var(3, "x12") * var(3, "x13") * var(3, "x23");
  InterpolationJob job(3, h);
  CHECK(job.value_at_one() == 1);
  CHECK(forest_sum(job, WeakeningRule::symmetric) == 1);
  CHECK(forest_sum(job, WeakeningRule::rooted) == 1);
  CHECK(ordered_forest_sum(job) == 1);

  // term-level difference: on the chain 1-2-3 the derivative leaves x13,
  // weakened to min(w12, w23) symmetrically but to 0 by the layer rule
  auto chain = Forest::from_links(3, {{0, 1}, {1, 2}});
  CHECK(forest_term(job, chain, FormulaRule::symmetric) == Rational(1, 3));
  CHECK(forest_term(job, chain, FormulaRule::rooted) == 0);
  CHECK(forest_term(job, chain, FormulaRule::ordered) == Rational(1, 3));
}

TEST_CASE("ordered sum equals unordered sum on x12 x23") {
  InterpolationJob job(3, var(3, "x12") * var(3, "x23"));
  CHECK(ordered_forest_sum(job) == forest_sum(job, WeakeningRule::symmetric));
  CHECK(ordered_forest_sum(job) == 1);
}

TEST_CASE("forest sum reproduces H(1) for random polynomials") {
  for (int n = 2; n <= 4; ++n) {
    auto report = verify_forest_formula(n, 3, 5, 100 + n,
                                        {FormulaRule::symmetric, FormulaRule::rooted, FormulaRule::ordered});
    CAPTURE(n);
    CHECK(report.failures == 0);
    CHECK(report.trials.size() == 5);
  }
}

TEST_CASE("forest sum is linear in H") {
  std::mt19937_64 rng(5);
  auto vars = link_variables(4);
  auto a = random_polynomial(vars, 2, rng);
  auto b = random_polynomial(vars, 2, rng);
  Rational s(3, 7);
  Rational lhs = forest_sum(InterpolationJob(4, a * s + b), WeakeningRule::symmetric);
  Rational rhs = s * forest_sum(InterpolationJob(4, a), WeakeningRule::symmetric) +
             forest_sum(InterpolationJob(4, b), WeakeningRule::symmetric);
  CHECK(lhs == rhs);
}

TEST_CASE("symmetric and rooted terms differ while sums agree") {
  std::mt19937_64 rng(9);
  auto vars = link_variables(4);
  ForestFormula f(InterpolationJob(4, random_polynomial(vars, 3, rng)));
  int differing = 0;
  for (const auto& forest : enumerate_forests(4))
    if (f.forest_term(forest, WeakeningRule::symmetric) != f.forest_term(forest, WeakeningRule::rooted)) ++differing;
  CHECK(differing > 0);
  CHECK(f.forest_sum(WeakeningRule::symmetric) == f.forest_sum(WeakeningRule::rooted));
}
