#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "forestcalc/forest.hpp"
#include "forestcalc/polynomial.hpp"
#include "forestcalc/weakening.hpp"

namespace forestcalc {

enum class FormulaRule { symmetric, rooted, ordered };

const char* to_string(FormulaRule rule);

/// Variables x_l for every pair l of n vertices, named "x12", "x13", ...
/// (1-based, in the lexicographic pair order used by link_index).
RationalPolynomial::Variables link_variables(int n);

/// A test function H of the link variables on n vertices.
struct InterpolationJob {
  int n;
  RationalPolynomial h;

  InterpolationJob(int n, RationalPolynomial h);
  /// H at x = (1, ..., 1), the value every forest formula must reproduce.
  Rational value_at_one() const;
};

/// Evaluates the terms of the Taylor forest formulas for one job. The mixed
/// derivative of H along a forest's links is computed once and shared by all
/// rules.
class ForestFormula {
public:
  explicit ForestFormula(InterpolationJob job) : job_(std::move(job)) {}

  const InterpolationJob& job() const { return job_; }

  /// Integral over w in [0,1]^tau of (prod_{l in F} d/dx_l H)(X_F(w)), with
  /// X_F given by the symmetric or rooted weakening rule.
  Rational forest_term(const Forest& forest, WeakeningRule rule);
  /// Same integrand with w restricted to w_{order[0]} < w_{order[1]} < ...;
  /// the weakening along a path is then the lowest-ranked link on it.
  Rational ordered_term(const Forest& forest, std::span<const int> order);
  /// Sum of ordered_term over the tau! orderings of the forest's links.
  Rational ordered_group(const Forest& forest);

  Rational forest_sum(WeakeningRule rule);
  Rational ordered_forest_sum();

private:
  const RationalPolynomial& derivative(const Forest& forest);

  InterpolationJob job_;
  std::mutex cache_mutex_;
  std::map<std::vector<Link>, RationalPolynomial> cache_;
};

Rational forest_term(const InterpolationJob& job, const Forest& forest, FormulaRule rule);
Rational forest_sum(const InterpolationJob& job, WeakeningRule rule);
Rational ordered_forest_sum(const InterpolationJob& job);

struct ForestFormulaTrial {
  std::string h;
  Rational expected;
  std::map<FormulaRule, Rational> sums;
  bool ok = true;
};

struct ForestFormulaReport {
  int n = 0;
  int degree = 0;
  std::uint64_t seed = 0;
  std::vector<FormulaRule> rules;
  std::vector<ForestFormulaTrial> trials;
  int failures = 0;
};

/// Draws `trials` random H of total degree <= degree and checks every
/// requested rule's forest sum against H(1).
ForestFormulaReport verify_forest_formula(int n, int degree, int trials, std::uint64_t seed,
                                          const std::vector<FormulaRule>& rules);

} // namespace forestcalc
