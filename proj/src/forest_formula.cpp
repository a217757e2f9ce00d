#include "forestcalc/forest_formula.hpp"

#include "forestcalc/errors.hpp"
#include "forestcalc/min_expression.hpp"
#include "forestcalc/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace forestcalc {

const char* to_string(FormulaRule rule) {
  switch (rule) {
  case FormulaRule::symmetric: return "symmetric";
  case FormulaRule::rooted: return "rooted";
  case FormulaRule::ordered: return "ordered";
  }
  return "?";
}

RationalPolynomial::Variables link_variables(int n) {
  std::vector<std::string> names;
  for (const auto& l : all_links(n)) {
    std::string a = std::to_string(l.a + 1);
    std::string b = std::to_string(l.b + 1);
    names.push_back(n < 10 ? "x" + a + b : "x" + a + "_" + b);
  }
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

InterpolationJob::InterpolationJob(int n_, RationalPolynomial h_) : n(n_), h(std::move(h_)) {
  if (n < 1) throw ValidationError("interpolation job needs n >= 1");
  if (*h.variables() != *link_variables(n))
    throw ValidationError("H must be a polynomial in exactly the link variables x_l of n vertices");
}

Rational InterpolationJob::value_at_one() const {
  std::vector<Rational> ones(h.variable_count(), Rational(1));
  return h.evaluate(ones);
}

const RationalPolynomial& ForestFormula::derivative(const Forest& forest) {
  std::lock_guard lock(cache_mutex_);
  auto it = cache_.find(forest.links());
  if (it != cache_.end()) return it->second;
  RationalPolynomial d = job_.h;
  for (const auto& l : forest.links()) d = d.derivative(link_index(job_.n, l));
  return cache_.emplace(forest.links(), std::move(d)).first->second;
}

namespace {

// Replaces every x_l of each monomial by atom(l) and sums; a null atom is 0.
template <typename Atom>
MinExpression substitute_atoms(const RationalPolynomial& d, int n, Atom&& atom) {
  const auto pairs = all_links(n);
  std::vector<std::optional<MinExpression>> atoms(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) atoms[k] = atom(pairs[k]);

  MinExpression out;
  for (const auto& [e, c] : d.terms()) {
    MinExpression term(c);
    for (std::size_t k = 0; k < e.size() && !term.is_zero(); ++k) {
      if (e[k] == 0) continue;
      if (!atoms[k]) {
        term = MinExpression();
        break;
      }
      for (unsigned p = 0; p < e[k]; ++p) term *= *atoms[k];
    }
    out += term;
  }
  return out;
}

} // namespace

Rational ForestFormula::forest_term(const Forest& forest, WeakeningRule rule) {
  if (forest.vertex_count() != job_.n) throw ValidationError("forest and job have different vertex counts");
  const auto& d = derivative(forest);
  if (d.is_zero()) return 0;
  const int tau = static_cast<int>(forest.size());

  if (rule == WeakeningRule::symmetric) {
    auto e = substitute_atoms(d, job_.n, [&](Link l) -> std::optional<MinExpression> {
      auto mask = forest.path_mask(l.a, l.b);
      if (!mask) return std::nullopt;
      return MinExpression::symbol(*mask);
    });
    return integrate_min_expression(e, tau);
  }

  auto e = substitute_atoms(d, job_.n, [&](Link l) -> std::optional<MinExpression> {
    if (!forest.connected(l.a, l.b)) return std::nullopt;
    int la = forest.layer(l.a), lb = forest.layer(l.b);
    if (la == lb) return MinExpression(Rational(1));
    if (std::abs(la - lb) >= 2) return std::nullopt;
    int deeper = la > lb ? l.a : l.b;
    return MinExpression::weight(forest.parent_link(deeper));
  });
  return integrate_box(e, tau);
}

Rational ForestFormula::ordered_term(const Forest& forest, std::span<const int> order) {
  if (forest.vertex_count() != job_.n) throw ValidationError("forest and job have different vertex counts");
  if (order.size() != forest.size()) throw ValidationError("ordering must list every forest link once");
  const auto& d = derivative(forest);
  if (d.is_zero()) return 0;
  std::vector<int> rank(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank.at(order[k]) = static_cast<int>(k);

  auto e = substitute_atoms(d, job_.n, [&](Link l) -> std::optional<MinExpression> {
    auto path = forest.path_links(l.a, l.b);
    if (!path) return std::nullopt;
    int lowest = *std::min_element(path->begin(), path->end(), [&](int x, int y) { return rank[x] < rank[y]; });
    return MinExpression::weight(lowest);
  });
  return integrate_on_simplex(e, order);
}

Rational ForestFormula::ordered_group(const Forest& forest) {
  std::vector<int> order(forest.size());
  std::iota(order.begin(), order.end(), 0);
  Rational total = 0;
  do {
    total += ordered_term(forest, order);
  } while (std::next_permutation(order.begin(), order.end()));
  return total;
}

Rational ForestFormula::forest_sum(WeakeningRule rule) {
  const auto forests = enumerate_forests(job_.n);
  return parallel_sum<Rational>(
      forests.size(), [&](std::size_t i) { return forest_term(forests[i], rule); }, Rational(0));
}

Rational ForestFormula::ordered_forest_sum() {
  const auto forests = enumerate_forests(job_.n);
  return parallel_sum<Rational>(
      forests.size(), [&](std::size_t i) { return ordered_group(forests[i]); }, Rational(0));
}

Rational forest_term(const InterpolationJob& job, const Forest& forest, FormulaRule rule) {
  ForestFormula f(job);
  switch (rule) {
  case FormulaRule::symmetric: return f.forest_term(forest, WeakeningRule::symmetric);
  case FormulaRule::rooted: return f.forest_term(forest, WeakeningRule::rooted);
  case FormulaRule::ordered: return f.ordered_group(forest);
  }
  return 0;
}

Rational forest_sum(const InterpolationJob& job, WeakeningRule rule) { return ForestFormula(job).forest_sum(rule); }

Rational ordered_forest_sum(const InterpolationJob& job) { return ForestFormula(job).ordered_forest_sum(); }

ForestFormulaReport verify_forest_formula(int n, int degree, int trials, std::uint64_t seed,
                                          const std::vector<FormulaRule>& rules) {
  if (degree < 0) throw ValidationError("degree must be nonnegative");
  if (trials < 0) throw ValidationError("trial count must be nonnegative");
  ForestFormulaReport report;
  report.n = n;
  report.degree = degree;
  report.seed = seed;
  report.rules = rules;
  std::mt19937_64 rng(seed);
  auto vars = link_variables(n);
  for (int t = 0; t < trials; ++t) {
    ForestFormula formula(InterpolationJob(n, random_polynomial(vars, degree, rng)));
    ForestFormulaTrial trial;
    trial.h = formula.job().h.to_string();
    trial.expected = formula.job().value_at_one();
    for (auto rule : rules) {
      Rational value = rule == FormulaRule::ordered ? formula.ordered_forest_sum()
                       : rule == FormulaRule::rooted ? formula.forest_sum(WeakeningRule::rooted)
                                                     : formula.forest_sum(WeakeningRule::symmetric);
      if (value != trial.expected) trial.ok = false;
      trial.sums.emplace(rule, std::move(value));
    }
    if (!trial.ok) ++report.failures;
    report.trials.push_back(std::move(trial));
  }
  return report;
}

} // namespace forestcalc
