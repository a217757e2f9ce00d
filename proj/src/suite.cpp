#include "forestcalc/suite.hpp"

#include "forestcalc/errors.hpp"
#include "forestcalc/fermion.hpp"
#include "forestcalc/forest_formula.hpp"
#include "forestcalc/gaussian_cluster.hpp"
#include "forestcalc/mayer.hpp"
#include "forestcalc/propagator.hpp"
#include "forestcalc/weakening.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace forestcalc {

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

RationalMatrix random_gram(std::mt19937_64& rng, std::size_t n, std::size_t rank) {
  RationalMatrix b(n, rank);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < rank; ++k) b(i, k) = random_rational(rng, 4, 3);
  return b * b.transpose();
}

Outcome cayley() {
  Outcome out;
  std::ostringstream d;
  for (int n = 2; n <= 7; ++n) {
    std::size_t count = enumerate_trees(n).size();
    std::size_t expected = 1;
    for (int k = 0; k < n - 2; ++k) expected *= n;
    out.ok = out.ok && count == expected;
    d << (n > 2 ? "," : "counts ") << count;
  }
  out.detail = d.str();
  return out;
}

Outcome forest_formula_identity(const SuiteOptions& o) {
  Outcome out;
  const int trials = o.quick ? 10 : 50;
  int total = 0;
  for (int n = 2; n <= 4; ++n) {
    auto rep = verify_forest_formula(n, 3, trials, o.seed + n,
                                     {FormulaRule::symmetric, FormulaRule::rooted, FormulaRule::ordered});
    out.ok = out.ok && rep.failures == 0;
    total += static_cast<int>(rep.trials.size()) - rep.failures;
  }
  out.detail = std::to_string(total) + "/" + std::to_string(3 * trials) + " polynomials reproduce H(1) under all rules";
  return out;
}

Outcome weakening_positivity(const SuiteOptions& o) {
  Outcome out;
  std::mt19937_64 rng(o.seed);
  const int max_n = o.quick ? 5 : 6;
  const int weights = o.quick ? 20 : 200;
  std::size_t checked = 0, failures = 0;
  for (int n = 1; n <= max_n; ++n)
    for (const auto& f : enumerate_forests(n))
      for (int t = 0; t < weights; ++t) {
        auto w = WeightAssignment::random(f, rng, 12);
        auto m = weakening_matrix(f, w, WeakeningRule::symmetric).values;
        bool ok = is_positive_semidefinite(m).positive_semidefinite &&
                  reconstruct(n, convex_block_decomposition(f, w)) == m;
        ++checked;
        if (!ok) ++failures;
      }
  out.ok = failures == 0;
  out.detail = std::to_string(checked - failures) + "/" + std::to_string(checked) + " weakening matrices PSD and reconstructed";
  return out;
}

Outcome hadamard(const SuiteOptions& o) {
  Outcome out;
  std::mt19937_64 rng(o.seed + 4);
  const int pairs = o.quick ? 100 : 500;
  int good = 0;
  for (int t = 0; t < pairs; ++t) {
    std::size_t n = 1 + rng() % 5;
    auto a = random_gram(rng, n, 1 + rng() % n);
    auto b = random_gram(rng, n, 1 + rng() % n);
    if (is_positive_semidefinite(hadamard_product(a, b)).positive_semidefinite) ++good;
  }
  out.ok = good == pairs;
  out.detail = std::to_string(good) + "/" + std::to_string(pairs) + " Hadamard products PSD";
  return out;
}

Outcome cluster_factorization(const SuiteOptions& o) {
  Outcome out;
  std::mt19937_64 rng(o.seed + 5);
  const int models = o.quick ? 8 : 20;
  int good = 0;
  for (int t = 0; t < models; ++t) {
    int n = 1 + t % 4;
    auto c = random_gram(rng, n, n);
    for (int i = 0; i < n; ++i) c(i, i) += Rational(1, 4);
    BoxModel model{c, 2};
    auto rep = factorization_residuals(model, cluster_expansion(model));
    if (rep.ok()) ++good;
  }
  out.ok = good == models;
  out.detail = std::to_string(good) + "/" + std::to_string(models) + " models with zero residuals through order 2";
  return out;
}

Outcome zero_dim() {
  Outcome out;
  Rational c1 = zero_dim_connected_count(1), c2 = zero_dim_connected_count(2);
  out.ok = c1 == -3 && c2 == 48;
  out.detail = "log coefficients " + to_string(c1) + ", " + to_string(c2);
  return out;
}

Outcome mayer_equivalence(const SuiteOptions& o) {
  Outcome out;
  int patterns = 0, good = 0;
  for (int k = 1; k <= 4; ++k)
    for (std::uint32_t bits = 0; bits < (1u << (k * (k - 1) / 2)); ++bits) {
      OverlapPattern p{k, bits};
      ++patterns;
      if (connected_coefficient_tree(p) == connected_coefficient_graphs(p)) ++good;
    }
  std::mt19937_64 rng(o.seed + 7);
  const int random5 = o.quick ? 20 : 100;
  for (int t = 0; t < random5; ++t) {
    OverlapPattern p{5, static_cast<std::uint32_t>(rng() & 0x3ff)};
    ++patterns;
    if (connected_coefficient_tree(p) == connected_coefficient_graphs(p)) ++good;
  }
  auto rep = mayer_residuals(lattice_1d(5, 3, Rational(1)), 4);
  out.ok = good == patterns && rep.ok();
  out.detail = std::to_string(good) + "/" + std::to_string(patterns) + " patterns agree; 5-box gas " +
               (rep.ok() ? "matches" : "differs") + " to grade 4";
  return out;
}

Outcome fermion_oracle(const SuiteOptions& o) {
  Outcome out;
  const int max_colors = o.quick ? 2 : 3;
  int models = 0, good = 0;
  for (int colors = 1; colors <= max_colors; ++colors)
    for (auto profile : {std::vector<Rational>{1}, std::vector<Rational>{1, Rational(1, 2)}}) {
      GrassmannModel m;
      m.propagator = ring_propagator(profile);
      m.colors = colors;
      m.order = 3;
      ++models;
      if (pressure_series_tree(m) == pressure_series_bruteforce(m)) ++good;
    }
  int counts = 0, count_good = 0;
  for (int n = 1; n <= 4; ++n)
    for (int colors = 1; colors <= 3; ++colors) {
      Integer expected = Integer(1) << n;
      for (int k = 0; k <= n; ++k) expected *= colors;
      ++counts;
      if (coloring_count(n, colors) == expected) ++count_good;
    }
  out.ok = good == models && count_good == counts;
  out.detail = std::to_string(good) + "/" + std::to_string(models) + " models agree through order 3; " +
               std::to_string(count_good) + "/" + std::to_string(counts) + " coloring counts equal 2^n N^(n+1)";
  return out;
}

Outcome gram_sweep(const SuiteOptions& o) {
  Outcome out;
  std::mt19937_64 rng(o.seed + 9);
  const int instances = o.quick ? 100 : 500;
  int good = 0;
  for (int t = 0; t < instances; ++t) {
    int n = 1 + static_cast<int>(rng() % 5);
    int dim = 1 + static_cast<int>(rng() % 4);
    GramFactorization fam;
    for (int i = 0; i < n; ++i) {
      std::vector<Rational> f(dim), g(dim);
      for (auto& x : f) x = random_rational(rng, 4, 3);
      for (auto& x : g) x = random_rational(rng, 4, 3);
      fam.f.push_back(std::move(f));
      fam.g.push_back(std::move(g));
    }
    auto forests = enumerate_forests(n);
    const auto& forest = forests[rng() % forests.size()];
    try {
      if (gram_bound_check(fam, forest, WeightAssignment::random(forest, rng, 9)).holds) ++good;
    } catch (const InequalityFailure&) {
    }
  }
  out.ok = good == instances;
  out.detail = std::to_string(good) + "/" + std::to_string(instances) + " instances within the Gram bound";
  return out;
}

Outcome radius(const SuiteOptions&) {
  Outcome out;
  std::vector<GrassmannModel> family;
  for (int colors : {1, 2, 4}) {
    GrassmannModel m;
    m.propagator = ring_propagator(std::vector<Rational>{1, Rational(1, 2)});
    m.colors = colors;
    m.order = 3;
    family.push_back(m);
  }
  auto probe = radius_probe(family);
  out.ok = probe.within_bounds && std::isfinite(probe.uniform_bound);
  char buf[160];
  std::snprintf(buf, sizeof buf, "max |a_n/N|^(1/n) = %.4g, fitted K' = %.4g, N-independent bounds %s",
                probe.uniform_bound, probe.fitted_constant, probe.within_bounds ? "hold" : "violated");
  out.detail = buf;
  return out;
}

Outcome decay_fit() {
  Outcome out;
  std::ostringstream d;
  for (int dim : {2, 3}) {
    double lo = INFINITY, hi = 0;
    for (int j = 0; j <= 5; ++j) {
      SliceSpec spec{dim, 2, j, 1};
      auto fit = decay_bound_fit(spec, slice_grid(spec, 0.5, 10));
      lo = std::min(lo, fit.k);
      hi = std::max(hi, fit.k);
    }
    bool ok = std::isfinite(hi) && hi / lo <= 2;
    out.ok = out.ok && ok;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%sd=%d K in [%.4g, %.4g] ratio %.3g", dim == 2 ? "" : "; ", dim, lo, hi, hi / lo);
    d << buf;
  }
  out.detail = d.str();
  return out;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const SuiteOptions& options,
                                            const std::function<void(const CriterionResult&)>& progress) {
  struct Spec {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Spec> specs = {
      {1, "Cayley counts", 10, [] { return cayley(); }},
      {2, "forest-formula identity", 300, [&] { return forest_formula_identity(options); }},
      {3, "weakening positivity", 300, [&] { return weakening_positivity(options); }},
      {4, "Hadamard positivity", 60, [&] { return hadamard(options); }},
      {5, "cluster factorization", 600, [&] { return cluster_factorization(options); }},
      {6, "zero-dimensional oracle", 1, [] { return zero_dim(); }},
      {7, "Mayer equivalence", 600, [&] { return mayer_equivalence(options); }},
      {8, "fermionic oracle", 1200, [&] { return fermion_oracle(options); }},
      {9, "Gram sweep", 120, [&] { return gram_sweep(options); }},
      {10, "uniform-radius probe", 600, [&] { return radius(options); }},
      {11, "decay-bound fit", 120, [] { return decay_fit(); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& s : specs) {
    CriterionResult r;
    r.id = s.id;
    r.name = s.name;
    r.budget = s.budget;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = s.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = o.ok && r.seconds <= r.budget;
    r.detail = o.detail;
    if (o.ok && !r.pass) r.detail += " (over time budget)";
    if (progress) progress(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_line(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "criterion %d: %s  %s  (%.2f s / %g s)  ", r.id, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds, r.budget);
  return head + r.detail;
}

} // namespace forestcalc
