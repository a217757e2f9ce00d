#include "doctest.h"

#include "forestcalc/errors.hpp"
#include "forestcalc/propagator.hpp"

#include <cmath>

using namespace forestcalc;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("slice kernel closed forms at the origin") {
  const double m = 3;
  CHECK(rel(slice_kernel(SliceSpec{2, m, 0, 0, true}, 0), std::log(m)) < 1e-12);
  for (int j = 1; j <= 5; ++j) {
    // d = 2: int d alpha / alpha over one slice; d = 3: 2 (a^{-1/2} - b^{-1/2})
    CHECK(rel(slice_kernel(SliceSpec{2, m, j, 0}, 0), 2 * std::log(m)) < 1e-10);
    CHECK(rel(slice_kernel(SliceSpec{3, m, j, 0}, 0), 2 * (std::pow(m, j) - std::pow(m, j - 1))) < 1e-10);
  }
  // d = 2, j = 0, m > 0: exponential integral E1(m^2) = -Ei(-m^2)
  CHECK(rel(slice_kernel(SliceSpec{2, 2, 0, 0.7}, 0), -std::expint(-0.49)) < 1e-10);
}

TEST_CASE("slice kernel closed form in d = 4") {
  // int alpha^{-2} e^{-r^2/4alpha} = (4/r^2)(e^{-r^2/4b} - e^{-r^2/4a})
  SliceSpec s{4, 2, 2, 0};
  for (double r : {0.1, 0.5, 1.0, 2.5}) {
    double a = s.lower(), b = s.upper();
    double exact = 4 / (r * r) * (std::exp(-r * r / (4 * b)) - std::exp(-r * r / (4 * a)));
    CHECK(rel(slice_kernel(s, r), exact) < 1e-10);
  }
}

TEST_CASE("slice kernel is positive and strictly decreasing") {
  for (int d : {2, 3})
    for (int j = 0; j <= 3; ++j) {
      SliceSpec s{d, 2, j, 1};
      double prev = slice_kernel(s, 0);
      CHECK(prev > 0);
      for (double r = 0.25; r <= 6; r += 0.25) {
        double v = slice_kernel(s, r);
        CHECK(v > 0);
        CHECK(v < prev);
        prev = v;
      }
    }
  CHECK(slice_kernel(SliceSpec{2, 2, 3, 0}, 40) < 1e-12);
}

TEST_CASE("slice validation") {
  CHECK_THROWS_AS(slice_kernel(SliceSpec{2, 1, 1, 0}, 0), ValidationError);
  CHECK_THROWS_AS(slice_kernel(SliceSpec{2, 2, 0, 0}, 0), ValidationError);
  CHECK_THROWS_AS(slice_kernel(SliceSpec{2, 2, 1, 0}, -1), ValidationError);
  CHECK_NOTHROW(slice_kernel(SliceSpec{3, 2, 0, 0}, 1));
}

TEST_CASE("consecutive slices are related by rescaling") {
  for (int d : {2, 3, 4})
    for (int j = 1; j <= 4; ++j)
      for (double r : {0.0, 0.3, 1.0}) CHECK(std::abs(scaling_defect(SliceSpec{d, 2, j, 0}, r)) < 1e-8);
}

TEST_CASE("decay-bound fit") {
  SliceSpec s{2, 2, 3, 0};
  std::vector<double> origin{0.0};
  auto f0 = decay_bound_fit(s, origin);
  CHECK(rel(f0.k, slice_kernel(s, 0) / std::pow(2.0, 6)) < 1e-9);
  CHECK(f0.binding_radius == 0);

  for (int d : {2, 3}) {
    double lo = 1e300, hi = 0;
    for (int j = 0; j <= 5; ++j) {
      SliceSpec spec{d, 2, j, 1};
      auto fit = decay_bound_fit(spec, slice_grid(spec, 0.5, 10));
      CHECK(std::isfinite(fit.k));
      lo = std::min(lo, fit.k);
      hi = std::max(hi, fit.k);
      // the fitted bound holds on the grid
      for (double r : slice_grid(spec, 0.5, 10))
        CHECK(slice_kernel(spec, r) <= fit.k * std::pow(4.0, j) * std::exp(-std::pow(2.0, j) * r / fit.k) * (1 + 1e-9));
    }
    CAPTURE(d);
    CHECK(hi / lo <= 2);
  }
  CHECK_THROWS_AS(decay_bound_fit(s, std::vector<double>{}), ValidationError);
}

TEST_CASE("kernel covariance matrices") {
  SliceSpec s{2, 2, 1, 0};
  auto one = covariance_matrix_from_kernel(s, {{0.0, 0.0}});
  CHECK(sgn(one.matrix(0, 0)) > 0);

  auto far = covariance_matrix_from_kernel(s, {{0.0, 0.0}, {50.0, 0.0}});
  CHECK(far.matrix(0, 1) == 0);

  auto line = covariance_matrix_from_kernel(s, {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {1.5, 0.0}});
  CHECK(line.certificate.positive_semidefinite);
  CHECK(is_positive_semidefinite(line.matrix).positive_semidefinite);
  CHECK(line.matrix.is_symmetric());
  CHECK(std::abs(line.matrix(0, 1).get_d() - slice_kernel(s, 0.5)) < 1e-11);

  CHECK_THROWS_AS(covariance_matrix_from_kernel(s, {{0.0, 0.0}, {0.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(covariance_matrix_from_kernel(s, {{0.0}}), ValidationError);
}
