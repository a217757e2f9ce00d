#include "forestcalc/propagator.hpp"

#include "forestcalc/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace forestcalc {

void SliceSpec::validate() const {
  if (dimension < 1) throw ValidationError("dimension must be at least 1");
  if (!(ratio > 1)) throw ValidationError("slice ratio M must exceed 1");
  if (slice < 0) throw ValidationError("slice index must be nonnegative");
  if (!(mass >= 0)) throw ValidationError("mass must be nonnegative");
  if (!window && slice == 0 && mass == 0 && dimension <= 2)
    throw ValidationError("the j = 0 slice diverges for m = 0 in d <= 2");
}

double SliceSpec::lower() const {
  if (window) return 1 / ratio;
  return slice == 0 ? 1.0 : std::pow(ratio, -2.0 * slice);
}

double SliceSpec::upper() const {
  if (window) return 1.0;
  return slice == 0 ? std::numeric_limits<double>::infinity() : std::pow(ratio, -2.0 * (slice - 1));
}

double slice_kernel(const SliceSpec& spec, double r) {
  spec.validate();
  if (!std::isfinite(r) || r < 0) throw ValidationError("distance must be finite and nonnegative");
  const double half_d = spec.dimension / 2.0;
  const double m2 = spec.mass * spec.mass;
  const double r2 = r * r;
  auto integrand = [&](double alpha) {
    return std::pow(alpha, -half_d) * std::exp(-alpha * m2 - r2 / (4 * alpha));
  };
  // alpha = 1/s^2 maps [1, inf) onto (0, 1] with a smooth integrand for d >= 3 or m > 0
  auto tail = [&](double s) {
    if (s == 0) return 0.0;
    return 2 * std::pow(s, spec.dimension - 3) * std::exp(-m2 / (s * s) - r2 * s * s / 4);
  };
  double error = 0, l1 = 0;
  using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
  double value = std::isinf(spec.upper()) ? gk::integrate(tail, 0.0, 1.0, 20, kernel_tolerance, &error, &l1)
                                          : gk::integrate(integrand, spec.lower(), spec.upper(), 20, kernel_tolerance,
                                                          &error, &l1);
  if (!std::isfinite(value) || error > kernel_tolerance * std::max(l1, std::numeric_limits<double>::min())) {
    std::ostringstream msg;
    msg << "slice quadrature did not reach relative tolerance " << kernel_tolerance << " (estimate " << error << ", r = " << r
        << ")";
    throw NumericError(msg.str());
  }
  return value;
}

double scaling_defect(const SliceSpec& spec, double r) {
  if (spec.window) throw ValidationError("scaling relates consecutive slices, not the window kernel");
  SliceSpec next = spec;
  next.slice = spec.slice + 1;
  double lhs = slice_kernel(next, r);
  double rhs = std::pow(spec.ratio, spec.dimension - 2) * slice_kernel(spec, spec.ratio * r);
  return lhs / rhs - 1;
}

std::vector<double> slice_grid(const SliceSpec& spec, double step, double t_max) {
  if (!(step > 0) || t_max < 0) throw ValidationError("grid needs a positive step and nonnegative extent");
  const double scale = std::pow(spec.ratio, -spec.slice);
  std::vector<double> radii;
  const int count = static_cast<int>(std::floor(t_max / step + 1e-9));
  for (int i = 0; i <= count; ++i) radii.push_back(i * step * scale);
  return radii;
}

DecayFit decay_bound_fit(const SliceSpec& spec, std::span<const double> radii) {
  if (radii.empty()) throw ValidationError("decay fit needs at least one radius");
  const double scale = std::pow(spec.ratio, spec.slice);
  const double prefactor = scale * scale;
  constexpr double k_max = 1e12;

  DecayFit fit;
  for (double r : radii) {
    const double c = slice_kernel(spec, r);
    auto holds = [&](double k) { return c <= k * prefactor * std::exp(-scale * r / k); };
    double hi = std::max(c / prefactor, 1e-300);
    while (!holds(hi)) {
      hi *= 2;
      if (hi > k_max) {
        std::ostringstream msg;
        msg << "no decay constant below " << k_max << " at r = " << r;
        throw NumericError(msg.str());
      }
    }
    double lo = hi / 2;
    if (holds(lo)) lo = 0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
      double mid = (lo + hi) / 2;
      (holds(mid) ? hi : lo) = mid;
    }
    fit.per_radius.push_back(hi);
    if (hi > fit.k) {
      fit.k = hi;
      fit.binding_radius = r;
    }
  }
  return fit;
}

KernelCovariance covariance_matrix_from_kernel(const SliceSpec& spec, const std::vector<std::vector<double>>& centers,
                                               int digits, double max_shift) {
  if (centers.empty()) throw ValidationError("at least one center is required");
  if (digits < 1 || digits > 17) throw ValidationError("precision digits must lie in 1..17");
  for (const auto& c : centers)
    if (c.size() != static_cast<std::size_t>(spec.dimension)) throw ValidationError("center dimension mismatch");
  const std::size_t n = centers.size();
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, digits);

  KernelCovariance out;
  out.matrix = RationalMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double r2 = 0;
      for (int k = 0; k < spec.dimension; ++k) r2 += (centers[i][k] - centers[j][k]) * (centers[i][k] - centers[j][k]);
      if (i != j && r2 == 0) throw ValidationError("centers must be distinct");
      double v = slice_kernel(spec, std::sqrt(r2));
      Rational scaled = Rational(v) * den + Rational(1, 2);
      Integer num;
      mpz_fdiv_q(num.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      Rational q(num, den);
      q.canonicalize();
      out.matrix(i, j) = out.matrix(j, i) = q;
    }

  Rational unit(1, den);
  out.shift = 0;
  RationalMatrix shifted = out.matrix;
  for (;;) {
    out.certificate = is_positive_semidefinite(shifted);
    if (out.certificate.positive_semidefinite) break;
    out.shift = is_zero(out.shift) ? unit : Rational(2 * out.shift);
    if (out.shift.get_d() > max_shift) {
      std::ostringstream msg;
      msg << "kernel matrix needs a diagonal shift above " << max_shift << " to become positive semidefinite";
      throw NumericError(msg.str());
    }
    shifted = out.matrix;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += out.shift;
  }
  out.matrix = shifted;
  return out;
}

} // namespace forestcalc
