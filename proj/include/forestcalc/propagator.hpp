#pragma once

#include <span>
#include <vector>

#include "forestcalc/matrix.hpp"
#include "forestcalc/weakening.hpp"

namespace forestcalc {

/// Position-space slice kernel
///   C(r) = int_a^b alpha^{-d/2} exp(-alpha m^2 - r^2 / (4 alpha)) d alpha
/// with [a, b] = [M^{-2j}, M^{-2(j-1)}] for j >= 1, [1, inf) for j = 0,
/// or the single window [M^{-1}, 1] when `window` is set.
struct SliceSpec {
  int dimension = 2;
  double ratio = 2;
  int slice = 1;
  double mass = 0;
  bool window = false;

  void validate() const;
  double lower() const;
  /// +inf for j = 0
  double upper() const;
};

/// Relative tolerance requested from the quadrature.
inline constexpr double kernel_tolerance = 1e-10;

/// Adaptive Gauss-Kronrod evaluation; NumericError when the error estimate
/// exceeds kernel_tolerance relative to the integral.
double slice_kernel(const SliceSpec& spec, double r);

/// C^{j+1}(r) / (M^{d-2} C^j(M r)) - 1, which vanishes for m = 0.
double scaling_defect(const SliceSpec& spec, double r);

struct DecayFit {
  /// smallest K with C^j(r) <= K M^{2j} exp(-M^j r / K) on every radius
  double k = 0;
  double binding_radius = 0;
  /// per-radius minimal K
  std::vector<double> per_radius;
};

/// Fits K on the given radii by bisection (the bound is monotone in K).
/// NumericError when no K below 1e12 works.
DecayFit decay_bound_fit(const SliceSpec& spec, std::span<const double> radii);

/// Radii t * M^{-j} for t = 0, step, ..., t_max.
std::vector<double> slice_grid(const SliceSpec& spec, double step, double t_max);

struct KernelCovariance {
  RationalMatrix matrix;
  /// multiple of the identity added to reach an exact PSD certificate
  Rational shift;
  PsdCertificate certificate;
};

/// Kernel matrix on the given centers (points of R^d), rounded to denominator
/// 10^digits, then shifted by the least power-of-two multiple of 10^-digits
/// needed for positivity. NumericError when the shift exceeds `max_shift`.
KernelCovariance covariance_matrix_from_kernel(const SliceSpec& spec, const std::vector<std::vector<double>>& centers,
                                               int digits = 12, double max_shift = 1e-6);

} // namespace forestcalc
