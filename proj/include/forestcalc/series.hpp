#pragma once

#include <string>
#include <vector>

#include "forestcalc/rational.hpp"

namespace forestcalc {

/// Power series c_0 + c_1 t + ... + c_p t^p truncated at order p. No
/// operation ever reads or produces coefficients beyond p.
class FormalSeries {
public:
  explicit FormalSeries(int order = 0);
  FormalSeries(int order, std::vector<Rational> coefficients);

  static FormalSeries constant(int order, const Rational& c);
  /// The series t, truncated at the given order.
  static FormalSeries generator(int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& operator[](int k) const { return c_[k]; }
  Rational& operator[](int k) { return c_[k]; }
  const std::vector<Rational>& coefficients() const { return c_; }
  bool is_zero() const;

  FormalSeries truncated(int order) const;

  FormalSeries& operator+=(const FormalSeries& o);
  FormalSeries& operator-=(const FormalSeries& o);
  FormalSeries& operator*=(const Rational& s);
  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
  friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
  friend FormalSeries operator*(FormalSeries a, const Rational& s) { return a *= s; }
  friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b);
  FormalSeries& operator*=(const FormalSeries& o) { return *this = *this * o; }
  friend bool operator==(const FormalSeries& a, const FormalSeries& b) { return a.c_ == b.c_; }

  /// 1/s; needs a nonzero constant term.
  FormalSeries inverse() const;
  FormalSeries pow(unsigned k) const;

private:
  std::vector<Rational> c_;
};

/// exp(s) for s with zero constant term.
FormalSeries series_exp(const FormalSeries& s);
/// log(s) for s with constant term exactly 1; ValidationError otherwise.
FormalSeries series_log(const FormalSeries& s);

std::vector<std::string> to_strings(const FormalSeries& s);

} // namespace forestcalc
