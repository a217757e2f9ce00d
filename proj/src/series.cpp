#include "forestcalc/series.hpp"

#include "forestcalc/errors.hpp"

#include <algorithm>

namespace forestcalc {

FormalSeries::FormalSeries(int order) {
  if (order < 0) throw ValidationError("series order must be nonnegative");
  c_.assign(order + 1, Rational(0));
}

FormalSeries::FormalSeries(int order, std::vector<Rational> coefficients) : FormalSeries(order) {
  for (std::size_t k = 0; k < coefficients.size() && k < c_.size(); ++k) c_[k] = std::move(coefficients[k]);
}

FormalSeries FormalSeries::constant(int order, const Rational& c) {
  FormalSeries s(order);
  s.c_[0] = c;
  return s;
}

FormalSeries FormalSeries::generator(int order) {
  FormalSeries s(order);
  if (order >= 1) s.c_[1] = 1;
  return s;
}

bool FormalSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

FormalSeries FormalSeries::truncated(int order) const {
  FormalSeries s(order);
  for (int k = 0; k <= std::min(order, this->order()); ++k) s.c_[k] = c_[k];
  return s;
}

namespace {
void check_orders(const FormalSeries& a, const FormalSeries& b) {
  if (a.order() != b.order()) throw ValidationError("series truncation orders differ");
}
} // namespace

FormalSeries& FormalSeries::operator+=(const FormalSeries& o) {
  check_orders(*this, o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

FormalSeries& FormalSeries::operator-=(const FormalSeries& o) {
  check_orders(*this, o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

FormalSeries& FormalSeries::operator*=(const Rational& s) {
  for (auto& c : c_) c *= s;
  return *this;
}

FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) {
  check_orders(a, b);
  const int p = a.order();
  FormalSeries out(p);
  for (int i = 0; i <= p; ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (int j = 0; i + j <= p; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return out;
}

FormalSeries FormalSeries::inverse() const {
  if (sgn(c_[0]) == 0) throw ValidationError("cannot invert a series with zero constant term");
  const int p = order();
  FormalSeries out(p);
  out.c_[0] = 1 / c_[0];
  for (int k = 1; k <= p; ++k) {
    Rational acc = 0;
    for (int j = 1; j <= k; ++j) acc += c_[j] * out.c_[k - j];
    out.c_[k] = -acc / c_[0];
  }
  return out;
}

FormalSeries FormalSeries::pow(unsigned k) const {
  FormalSeries result = constant(order(), 1);
  for (unsigned i = 0; i < k; ++i) result *= *this;
  return result;
}

FormalSeries series_exp(const FormalSeries& s) {
  if (sgn(s[0]) != 0) throw ValidationError("exp needs a series with zero constant term");
  const int p = s.order();
  FormalSeries e(p);
  e[0] = 1;
  // E' = S' E
  for (int k = 1; k <= p; ++k) {
    Rational acc = 0;
    for (int j = 1; j <= k; ++j) acc += Rational(j) * s[j] * e[k - j];
    e[k] = acc / k;
  }
  return e;
}

FormalSeries series_log(const FormalSeries& s) {
  if (sgn(s[0]) == 0) throw ValidationError("log of a series with zero constant term");
  if (s[0] != 1) throw ValidationError("log needs constant term 1; divide by it first");
  const int p = s.order();
  FormalSeries l(p);
  // S L' = S'
  for (int k = 1; k <= p; ++k) {
    Rational acc = 0;
    for (int j = 1; j < k; ++j) acc += Rational(j) * l[j] * s[k - j];
    l[k] = s[k] - acc / k;
  }
  return l;
}

std::vector<std::string> to_strings(const FormalSeries& s) {
  std::vector<std::string> out;
  out.reserve(s.coefficients().size());
  for (const auto& c : s.coefficients()) out.push_back(to_string(c));
  return out;
}

} // namespace forestcalc
