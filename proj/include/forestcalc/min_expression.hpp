#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forestcalc/rational.hpp"

namespace forestcalc {

/// Bitmask over the links (integration variables w_0 .. w_{tau-1}).
using LinkMask = std::uint32_t;

/// Product of powers of min-symbols; each factor is (mask, exponent) and the
/// factors are sorted by mask. A singleton mask {l} is the plain variable w_l.
using MinMonomial = std::vector<std::pair<LinkMask, std::uint8_t>>;

/// Polynomial in the symbols m_S = min{w_l : l in S}, with rational
/// coefficients. This is the integrand type of every interpolation formula.
class MinExpression {
public:
  MinExpression() = default;
  explicit MinExpression(const Rational& c);
  /// The symbol m_S; S must be nonempty.
  static MinExpression symbol(LinkMask mask);
  static MinExpression weight(int link) { return symbol(LinkMask{1} << link); }

  const std::map<MinMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Union of every mask in use.
  LinkMask support() const;
  bool has_min_symbols() const;

  void add_term(const MinMonomial& m, const Rational& c);

  MinExpression& operator+=(const MinExpression& o);
  MinExpression& operator-=(const MinExpression& o);
  MinExpression& operator*=(const Rational& s);
  MinExpression& operator*=(const MinExpression& o) { return *this = *this * o; }
  friend MinExpression operator+(MinExpression a, const MinExpression& b) { return a += b; }
  friend MinExpression operator-(MinExpression a, const MinExpression& b) { return a -= b; }
  friend MinExpression operator*(MinExpression a, const Rational& s) { return a *= s; }
  friend MinExpression operator*(const MinExpression& a, const MinExpression& b);
  friend bool operator==(const MinExpression& a, const MinExpression& b) { return a.terms_ == b.terms_; }

  /// Value at a point w (one entry per link).
  Rational evaluate(std::span<const Rational> w) const;
  double evaluate(std::span<const double> w) const;

  std::string to_string() const;

private:
  std::map<MinMonomial, Rational> terms_;
};

/// Multiplies two monomials (adds exponents of equal masks).
MinMonomial multiply(const MinMonomial& a, const MinMonomial& b);

/// Integral over 0 < u_1 < ... < u_tau < 1 of prod u_k^{a_k}, i.e.
/// prod_k 1 / (a_1 + ... + a_k + k).
Rational simplex_monomial_integral(std::span<const int> exponents_by_position);

/// Exact integral of e over the box [0,1]^tau, as the sum over the tau!
/// orderings of the variables of the integral on the corresponding simplex.
Rational integrate_min_expression(const MinExpression& e, int tau);

/// Integral of e over the single simplex where w_{order[0]} < w_{order[1]} < ...
Rational integrate_on_simplex(const MinExpression& e, std::span<const int> order);

/// Box integral of an expression free of min-symbols: prod 1/(e_l + 1).
Rational integrate_box(const MinExpression& e, int tau);

} // namespace forestcalc
