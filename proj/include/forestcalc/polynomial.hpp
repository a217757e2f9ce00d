#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forestcalc/rational.hpp"

namespace forestcalc {

/// Dense exponent vector, one entry per declared variable.
using Exponents = std::vector<std::uint8_t>;

/// Sparse multivariate polynomial with rational coefficients over a fixed,
/// named variable set. Zero coefficients are never stored.
class RationalPolynomial {
public:
  using Variables = std::shared_ptr<const std::vector<std::string>>;

  explicit RationalPolynomial(std::vector<std::string> variables);
  explicit RationalPolynomial(Variables variables);

  static RationalPolynomial constant(Variables variables, const Rational& c);
  static RationalPolynomial variable(Variables variables, int index);

  const Variables& variables() const { return vars_; }
  std::size_t variable_count() const { return vars_->size(); }
  int index_of(std::string_view name) const;

  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;

  /// Adds c * x^e; drops the monomial if the coefficient cancels.
  void add_term(const Exponents& e, const Rational& c);
  Rational coefficient(const Exponents& e) const;

  RationalPolynomial& operator+=(const RationalPolynomial& o);
  RationalPolynomial& operator-=(const RationalPolynomial& o);
  RationalPolynomial& operator*=(const Rational& s);
  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b);
  friend RationalPolynomial operator*(RationalPolynomial a, const Rational& s) { return a *= s; }
  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) { return a.terms_ == b.terms_; }

  RationalPolynomial pow(unsigned k) const;
  RationalPolynomial derivative(int index) const;
  RationalPolynomial derivative(std::string_view name) const { return derivative(index_of(name)); }
  RationalPolynomial substitute(int index, const Rational& value) const;
  RationalPolynomial substitute(std::string_view name, const Rational& value) const {
    return substitute(index_of(name), value);
  }
  RationalPolynomial substitute(int index, const RationalPolynomial& value) const;
  Rational evaluate(std::span<const Rational> point) const;

  std::string to_string() const;

private:
  void check_compatible(const RationalPolynomial& o) const;
  void check_index(int index) const;

  Variables vars_;
  std::map<Exponents, Rational> terms_;
};

/// Polynomial with random coefficients (|num| <= 9, den <= 6), every monomial
/// of total degree <= max_degree present with probability 1/2.
RationalPolynomial random_polynomial(const RationalPolynomial::Variables& vars, int max_degree,
                                     std::mt19937_64& rng);

} // namespace forestcalc
