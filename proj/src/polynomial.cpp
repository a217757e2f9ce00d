#include "forestcalc/polynomial.hpp"

#include "forestcalc/errors.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace forestcalc {

RationalPolynomial::RationalPolynomial(std::vector<std::string> variables)
    : vars_(std::make_shared<const std::vector<std::string>>(std::move(variables))) {}

RationalPolynomial::RationalPolynomial(Variables variables) : vars_(std::move(variables)) {
  if (!vars_) throw ValidationError("polynomial needs a variable set");
}

RationalPolynomial RationalPolynomial::constant(Variables variables, const Rational& c) {
  RationalPolynomial p(std::move(variables));
  p.add_term(Exponents(p.variable_count(), 0), c);
  return p;
}

RationalPolynomial RationalPolynomial::variable(Variables variables, int index) {
  RationalPolynomial p(std::move(variables));
  p.check_index(index);
  Exponents e(p.variable_count(), 0);
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

int RationalPolynomial::index_of(std::string_view name) const {
  auto it = std::find(vars_->begin(), vars_->end(), name);
  if (it == vars_->end()) throw ValidationError("unknown variable '" + std::string(name) + "'");
  return static_cast<int>(it - vars_->begin());
}

void RationalPolynomial::check_index(int index) const {
  if (index < 0 || index >= static_cast<int>(variable_count())) throw ValidationError("variable index out of range");
}

void RationalPolynomial::check_compatible(const RationalPolynomial& o) const {
  if (vars_ != o.vars_ && *vars_ != *o.vars_) throw ValidationError("polynomials over different variable sets");
}

int RationalPolynomial::total_degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (auto x : e) d += x;
    best = std::max(best, d);
  }
  return best;
}

void RationalPolynomial::add_term(const Exponents& e, const Rational& c) {
  if (e.size() != variable_count()) throw ValidationError("exponent vector has the wrong length");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Rational RationalPolynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
  a.check_compatible(b);
  RationalPolynomial out(a.vars_);
  Exponents e(a.variable_count());
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t k = 0; k < e.size(); ++k) {
        unsigned sum = unsigned(ea[k]) + eb[k];
        if (sum > 255) throw SizeLimitError("exponent overflow in polynomial product");
        e[k] = static_cast<std::uint8_t>(sum);
      }
      out.add_term(e, ca * cb);
    }
  return out;
}

RationalPolynomial RationalPolynomial::pow(unsigned k) const {
  RationalPolynomial result = constant(vars_, 1);
  RationalPolynomial base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

RationalPolynomial RationalPolynomial::derivative(int index) const {
  check_index(index);
  RationalPolynomial out(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[index] == 0) continue;
    Exponents d = e;
    --d[index];
    out.add_term(d, c * e[index]);
  }
  return out;
}

RationalPolynomial RationalPolynomial::substitute(int index, const Rational& value) const {
  check_index(index);
  RationalPolynomial out(vars_);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    d[index] = 0;
    Rational factor;
    mpz_pow_ui(factor.get_num_mpz_t(), value.get_num_mpz_t(), e[index]);
    mpz_pow_ui(factor.get_den_mpz_t(), value.get_den_mpz_t(), e[index]);
    out.add_term(d, c * factor);
  }
  return out;
}

RationalPolynomial RationalPolynomial::substitute(int index, const RationalPolynomial& value) const {
  check_index(index);
  check_compatible(value);
  RationalPolynomial out(vars_);
  std::map<unsigned, RationalPolynomial> powers;
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    d[index] = 0;
    RationalPolynomial mono(vars_);
    mono.add_term(d, c);
    auto it = powers.find(e[index]);
    if (it == powers.end()) it = powers.emplace(e[index], value.pow(e[index])).first;
    out += mono * it->second;
  }
  return out;
}

Rational RationalPolynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != variable_count()) throw ValidationError("evaluation point has the wrong dimension");
  Rational total = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t k = 0; k < e.size(); ++k)
      for (unsigned p = 0; p < e[k]; ++p) term *= point[k];
    total += term;
  }
  return total;
}

std::string RationalPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << " + ";
    first = false;
    os << forestcalc::to_string(c);
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      os << '*' << (*vars_)[k];
      if (e[k] > 1) os << '^' << int(e[k]);
    }
  }
  return os.str();
}

RationalPolynomial random_polynomial(const RationalPolynomial::Variables& vars, int max_degree,
                                     std::mt19937_64& rng) {
  RationalPolynomial p(vars);
  const std::size_t nv = vars->size();
  Exponents e(nv, 0);
  std::bernoulli_distribution keep(0.5);
  std::function<void(std::size_t, int)> walk = [&](std::size_t k, int left) {
    if (k == nv) {
      if (keep(rng)) p.add_term(e, random_rational(rng, 9, 6));
      return;
    }
    for (int d = 0; d <= left; ++d) {
      e[k] = static_cast<std::uint8_t>(d);
      walk(k + 1, left - d);
    }
    e[k] = 0;
  };
  walk(0, max_degree);
  return p;
}

} // namespace forestcalc
