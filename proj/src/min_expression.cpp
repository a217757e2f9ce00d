#include "forestcalc/min_expression.hpp"

#include "forestcalc/errors.hpp"
#include "forestcalc/limits.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace forestcalc {

MinExpression::MinExpression(const Rational& c) { add_term({}, c); }

MinExpression MinExpression::symbol(LinkMask mask) {
  if (mask == 0) throw ValidationError("min-symbol over an empty link set");
  MinExpression e;
  e.add_term({{mask, 1}}, 1);
  return e;
}

LinkMask MinExpression::support() const {
  LinkMask s = 0;
  for (const auto& [m, c] : terms_)
    for (const auto& [mask, p] : m) s |= mask;
  return s;
}

bool MinExpression::has_min_symbols() const {
  for (const auto& [m, c] : terms_)
    for (const auto& [mask, p] : m)
      if (std::popcount(mask) > 1) return true;
  return false;
}

void MinExpression::add_term(const MinMonomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

MinExpression& MinExpression::operator+=(const MinExpression& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MinExpression& MinExpression::operator-=(const MinExpression& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MinExpression& MinExpression::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

MinMonomial multiply(const MinMonomial& a, const MinMonomial& b) {
  MinMonomial out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) out.push_back(*i++);
    else if (i == a.end() || j->first < i->first) out.push_back(*j++);
    else {
      unsigned p = unsigned(i->second) + j->second;
      if (p > 255) throw SizeLimitError("exponent overflow in min-expression product");
      out.emplace_back(i->first, static_cast<std::uint8_t>(p));
      ++i;
      ++j;
    }
  }
  return out;
}

MinExpression operator*(const MinExpression& a, const MinExpression& b) {
  MinExpression out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(multiply(ma, mb), ca * cb);
  return out;
}

namespace {

template <typename T>
T min_over(LinkMask mask, std::span<const T> w) {
  if (std::bit_width(mask) > w.size()) throw ValidationError("min-symbol refers to a link outside the point");
  bool first = true;
  T best{};
  for (LinkMask rest = mask; rest != 0; rest &= rest - 1) {
    int l = std::countr_zero(rest);
    if (first || w[l] < best) best = w[l];
    first = false;
  }
  return best;
}

} // namespace

Rational MinExpression::evaluate(std::span<const Rational> w) const {
  Rational total = 0;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (const auto& [mask, p] : m) {
      Rational v = min_over<Rational>(mask, w);
      for (unsigned k = 0; k < p; ++k) term *= v;
    }
    total += term;
  }
  return total;
}

double MinExpression::evaluate(std::span<const double> w) const {
  double total = 0;
  for (const auto& [m, c] : terms_) {
    double term = c.get_d();
    for (const auto& [mask, p] : m) {
      double v = min_over<double>(mask, w);
      for (unsigned k = 0; k < p; ++k) term *= v;
    }
    total += term;
  }
  return total;
}

std::string MinExpression::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << forestcalc::to_string(c);
    for (const auto& [mask, p] : m) {
      os << "*m{";
      bool inner = true;
      for (LinkMask rest = mask; rest != 0; rest &= rest - 1) {
        os << (inner ? "" : ",") << std::countr_zero(rest);
        inner = false;
      }
      os << '}';
      if (p > 1) os << '^' << int(p);
    }
  }
  return os.str();
}

Rational simplex_monomial_integral(std::span<const int> exponents_by_position) {
  Integer den = 1;
  long partial = 0;
  for (std::size_t k = 0; k < exponents_by_position.size(); ++k) {
    partial += exponents_by_position[k] + 1;
    den *= partial;
  }
  return Rational(Integer(1), den);
}

namespace {

void check_masks(const MinExpression& e, int tau) {
  if (tau < 0) throw ValidationError("negative link count");
  if (tau > 32) throw SizeLimitError("at most 32 integration variables");
  LinkMask allowed = tau == 32 ? ~LinkMask{0} : ((LinkMask{1} << tau) - 1);
  if ((e.support() & ~allowed) != 0) throw ValidationError("min-symbol refers to a link outside the integration set");
}

// Sum over monomials of the simplex integral for one ordering; pos[l] is the
// rank of link l (0 = smallest value).
Rational simplex_sum(const MinExpression& e, std::span<const int> pos, int tau) {
  Rational total = 0;
  std::vector<int> exps(tau);
  for (const auto& [m, c] : e.terms()) {
    std::fill(exps.begin(), exps.end(), 0);
    for (const auto& [mask, p] : m) {
      int best = tau;
      for (LinkMask rest = mask; rest != 0; rest &= rest - 1) best = std::min(best, pos[std::countr_zero(rest)]);
      exps[best] += p;
    }
    total += c * simplex_monomial_integral(exps);
  }
  return total;
}

} // namespace

Rational integrate_min_expression(const MinExpression& e, int tau) {
  require_within(tau, limits().tau, "box integration dimension tau");
  check_masks(e, tau);
  if (e.is_zero()) return 0;
  std::vector<int> order(tau);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> pos(tau);
  Rational total = 0;
  do {
    for (int k = 0; k < tau; ++k) pos[order[k]] = k;
    total += simplex_sum(e, pos, tau);
  } while (std::next_permutation(order.begin(), order.end()));
  return total;
}

Rational integrate_on_simplex(const MinExpression& e, std::span<const int> order) {
  const int tau = static_cast<int>(order.size());
  check_masks(e, tau);
  std::vector<int> pos(tau, -1);
  for (int k = 0; k < tau; ++k) {
    if (order[k] < 0 || order[k] >= tau || pos[order[k]] != -1) throw ValidationError("ordering is not a permutation");
    pos[order[k]] = k;
  }
  return simplex_sum(e, pos, tau);
}

Rational integrate_box(const MinExpression& e, int tau) {
  check_masks(e, tau);
  Rational total = 0;
  for (const auto& [m, c] : e.terms()) {
    Integer den = 1;
    for (const auto& [mask, p] : m) {
      if (std::popcount(mask) != 1) throw ValidationError("integrate_box needs an expression without min-symbols");
      den *= unsigned(p) + 1;
    }
    total += c / Rational(den);
  }
  return total;
}

} // namespace forestcalc
