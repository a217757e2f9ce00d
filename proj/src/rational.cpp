#include "forestcalc/rational.hpp"

#include "forestcalc/errors.hpp"

#include <cctype>

namespace forestcalc {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw ValidationError("empty rational literal");

  if (auto dot = s.find('.'); dot != std::string::npos) {
    if (s.find('/') != std::string::npos || s.find_first_of("eE") != std::string::npos)
      throw ValidationError("unsupported rational literal '" + s + "'");
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t scale = s.size() - dot - 1;
    Integer num;
    if (digits.empty() || digits == "-" || digits == "+" || num.set_str(digits, 10) != 0)
      throw ValidationError("bad decimal literal '" + s + "'");
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  Rational q;
  std::string body = (!s.empty() && s[0] == '+') ? s.substr(1) : s;
  if (q.set_str(body, 10) != 0) throw ValidationError("bad rational literal '" + s + "'");
  if (sgn(q.get_den()) == 0) throw ValidationError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

Integer factorial_z(unsigned k) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return f;
}

Rational factorial(unsigned k) { return Rational(factorial_z(k)); }

Rational random_rational(std::mt19937_64& rng, long max_num, long max_den) {
  std::uniform_int_distribution<long> num(-max_num, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

Rational random_unit_rational(std::mt19937_64& rng, long max_den) {
  std::uniform_int_distribution<long> den_dist(1, max_den);
  long den = den_dist(rng);
  std::uniform_int_distribution<long> num_dist(0, den);
  Rational q(num_dist(rng), den);
  q.canonicalize();
  return q;
}

} // namespace forestcalc
