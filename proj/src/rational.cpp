#include "cachecalc/rational.hpp"

#include <cstdio>

namespace cachecalc {


Integer binom(long a, long b) {
  if (!(a >= b && b >= 0)) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(a),
               static_cast<unsigned long>(b));
  return out;
}


Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    // decimal form: digits '.' digits
    std::string head = text.substr(0, dot), tail = text.substr(dot + 1);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
      return std::nullopt;
    bool neg = !head.empty() && head[0] == '-';
    if (neg) head.erase(0, 1);
    if (head.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    if (head.empty()) head = "0";
    Integer num(head + tail);
    Integer den(1);
    for (size_t i = 0; i < tail.size(); ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    if (neg) q = -q;
    return q;
  }
  mpq_t raw;
  mpq_init(raw);
  if (mpq_set_str(raw, text.c_str(), 10) != 0 || mpz_sgn(mpq_denref(raw)) <= 0) {
    mpq_clear(raw);
    return std::nullopt;
  }
  Rational q(raw);
  mpq_clear(raw);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_decimal_string(double x, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, x);
  return buf;
}

Integer lcm_denominators(const std::vector<Rational>& values) {
  Integer l = 1;
  for (const auto& v : values) {
    Integer den = v.get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
  }
  return l;
}

}  // namespace cachecalc
