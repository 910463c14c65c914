#include "mwb/rational.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "mwb/errors.hpp"

namespace mwb {

namespace {

Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw InputError("malformed number: '" + std::string(whole) + "'");
  for (char c : digits) {
    if (c < '0' || c > '9') throw InputError("malformed number: '" + std::string(whole) + "'");
  }
  return Integer(std::string(digits));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw InputError("empty number");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    Integer ev = parse_integer(exp_part, text);
    if (ev > 4096) throw InputError("exponent out of range in '" + std::string(text) + "'");
    exponent = ev.convert_to<long>();
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }

  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw InputError("malformed number: '" + std::string(text) + "'");
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    digits = std::string(s);
  }

  Rational value(parse_integer(digits, text));
  if (exponent > 0) {
    value *= Rational(ipow(Integer(10), static_cast<unsigned>(exponent)));
  } else if (exponent < 0) {
    value /= Rational(ipow(Integer(10), static_cast<unsigned>(-exponent)));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_string(const Integer& z) { return z.str(); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw InputError("non-finite value cannot be made exact");
  int exp = 0;
  double mant = std::frexp(x, &exp);
  // 53 bits of mantissa fit exactly in an int64.
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r{Integer(scaled)};
  if (exp > 0) {
    r *= Rational(Integer(1) << exp);
  } else if (exp < 0) {
    r /= Rational(Integer(1) << -exp);
  }
  return r;
}

double log_abs(const Integer& z) {
  if (z == 0) throw InputError("log of zero");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.backend().data());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double log_of(const Rational& q) {
  if (q <= 0) throw InputError("log of a non-positive rational");
  return log_abs(numerator(q)) - log_abs(denominator(q));
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Integer factorial(unsigned n) {
  Integer out = 1;
  for (unsigned i = 2; i <= n; ++i) out *= i;
  return out;
}

Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer out;
  mpz_bin_uiui(out.backend().data(), n, k);
  return out;
}

Integer ipow(const Integer& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

Rational qpow(const Rational& base, unsigned exp) {
  return Rational(ipow(numerator(base), exp), ipow(denominator(base), exp));
}

Integer bareiss_determinant(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

}  // namespace mwb
