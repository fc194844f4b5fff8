// Exact rational arithmetic and eventually periodic base-b digit expansions.

#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zerofull {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// High-precision float for display values, dimension formulas and fit
// diagnostics. 50 decimal digits (~166 bits of mantissa); everything that
// decides an outcome is done in exact arithmetic, never in Real.
using Real = boost::multiprecision::cpp_bin_float_50;

// A hard limit was exceeded (enumeration caps, census caps).
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// A stated hypothesis of an operation does not hold for these inputs.
class precondition_error : public std::domain_error {
 public:
  explicit precondition_error(const std::string& what) : std::domain_error(what) {}
};

// Marker subclass: the operation's hypothesis excludes this input and the
// caller is expected to handle the regime itself (e.g. large radii).
class not_applicable_error : public precondition_error {
 public:
  explicit not_applicable_error(const std::string& what) : precondition_error(what) {}
};

class degenerate_fit_error : public std::runtime_error {
 public:
  explicit degenerate_fit_error(const std::string& what) : std::runtime_error(what) {}
};

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational: zero denominator");
  return Rational(num, den);
}

inline BigInt pow_int(BigInt base, unsigned long long exp) {
  BigInt r = 1;
  while (exp > 0) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

// base^exp for integer exp of either sign.
inline Rational pow_rational(const Rational& base, long long exp) {
  if (exp >= 0) {
    return Rational(pow_int(numerator(base), static_cast<unsigned long long>(exp)),
                    pow_int(denominator(base), static_cast<unsigned long long>(exp)));
  }
  if (base == 0) throw std::domain_error("pow_rational: negative power of zero");
  return Rational(pow_int(denominator(base), static_cast<unsigned long long>(-exp)),
                  pow_int(numerator(base), static_cast<unsigned long long>(-exp)));
}

inline BigInt floor_rational(const Rational& q) {
  BigInt quo = numerator(q) / denominator(q);
  if (numerator(q) < 0 && quo * denominator(q) != numerator(q)) --quo;
  return quo;
}

inline BigInt ceil_rational(const Rational& q) {
  BigInt f = floor_rational(q);
  return f * denominator(q) == numerator(q) ? f : f + 1;
}

inline Rational abs_rational(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Real to_real(const Rational& q) {
  return Real(numerator(q)) / Real(denominator(q));
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Parses "p/q", plain integers and finite decimal strings ("0.43" = 43/100,
// exactly). Anything else (floats with exponents, whitespace, empty) is
// rejected so no value ever passes through a double.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw std::domain_error("cannot parse rational: '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  bool negative = false;
  size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  auto read_digits = [&](size_t& at) {
    size_t start = at;
    while (at < text.size() && is_digit(text[at])) ++at;
    if (at == start) fail();
    return BigInt(std::string(text.substr(start, at - start)));
  };
  BigInt int_part = read_digits(pos);
  Rational value(int_part);
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    BigInt den = read_digits(pos);
    if (pos != text.size() || den == 0) fail();
    value = Rational(int_part, den);
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    size_t start = pos;
    BigInt frac = read_digits(pos);
    if (pos != text.size()) fail();
    value += Rational(frac, pow_int(10, pos - start));
  } else if (pos != text.size()) {
    fail();
  }
  return negative ? Rational(-value) : value;
}

// Eventually periodic base-b expansion of a rational in [0,1]:
//   x = 0.(preperiod)(period)(period)...
// For terminating x the canonical form pads with period {0}; has_alternate
// reports that a trailing-(base-1) rewriting of the expansion exists (for
// x = 1 the returned all-(base-1) form is itself that rewriting).
struct DigitExpansion {
  long long base = 0;
  std::vector<int> preperiod;
  std::vector<int> period;
  bool has_alternate = false;

  bool terminating() const { return period.size() == 1 && period[0] == 0; }

  // 1-indexed digit access, unrolling the period.
  int digit(size_t k) const {
    if (k == 0) throw std::domain_error("DigitExpansion::digit is 1-indexed");
    if (k <= preperiod.size()) return preperiod[k - 1];
    return period[(k - 1 - preperiod.size()) % period.size()];
  }

  // Positions 1..window() determine every digit.
  size_t window() const { return preperiod.size() + period.size(); }
};

inline Rational value_of(const DigitExpansion& e) {
  const BigInt b = e.base;
  BigInt pre = 0;
  for (int d : e.preperiod) pre = pre * b + d;
  BigInt per = 0;
  for (int d : e.period) per = per * b + d;
  const BigInt bp = pow_int(b, e.preperiod.size());
  const BigInt bq = pow_int(b, e.period.size());
  // pre/b^|pre| + per/(b^|pre|(b^|per|-1))
  return Rational(pre, bp) + Rational(per, bp * (bq - 1));
}

// Exact long division with remainder-cycle detection.
inline DigitExpansion expand(const Rational& x, long long base) {
  if (base < 2) throw std::domain_error("expand: base must be >= 2");
  if (x < 0 || x > 1) throw std::domain_error("expand: value outside [0,1]");
  DigitExpansion e;
  e.base = base;
  if (x == 1) {
    // 1 has no terminating fractional expansion; its unique digit form is
    // the trailing-(base-1) one.
    e.period = {static_cast<int>(base - 1)};
    e.has_alternate = true;
    return e;
  }
  const BigInt den = denominator(x);
  BigInt rem = numerator(x);
  std::vector<int> digits;
  std::map<BigInt, size_t> seen;  // remainder -> index of next digit
  while (true) {
    if (rem == 0) {
      e.preperiod = std::move(digits);
      e.period = {0};
      e.has_alternate = x != 0;
      return e;
    }
    auto [it, fresh] = seen.emplace(rem, digits.size());
    if (!fresh) {
      e.preperiod.assign(digits.begin(), digits.begin() + static_cast<long>(it->second));
      e.period.assign(digits.begin() + static_cast<long>(it->second), digits.end());
      return e;
    }
    rem *= base;
    digits.push_back(static_cast<int>(BigInt(rem / den)));
    rem %= den;
  }
}

// The trailing-(base-1) rewriting of a terminating expansion, when it exists.
inline std::optional<DigitExpansion> alternate_of(const DigitExpansion& e) {
  if (!e.terminating() || e.preperiod.empty()) return std::nullopt;
  DigitExpansion alt;
  alt.base = e.base;
  alt.preperiod = e.preperiod;
  size_t last = alt.preperiod.size();
  while (last > 0 && alt.preperiod[last - 1] == 0) --last;
  if (last == 0) return std::nullopt;  // value 0 has a single expansion
  alt.preperiod.resize(last);
  alt.preperiod[last - 1] -= 1;
  alt.period = {static_cast<int>(e.base - 1)};
  alt.has_alternate = true;
  return alt;
}

// The n base-b digits of p/b^n, most significant first.
inline std::vector<int> digits_fixed(const BigInt& p, long long base, long long n) {
  if (base < 2) throw std::domain_error("digits_fixed: base must be >= 2");
  if (n < 0) throw std::domain_error("digits_fixed: negative length");
  if (p < 0 || p >= pow_int(base, static_cast<unsigned long long>(n)))
    throw std::domain_error("digits_fixed: p outside [0, base^n)");
  std::vector<int> digits(static_cast<size_t>(n), 0);
  BigInt rest = p;
  for (long long i = n - 1; i >= 0; --i) {
    digits[static_cast<size_t>(i)] = static_cast<int>(BigInt(rest % base));
    rest /= base;
  }
  return digits;
}

}  // namespace zerofull
