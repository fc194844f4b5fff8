// Generalized Cantor set C(b,D): construction levels, endpoint sets,
// exact membership and exact distance queries.

#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "zerofull/exactnum.hpp"

namespace zerofull {

inline constexpr long long kDefaultEnumCap = 10'000'000;

// Base b >= 3 and a digit set D with 2 <= |D| <= b-1. Derived quantities:
// m_l/m_r count the digits missing from D at the bottom/top, gamma() is the
// Hausdorff dimension log|D|/log b.
class CantorParams {
 public:
  CantorParams(long long base, std::vector<int> digit_set) : b_(base), digits_(std::move(digit_set)) {
    std::sort(digits_.begin(), digits_.end());
    digits_.erase(std::unique(digits_.begin(), digits_.end()), digits_.end());
    if (b_ < 3) throw std::domain_error("CantorParams: base must be >= 3");
    if (digits_.size() < 2 || digits_.size() > static_cast<size_t>(b_ - 1))
      throw std::domain_error("CantorParams: need 2 <= |D| <= b-1");
    if (digits_.front() < 0 || digits_.back() >= b_)
      throw std::domain_error("CantorParams: digits must lie in {0,...,b-1}");
    mask_.assign(static_cast<size_t>(b_), false);
    for (int d : digits_) mask_[static_cast<size_t>(d)] = true;
  }

  long long base() const { return b_; }
  const std::vector<int>& digits() const { return digits_; }
  long long digit_count() const { return static_cast<long long>(digits_.size()); }
  bool contains_digit(int d) const { return d >= 0 && d < b_ && mask_[static_cast<size_t>(d)]; }

  int min_digit() const { return digits_.front(); }
  int max_digit() const { return digits_.back(); }
  int m_l() const { return digits_.front(); }
  int m_r() const { return static_cast<int>(b_ - 1) - digits_.back(); }
  int m() const { return std::min(m_l(), m_r()); }

  // Smallest admissible digit strictly above d, if any.
  std::optional<int> digit_above(int d) const {
    auto it = std::upper_bound(digits_.begin(), digits_.end(), d);
    if (it == digits_.end()) return std::nullopt;
    return *it;
  }
  // Largest admissible digit strictly below d, if any.
  std::optional<int> digit_below(int d) const {
    auto it = std::lower_bound(digits_.begin(), digits_.end(), d);
    if (it == digits_.begin()) return std::nullopt;
    return *(--it);
  }

  // min C(b,D) = minD/(b-1), max C(b,D) = maxD/(b-1).
  Rational set_min() const { return Rational(min_digit(), b_ - 1); }
  Rational set_max() const { return Rational(max_digit(), b_ - 1); }

  Real gamma() const {
    return log(Real(digit_count())) / log(Real(b_));
  }

 private:
  long long b_;
  std::vector<int> digits_;
  std::vector<bool> mask_;
};

struct Interval {
  Rational left;
  Rational right;
};

namespace detail {

// Iterates the |D|^n digit tuples in lexicographic order, yielding the left
// endpoint numerators p with digits_fixed(p,b,n) in D^n, in increasing order.
template <typename Fn>
void for_each_level_numerator(const CantorParams& params, long long n, long long cap, Fn&& fn) {
  const auto& D = params.digits();
  const long long k = params.digit_count();
  BigInt total = 1;
  for (long long i = 0; i < n; ++i) {
    total *= k;
    if (total > cap)
      throw resource_error("level enumeration exceeds cap of " + std::to_string(cap) +
                           " intervals (|D|^n too large)");
  }
  if (n == 0) {
    fn(BigInt(0));
    return;
  }
  std::vector<size_t> idx(static_cast<size_t>(n), 0);
  std::vector<BigInt> place(static_cast<size_t>(n));  // place[i] = b^(n-1-i)
  place[static_cast<size_t>(n - 1)] = 1;
  for (long long i = n - 2; i >= 0; --i)
    place[static_cast<size_t>(i)] = place[static_cast<size_t>(i + 1)] * params.base();
  BigInt p = 0;
  for (long long i = 0; i < n; ++i) p += place[static_cast<size_t>(i)] * D[0];
  while (true) {
    fn(p);
    long long pos = n - 1;
    while (pos >= 0 && idx[static_cast<size_t>(pos)] + 1 == static_cast<size_t>(k)) {
      p -= place[static_cast<size_t>(pos)] * (D.back() - D.front());
      idx[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return;
    size_t& i = idx[static_cast<size_t>(pos)];
    p += place[static_cast<size_t>(pos)] * (D[i + 1] - D[i]);
    ++i;
  }
}

}  // namespace detail

// The |D|^n closed intervals of the n-th construction level, sorted.
inline std::vector<Interval> level_intervals(const CantorParams& params, long long n,
                                             long long cap = kDefaultEnumCap) {
  if (n < 0) throw std::domain_error("level_intervals: n must be >= 0");
  const BigInt bn = pow_int(params.base(), static_cast<unsigned long long>(n));
  std::vector<Interval> out;
  detail::for_each_level_numerator(params, n, cap, [&](const BigInt& p) {
    out.push_back({Rational(p, bn), Rational(p + 1, bn)});
  });
  return out;
}

inline void check_lattice_range(const CantorParams& params, const BigInt& p, long long n) {
  if (n < 0 || p < 0 || p > pow_int(params.base(), static_cast<unsigned long long>(n)))
    throw std::domain_error("lattice numerator outside [0, b^n]");
}

// p/b^n is a left endpoint of a level-n interval.
inline bool is_left_endpoint(const CantorParams& params, const BigInt& p, long long n) {
  check_lattice_range(params, p, n);
  if (p == pow_int(params.base(), static_cast<unsigned long long>(n))) return false;
  for (int d : digits_fixed(p, params.base(), n))
    if (!params.contains_digit(d)) return false;
  return true;
}

// p/b^n is a right endpoint of a level-n interval.
inline bool is_right_endpoint(const CantorParams& params, const BigInt& p, long long n) {
  check_lattice_range(params, p, n);
  if (p == 0) return false;
  for (int d : digits_fixed(p - 1, params.base(), n))
    if (!params.contains_digit(d)) return false;
  return true;
}

namespace detail {

inline bool all_digits_admissible(const CantorParams& params, const DigitExpansion& e) {
  for (int d : e.preperiod)
    if (!params.contains_digit(d)) return false;
  for (int d : e.period)
    if (!params.contains_digit(d)) return false;
  return true;
}

}  // namespace detail

// Membership uses whichever expansion of x (canonical or trailing-(b-1))
// has all digits in D; e.g. 1/3 is in C(3,{0,2}) only as 0.0222....
inline bool member(const CantorParams& params, const Rational& x) {
  if (x < 0 || x > 1) throw std::domain_error("member: value outside [0,1]");
  DigitExpansion e = expand(x, params.base());
  if (detail::all_digits_admissible(params, e)) return true;
  if (auto alt = alternate_of(e)) return detail::all_digits_admissible(params, *alt);
  return false;
}

namespace detail {

// One-sided nearest-point candidate produced by following x's digits up to
// position k-1, deviating at k, then running the extreme admissible tail.
struct NearestCandidate {
  Rational point;
  Rational distance;
};

// Enumerates all candidate nearest points of C(b,D) around x. The expansion
// of a rational is eventually periodic, and digit agreement ends at the
// first inadmissible digit, so the candidate set is finite.
inline std::vector<NearestCandidate> nearest_candidates(const CantorParams& params,
                                                        const Rational& x) {
  const DigitExpansion e = expand(x, params.base());
  const long long b = params.base();
  std::vector<NearestCandidate> out;
  const Rational min_tail(params.min_digit(), b - 1);  // value of all-min tail at scale 1
  const Rational max_tail(params.max_digit(), b - 1);
  Rational prefix = 0;      // sum of x's digits before position k
  Rational scale(1, b);     // b^{-k}
  for (size_t k = 1; k <= e.window() + 1; ++k) {
    const int digit = e.digit(k);
    if (auto up = params.digit_above(digit)) {
      Rational y = prefix + scale * *up + scale * min_tail;
      out.push_back({y, abs_rational(y - x)});
    }
    if (auto down = params.digit_below(digit)) {
      Rational y = prefix + scale * *down + scale * max_tail;
      out.push_back({y, abs_rational(y - x)});
    }
    if (!params.contains_digit(digit)) break;  // agreement cannot continue
    prefix += scale * digit;
    scale /= b;
  }
  return out;
}

}  // namespace detail

// Exact distance from x to C(b,D) together with the nearest point
// (the smaller witness on ties).
inline std::pair<Rational, Rational> distance_with_witness(const CantorParams& params,
                                                           const Rational& x) {
  if (x < 0 || x > 1) throw std::domain_error("distance: value outside [0,1]");
  if (member(params, x)) return {Rational(0), x};
  auto candidates = detail::nearest_candidates(params, x);
  // x is in [0,1] and not a member, so a nearest point exists on some side.
  std::optional<detail::NearestCandidate> best;
  for (const auto& c : candidates) {
    if (!best || c.distance < best->distance ||
        (c.distance == best->distance && c.point < best->point)) {
      best = c;
    }
  }
  return {best->distance, best->point};
}

inline Rational distance(const CantorParams& params, const Rational& x) {
  return distance_with_witness(params, x).first;
}

// Exact test distance(x) < r. Digits of x are produced by streaming long
// division and the scan stops after K digits, where b^-K < r: an admissible
// prefix of length K puts some point of C within b^-K of x, so the test
// never materializes a long period.
inline bool distance_less_than(const CantorParams& params, const Rational& x, const Rational& r) {
  if (x < 0 || x > 1) throw std::domain_error("distance_less_than: value outside [0,1]");
  if (r <= 0) return false;
  if (r > 1) return true;  // C is nonempty and both x and C live in [0,1]
  const long long b = params.base();
  if (x == 1) {
    if (params.contains_digit(static_cast<int>(b - 1))) return true;
    return Rational(1) - params.set_max() < r;
  }
  // smallest K with b^-K < r
  long long K = 0;
  {
    BigInt p = 1;
    while (p * numerator(r) <= denominator(r)) {
      p *= b;
      ++K;
    }
  }
  const BigInt den = denominator(x);
  BigInt rem = numerator(x);
  Rational best(-1);
  Rational prefix = 0;
  Rational scale(1, b);
  const Rational min_tail(params.min_digit(), b - 1);
  const Rational max_tail(params.max_digit(), b - 1);
  for (long long k = 1; k <= K; ++k) {
    rem *= b;
    const int digit = static_cast<int>(BigInt(rem / den));
    rem %= den;
    if (auto up = params.digit_above(digit)) {
      Rational d = abs_rational(prefix + scale * *up + scale * min_tail - x);
      if (best < 0 || d < best) best = d;
    }
    if (auto down = params.digit_below(digit)) {
      Rational d = abs_rational(prefix + scale * *down + scale * max_tail - x);
      if (best < 0 || d < best) best = d;
    }
    if (!params.contains_digit(digit)) return best >= 0 && best < r;
    prefix += scale * digit;
    scale /= b;
  }
  return true;  // admissible prefix of length K
}

// Smallest point of C(b,D) at or above x, if any.
inline std::optional<Rational> next_point(const CantorParams& params, const Rational& x) {
  if (x < 0 || x > 1) throw std::domain_error("next_point: value outside [0,1]");
  if (member(params, x)) return x;
  std::optional<Rational> best;
  for (const auto& c : detail::nearest_candidates(params, x))
    if (c.point >= x && (!best || c.point < *best)) best = c.point;
  return best;
}

namespace detail {

// For x in C: are there points of C arbitrarily close above x? True unless
// x's admissible expansion eventually runs on the maximal digit forever.
inline bool right_accumulating(const CantorParams& params, const Rational& x) {
  DigitExpansion e = expand(x, params.base());
  if (!all_digits_admissible(params, e)) {
    auto alt = alternate_of(e);
    e = *alt;  // member(x) guarantees the alternate is the admissible form
  }
  if (all_digits_admissible(params, e)) {
    // Digit continuations above x exist at infinitely many positions iff the
    // period is not all-maxD. (The canonical form never ends in all b-1
    // except for x = 1, whose period is {b-1} and is handled here too.)
    for (int d : e.period)
      if (d < params.max_digit()) return true;
    return false;
  }
  return false;
}

// Strict successor within C for an x in C that is not right-accumulating.
inline std::optional<Rational> isolated_strict_successor(const CantorParams& params,
                                                         const Rational& x) {
  std::optional<Rational> best;
  for (const auto& c : nearest_candidates(params, x))
    if (c.point > x && (!best || c.point < *best)) best = c.point;
  return best;
}

}  // namespace detail

// Does C(b,D) meet the segment between lo and hi, with per-end strictness?
inline bool meets_segment(const CantorParams& params, const Rational& lo, const Rational& hi,
                          bool lo_strict, bool hi_strict) {
  if (lo > hi) return false;
  Rational lo_clamped = lo < 0 ? Rational(0) : lo;
  Rational hi_clamped = hi > 1 ? Rational(1) : hi;
  if (lo < 0) lo_strict = false;
  if (hi > 1) hi_strict = false;
  if (lo_clamped > hi_clamped) return false;
  if (lo_clamped == hi_clamped)
    return !lo_strict && !hi_strict && member(params, lo_clamped);
  auto y = next_point(params, lo_clamped);
  if (!y) return false;
  if (*y > lo_clamped) return hi_strict ? *y < hi_clamped : *y <= hi_clamped;
  // *y == lo_clamped, so lo_clamped is a member.
  if (!lo_strict) return true;
  if (detail::right_accumulating(params, lo_clamped)) return true;
  auto y2 = detail::isolated_strict_successor(params, lo_clamped);
  if (!y2) return false;
  return hi_strict ? *y2 < hi_clamped : *y2 <= hi_clamped;
}

// Does C(b,D) meet the open ball (center-radius, center+radius)?
inline bool meets_open_ball(const CantorParams& params, const Rational& center,
                            const Rational& radius) {
  if (radius <= 0) return false;
  return meets_segment(params, center - radius, center + radius, true, true);
}

}  // namespace zerofull
