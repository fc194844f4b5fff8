// Desk-scale counting experiments: how many lattice balls B(p/t^n, r) meet
// C(b,D), by exact per-point tests or by a merged-interval sweep, plus
// growth-exponent fits against the dimension predictions.

#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "zerofull/cantor.hpp"
#include "zerofull/exactnum.hpp"

namespace zerofull {

enum class CountMethod { Exact, BruteForce };

inline const char* to_string(CountMethod m) {
  return m == CountMethod::Exact ? "Exact" : "BruteForce";
}

struct CensusRow {
  long long n = 0;
  long long t = 0;
  Rational radius;
  long long count = 0;
  CountMethod method = CountMethod::Exact;
  double elapsed_seconds = 0;
};

struct CensusCaps {
  long long brute_points = 20'000'000;   // max t^n for the per-point method
  long long enum_intervals = 10'000'000; // max |D|^K for the sweep method
  long long uncertain_points = 5'000'000;
};

namespace detail {

template <typename Fn>
long long parallel_count(long long lo, long long hi, int workers, Fn&& fn) {
  if (hi < lo) return 0;
  if (workers <= 1) {
    long long acc = 0;
    for (long long v = lo; v <= hi; ++v) acc += fn(v) ? 1 : 0;
    return acc;
  }
  const long long total = hi - lo + 1;
  const long long chunk = (total + workers - 1) / workers;
  std::vector<long long> partial(static_cast<size_t>(workers), 0);
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    const long long a = lo + chunk * w;
    const long long b = std::min(hi, a + chunk - 1);
    if (a > hi) break;
    threads.emplace_back([&, w, a, b] {
      long long acc = 0;
      for (long long v = a; v <= b; ++v) acc += fn(v) ? 1 : 0;
      partial[static_cast<size_t>(w)] = acc;
    });
  }
  for (auto& th : threads) th.join();
  long long acc = 0;
  for (long long p : partial) acc += p;
  return acc;
}

struct ScaledSegment {
  BigInt lo;
  BigInt hi;
};

// Lattice points p with p*scale strictly inside (lo, hi), clamped to
// [p_min, p_max]; returns an inclusive p-range or nullopt.
inline std::optional<std::pair<long long, long long>> lattice_in_open(
    const BigInt& lo, const BigInt& hi, const BigInt& scale, long long p_min, long long p_max) {
  // p > lo/scale  and  p < hi/scale
  BigInt first = floor_rational(Rational(lo, scale)) + 1;
  BigInt last = ceil_rational(Rational(hi, scale)) - 1;
  if (first < p_min) first = p_min;
  if (last > p_max) last = p_max;
  if (first > last) return std::nullopt;
  return std::make_pair(static_cast<long long>(first), static_cast<long long>(last));
}

inline std::vector<ScaledSegment> merge_overlapping(std::vector<ScaledSegment> segs) {
  std::vector<ScaledSegment> out;
  for (auto& s : segs) {
    if (!out.empty() && s.lo <= out.back().hi) {
      if (s.hi > out.back().hi) out.back().hi = s.hi;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace detail

// Count of p in [0, t^n] whose open ball of the given radius meets C(b,D),
// by exact per-point distance tests.
inline CensusRow count_surviving_brute(const CantorParams& params, long long t, long long n,
                                       const Rational& radius, const CensusCaps& caps = {},
                                       int workers = 1) {
  if (t < 2 || n < 0) throw std::domain_error("census: need t >= 2 and n >= 0");
  if (radius <= 0 || radius >= 1) throw std::domain_error("census: radius must lie in (0,1)");
  const BigInt tn_big = pow_int(t, static_cast<unsigned long long>(n));
  if (tn_big > caps.brute_points)
    throw resource_error("census: t^n exceeds the brute-force cap of " +
                         std::to_string(caps.brute_points) + " points");
  const long long tn = static_cast<long long>(tn_big);
  const auto start = std::chrono::steady_clock::now();
  const long long count = detail::parallel_count(0, tn, workers, [&](long long p) {
    return distance_less_than(params, Rational(p, tn), radius);
  });
  const auto stop = std::chrono::steady_clock::now();
  return {n, t, radius, count, CountMethod::BruteForce,
          std::chrono::duration<double>(stop - start).count()};
}

// Same count via the two-phase sweep: merge the level-K intervals, count the
// lattice points certainly inside / outside the radius-enlarged union by
// floor arithmetic, and resolve the boundary-uncertain points exactly.
inline CensusRow count_surviving_exact(const CantorParams& params, long long t, long long n,
                                       const Rational& radius, const CensusCaps& caps = {},
                                       int workers = 1) {
  if (t < 2 || n < 0) throw std::domain_error("census: need t >= 2 and n >= 0");
  if (radius <= 0 || radius >= 1) throw std::domain_error("census: radius must lie in (0,1)");
  const BigInt tn_big = pow_int(t, static_cast<unsigned long long>(n));
  if (tn_big > BigInt(1'000'000'000'000'000LL))
    throw resource_error("census: t^n exceeds 1e15; counts would not fit the row type");
  const long long tn = static_cast<long long>(tn_big);
  const auto start = std::chrono::steady_clock::now();

  const long long b = params.base();
  // smallest K with b^-K < radius, plus two guard digits
  long long K = 0;
  {
    BigInt p = 1;
    while (p * numerator(radius) <= denominator(radius)) {
      p *= b;
      ++K;
    }
    K += 2;
  }
  {
    BigInt levels = 1;
    for (long long j = 0; j < K; ++j) {
      levels *= params.digit_count();
      if (levels > caps.enum_intervals)
        throw resource_error("census: |D|^K exceeds the enumeration cap of " +
                             std::to_string(caps.enum_intervals) + " intervals (K=" +
                             std::to_string(K) + ")");
    }
  }

  // Level-K intervals in units of b^-K, merged where they touch.
  std::vector<detail::ScaledSegment> segments;
  detail::for_each_level_numerator(params, K, caps.enum_intervals, [&](const BigInt& p) {
    if (!segments.empty() && segments.back().hi == p) {
      segments.back().hi = p + 1;
    } else {
      segments.push_back({p, p + 1});
    }
  });

  // Common scale: value v is represented as v * b^K * t^n * den(radius).
  const BigInt bK = pow_int(b, static_cast<unsigned long long>(K));
  const BigInt c_lat = bK * denominator(radius);         // lattice p -> p * c_lat
  const BigInt c_seg = tn_big * denominator(radius);     // segment bound q -> q * c_seg
  const BigInt R = numerator(radius) * bK * tn_big;      // radius
  const BigInt BKs = tn_big * denominator(radius);       // b^-K
  const BigInt R_in = R - BKs;                           // positive by choice of K

  std::vector<detail::ScaledSegment> outer, inner;
  outer.reserve(segments.size());
  inner.reserve(segments.size());
  for (const auto& s : segments) {
    outer.push_back({s.lo * c_seg - R, s.hi * c_seg + R});
    inner.push_back({s.lo * c_seg - R_in, s.hi * c_seg + R_in});
  }
  outer = detail::merge_overlapping(std::move(outer));
  inner = detail::merge_overlapping(std::move(inner));

  long long certain = 0;
  for (const auto& s : inner)
    if (auto range = detail::lattice_in_open(s.lo, s.hi, c_lat, 0, tn))
      certain += range->second - range->first + 1;

  // Boundary-uncertain points: inside the outer union but not strictly inside
  // the inner union.
  std::vector<long long> uncertain;
  auto push_piece = [&](const BigInt& first_raw, const BigInt& last_raw) {
    BigInt first = first_raw < 0 ? BigInt(0) : first_raw;
    BigInt last = last_raw > tn ? BigInt(tn) : last_raw;
    if (first > last) return;
    if (BigInt(uncertain.size()) + (last - first + 1) > caps.uncertain_points)
      throw resource_error("census: boundary-uncertain point set exceeds cap of " +
                           std::to_string(caps.uncertain_points));
    for (BigInt p = first; p <= last; ++p) uncertain.push_back(static_cast<long long>(p));
  };
  size_t j = 0;
  for (const auto& o : outer) {
    BigInt cursor = o.lo;
    bool cursor_open = true;  // the running lower boundary is exclusive
    while (j < inner.size() && inner[j].hi <= o.lo) ++j;
    size_t jj = j;
    while (jj < inner.size() && inner[jj].lo < o.hi) {
      // piece up to the inner boundary; the closed right end is the boundary
      // itself, which the open inner interval excludes.
      push_piece(cursor_open ? floor_rational(Rational(cursor, c_lat)) + 1
                             : ceil_rational(Rational(cursor, c_lat)),
                 floor_rational(Rational(inner[jj].lo, c_lat)));
      cursor = inner[jj].hi;
      cursor_open = false;  // points at the inner upper boundary are uncertain
      ++jj;
    }
    // tail piece up to the open outer end
    push_piece(cursor_open ? floor_rational(Rational(cursor, c_lat)) + 1
                           : ceil_rational(Rational(cursor, c_lat)),
               ceil_rational(Rational(o.hi, c_lat)) - 1);
  }

  long long resolved = detail::parallel_count(
      0, static_cast<long long>(uncertain.size()) - 1, workers, [&](long long idx) {
        const long long p = uncertain[static_cast<size_t>(idx)];
        return distance_less_than(params, Rational(p, tn), radius);
      });

  const auto stop = std::chrono::steady_clock::now();
  return {n, t, radius, certain + resolved, CountMethod::Exact,
          std::chrono::duration<double>(stop - start).count()};
}

inline CensusRow count_surviving(const CantorParams& params, long long t, long long n,
                                 const Rational& radius, CountMethod method,
                                 const CensusCaps& caps = {}, int workers = 1) {
  return method == CountMethod::Exact
             ? count_surviving_exact(params, t, n, radius, caps, workers)
             : count_surviving_brute(params, t, n, radius, caps, workers);
}

struct GrowthFit {
  double exponent = 0;  // count ~ t^(exponent * n)
  double r2 = 0;
  long long rows_used = 0;
};

// Least-squares slope of log(count) against n log(t).
inline GrowthFit growth_fit(const std::vector<CensusRow>& rows, long long t) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : rows)
    if (row.count > 0)
      pts.emplace_back(static_cast<double>(row.n) * std::log(static_cast<double>(t)),
                       std::log(static_cast<double>(row.count)));
  if (pts.size() < 4)
    throw degenerate_fit_error("growth_fit: need at least 4 rows with positive counts, have " +
                               std::to_string(pts.size()));
  double sx = 0, sy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / static_cast<double>(pts.size());
  const double my = sy / static_cast<double>(pts.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) throw degenerate_fit_error("growth_fit: all rows share the same level n");
  GrowthFit fit;
  fit.exponent = sxy / sxx;
  fit.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.rows_used = static_cast<long long>(pts.size());
  return fit;
}

// Exact rational radius for the law radius(n) = t^(-theta n): exact when
// theta*n is an integer, otherwise the nearest 80-fractional-bit dyadic.
inline Rational radius_for_decay(long long t, const Rational& theta, long long n) {
  const Rational e = theta * n;
  if (denominator(e) == 1)
    return pow_rational(Rational(t), -static_cast<long long>(numerator(e)));
  const Real v = exp(-to_real(e) * log(Real(t))) * pow(Real(2), 80);
  BigInt num = static_cast<BigInt>(v);
  if (num < 1) num = 1;
  return Rational(num, pow_int(2, 80));
}

struct NaturalCoverReport {
  std::vector<CensusRow> rows;
  bool empty = false;                 // every level count was zero
  std::optional<double> s_star;      // fitted critical exponent
  std::optional<double> fit_r2;
  double predicted = 0;              // gamma / theta
};

// Empirical critical exponent of the natural generation-n cover with
// radius law t^(-theta n), compared against gamma/theta.
inline NaturalCoverReport natural_cover_exponent(const CantorParams& params, long long t,
                                                 const Rational& theta, long long n_from,
                                                 long long n_to, const CensusCaps& caps = {},
                                                 int workers = 1) {
  if (theta <= 1) throw precondition_error("natural_cover_exponent: need theta > 1");
  if (n_from < 1 || n_to < n_from) throw std::domain_error("natural_cover_exponent: bad n range");
  NaturalCoverReport report;
  report.predicted = static_cast<double>(params.gamma() / to_real(theta));
  bool any_positive = false;
  for (long long n = n_from; n <= n_to; ++n) {
    auto row = count_surviving_exact(params, t, n, radius_for_decay(t, theta, n), caps, workers);
    any_positive = any_positive || row.count > 0;
    report.rows.push_back(std::move(row));
  }
  if (!any_positive) {
    report.empty = true;
    return report;
  }
  const GrowthFit fit = growth_fit(report.rows, t);
  report.s_star = fit.exponent / static_cast<double>(to_real(theta));
  report.fit_r2 = fit.r2;
  return report;
}

}  // namespace zerofull
