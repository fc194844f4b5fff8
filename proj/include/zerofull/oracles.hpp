// Cross-checking oracles: exact interval-level comparison of the endpoint
// classifier against ball geometry, and random-grid agreement drivers.

#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "zerofull/ballgeom.hpp"
#include "zerofull/cantor.hpp"
#include "zerofull/census.hpp"
#include "zerofull/exactnum.hpp"

namespace zerofull {

// Does the open ball meet C(b,D) inside the level-K interval [left, right]?
// C restricted to a level interval is an exact rescaled copy of C, so the
// straddling cases reduce to a segment query against C itself.
inline bool interval_meets_ball_in_C(const CantorParams& params, const Rational& left,
                                     const Rational& right, const Ball& ball) {
  const Rational blo = ball.center - ball.radius;
  const Rational bhi = ball.center + ball.radius;
  Rational a = left;
  bool lo_strict = false;
  if (blo >= left) {
    a = blo;
    lo_strict = true;
  }
  Rational z = right;
  bool hi_strict = false;
  if (bhi <= right) {
    z = bhi;
    hi_strict = true;
  }
  if (a > z || (a == z && (lo_strict || hi_strict))) return false;
  const Rational width = right - left;
  const Rational cmin = left + params.set_min() * width;
  const Rational cmax = left + params.set_max() * width;
  auto inside = [&](const Rational& x) {
    if (lo_strict ? x <= a : x < a) return false;
    if (hi_strict ? x >= z : x > z) return false;
    return true;
  };
  if (inside(cmin) || inside(cmax)) return true;  // the extremes belong to C
  if (cmax < a || (cmax == a && lo_strict)) return false;
  if (cmin > z || (cmin == z && hi_strict)) return false;
  return meets_segment(params, (a - left) / width, (z - left) / width, lo_strict, hi_strict);
}

namespace detail {

// Level-depth intervals whose closure meets [lo, hi], by pruned digit DFS.
template <typename Fn>
void for_each_level_interval_in(const CantorParams& params, long long depth, const Rational& lo,
                                const Rational& hi, Fn&& fn) {
  const BigInt bK = pow_int(params.base(), static_cast<unsigned long long>(depth));
  struct Frame {
    BigInt prefix;  // numerator at current depth
    long long level;
  };
  std::vector<Frame> stack{{BigInt(0), 0}};
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    const BigInt unit = pow_int(params.base(), static_cast<unsigned long long>(depth - fr.level));
    const Rational l(fr.prefix * unit, bK);
    const Rational r((fr.prefix + 1) * unit, bK);
    if (r < lo || l > hi) continue;
    if (fr.level == depth) {
      fn(l, r);
      continue;
    }
    const auto& digits = params.digits();
    for (auto it = digits.rbegin(); it != digits.rend(); ++it)
      stack.push_back({fr.prefix * params.base() + *it, fr.level + 1});
  }
}

}  // namespace detail

// Compares, for every depth-K interval near the ball, whether the input ball
// meets C there against whether the classifier's output balls do. Returns a
// description of the first mismatch, or nullopt when consistent.
inline std::optional<std::string> classifier_equivalence_mismatch(const CantorParams& params,
                                                                  const BigInt& p, long long n,
                                                                  const Rational& radius,
                                                                  long long extra_depth = 6) {
  const long long depth = n + extra_depth;
  const Rational center(p, pow_int(params.base(), static_cast<unsigned long long>(n)));
  const Ball input{center, radius};
  const IntersectionForm form = classify(params, p, n, radius);
  const auto outputs = form.balls();
  std::optional<std::string> mismatch;
  detail::for_each_level_interval_in(
      params, depth, center - radius, center + radius, [&](const Rational& l, const Rational& r) {
        if (mismatch) return;
        const bool lhs = interval_meets_ball_in_C(params, l, r, input);
        bool rhs = false;
        for (const auto& ball : outputs)
          rhs = rhs || interval_meets_ball_in_C(params, l, r, ball);
        if (lhs != rhs)
          mismatch = "interval [" + to_string(l) + ", " + to_string(r) + "]: input ball " +
                     (lhs ? "meets" : "misses") + " C but classifier output " +
                     (rhs ? "meets" : "misses");
      });
  return mismatch;
}

// ---------------------------------------------------------------------------
// Seeded random drivers.
// ---------------------------------------------------------------------------

inline CantorParams random_cantor_params(std::mt19937_64& rng, long long max_base = 6) {
  std::uniform_int_distribution<long long> base_dist(3, max_base);
  const long long b = base_dist(rng);
  std::uniform_int_distribution<int> size_dist(2, static_cast<int>(b - 1));
  const int size = size_dist(rng);
  std::vector<int> all(static_cast<size_t>(b));
  for (int d = 0; d < b; ++d) all[static_cast<size_t>(d)] = d;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<size_t>(size));
  return CantorParams(b, all);
}

inline Rational random_rational(std::mt19937_64& rng, long long max_den = 1000) {
  std::uniform_int_distribution<long long> den_dist(2, max_den);
  const long long den = den_dist(rng);
  std::uniform_int_distribution<long long> num_dist(1, den - 1);
  return Rational(num_dist(rng), den);
}

struct OracleRun {
  long long cases = 0;
  long long mismatches = 0;
  std::vector<std::string> failures;
};

// Random classifier-vs-geometry instances (acceptance-style driver).
inline OracleRun run_classifier_equivalence(std::uint64_t seed, long long cases,
                                            long long max_base = 6, long long max_n = 5) {
  std::mt19937_64 rng(seed);
  OracleRun run;
  while (run.cases < cases) {
    const CantorParams params = random_cantor_params(rng, max_base);
    std::uniform_int_distribution<long long> n_dist(1, max_n);
    const long long n = n_dist(rng);
    const BigInt bn = pow_int(params.base(), static_cast<unsigned long long>(n));
    std::uniform_int_distribution<long long> p_dist(0, static_cast<long long>(bn));
    const BigInt p = p_dist(rng);
    // radius strictly below b^-n / 2
    const Rational half_cell(1, 2 * bn);
    const Rational radius = half_cell * random_rational(rng, 400);
    if (radius <= 0) continue;
    ++run.cases;
    if (auto bad = classifier_equivalence_mismatch(params, p, n, radius)) {
      ++run.mismatches;
      if (run.failures.size() < 10)
        run.failures.push_back("b=" + std::to_string(params.base()) + " n=" + std::to_string(n) +
                               " p=" + p.str() + " r=" + to_string(radius) + ": " + *bad);
    }
  }
  return run;
}

// Random exact-vs-brute census agreement.
inline OracleRun run_census_agreement(std::uint64_t seed, long long cases, long long max_base = 6,
                                      long long max_t = 5, long long max_n = 4,
                                      const CensusCaps& caps = {}, int workers = 1) {
  std::mt19937_64 rng(seed);
  OracleRun run;
  while (run.cases < cases) {
    const CantorParams params = random_cantor_params(rng, max_base);
    std::uniform_int_distribution<long long> t_dist(2, max_t);
    std::uniform_int_distribution<long long> n_dist(1, max_n);
    const long long t = t_dist(rng);
    const long long n = n_dist(rng);
    std::uniform_int_distribution<int> small_dist(0, 2);
    Rational radius = random_rational(rng, 2000);
    if (small_dist(rng) == 0)  // bias toward lattice-scale radii
      radius /= pow_int(t, static_cast<unsigned long long>(n));
    if (radius <= 0 || radius >= 1) continue;
    ++run.cases;
    const auto exact = count_surviving_exact(params, t, n, radius, caps, workers);
    const auto brute = count_surviving_brute(params, t, n, radius, caps, workers);
    if (exact.count != brute.count) {
      ++run.mismatches;
      if (run.failures.size() < 10)
        run.failures.push_back("b=" + std::to_string(params.base()) + " t=" + std::to_string(t) +
                               " n=" + std::to_string(n) + " r=" + to_string(radius) +
                               ": exact=" + std::to_string(exact.count) +
                               " brute=" + std::to_string(brute.count));
    }
  }
  return run;
}

}  // namespace zerofull
