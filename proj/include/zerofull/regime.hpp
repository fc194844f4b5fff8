// Number-theoretic classification of a base pair (b,t): prime factorizations,
// q-adic valuations, the valuation ratios alpha_1/alpha_2 and the regime.

#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "zerofull/exactnum.hpp"

namespace zerofull {

// Deterministic trial division; the bases handled here are small.
inline std::vector<std::pair<long long, int>> factorize(long long n) {
  if (n < 1) throw std::domain_error("factorize: argument must be >= 1");
  std::vector<std::pair<long long, int>> factors;
  for (long long q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      int e = 0;
      while (n % q == 0) {
        n /= q;
        ++e;
      }
      factors.emplace_back(q, e);
    }
  }
  if (n > 1) factors.emplace_back(n, 1);
  return factors;
}

inline bool is_prime(long long q) {
  if (q < 2) return false;
  for (long long d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

// Largest e with q^e | n, for prime q.
inline int valuation(long long q, long long n) {
  if (!is_prime(q)) throw std::domain_error("valuation: modulus must be prime");
  if (n < 1) throw std::domain_error("valuation: argument must be >= 1");
  int e = 0;
  while (n % q == 0) {
    n /= q;
    ++e;
  }
  return e;
}

enum class Regime { MultiplicativelyDependent, SamePrimesIndependent, DifferentPrimes };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::MultiplicativelyDependent: return "MultiplicativelyDependent";
    case Regime::SamePrimesIndependent: return "SamePrimesIndependent";
    case Regime::DifferentPrimes: return "DifferentPrimes";
  }
  return "?";
}

struct ValuationRow {
  long long prime;
  int v_b;
  int v_t;
};

struct RegimeReport {
  long long b = 0;
  long long t = 0;
  std::vector<long long> primes_b;
  std::vector<long long> primes_t;
  std::vector<ValuationRow> valuations;  // over primes of b union t
  bool same_primes = false;
  bool mult_dependent = false;
  std::optional<Rational> alpha1;  // min over q | b of v_q(t)/v_q(b), when same_primes
  std::optional<Rational> alpha2;  // max of the same ratios
  Regime regime = Regime::DifferentPrimes;
};

inline RegimeReport analyze(long long b, long long t) {
  if (b < 2 || t < 2) throw std::domain_error("analyze: bases must be >= 2");
  RegimeReport report;
  report.b = b;
  report.t = t;
  for (auto& [q, e] : factorize(b)) report.primes_b.push_back(q);
  for (auto& [q, e] : factorize(t)) report.primes_t.push_back(q);
  std::vector<long long> all = report.primes_b;
  all.insert(all.end(), report.primes_t.begin(), report.primes_t.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (long long q : all)
    report.valuations.push_back({q, valuation(q, b), valuation(q, t)});
  report.same_primes = report.primes_b == report.primes_t;
  if (report.same_primes) {
    std::optional<Rational> lo, hi;
    for (const auto& row : report.valuations) {
      Rational ratio(row.v_t, row.v_b);
      if (!lo || ratio < *lo) lo = ratio;
      if (!hi || ratio > *hi) hi = ratio;
    }
    report.alpha1 = lo;
    report.alpha2 = hi;
    report.mult_dependent = *lo == *hi;
    report.regime = report.mult_dependent ? Regime::MultiplicativelyDependent
                                          : Regime::SamePrimesIndependent;
  } else {
    report.regime = Regime::DifferentPrimes;
  }
  return report;
}

// log u / log v as an exact rational when u and v are multiplicatively
// dependent (u^l = v^k for some positive integers), nullopt otherwise.
inline std::optional<Rational> mult_dep_ratio(long long u, long long v) {
  if (u < 2 || v < 2) {
    if (u == 1) return Rational(0);
    return std::nullopt;
  }
  if (u == v) return Rational(1);
  RegimeReport r = analyze(v, u);  // ratios v_q(u)/v_q(v)
  if (r.mult_dependent) return r.alpha1;
  return std::nullopt;
}

}  // namespace zerofull
