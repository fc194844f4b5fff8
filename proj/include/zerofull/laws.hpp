// Approximation-function modeling and the zero-full machinery: psi families,
// fiber maxima along exponent sequences, exact series verdicts, decay rates
// and dimension predictions.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zerofull/cantor.hpp"
#include "zerofull/exactnum.hpp"
#include "zerofull/regime.hpp"

namespace zerofull {

// ---------------------------------------------------------------------------
// Exact sign of sums of logarithms.
// ---------------------------------------------------------------------------

// Sign of sum exponent*ln(base) over the given terms, each base a positive
// rational. Decided exactly by clearing exponent denominators and comparing
// two big-integer products.
inline int exact_sign_log_terms(const std::vector<std::pair<Rational, Rational>>& terms) {
  BigInt lcm = 1;
  for (const auto& [base, exp] : terms) {
    if (base <= 0) throw std::domain_error("exact_sign_log_terms: non-positive base");
    lcm = boost::multiprecision::lcm(lcm, denominator(exp));
  }
  // Guard against astronomically large cleared exponents.
  double bits = 0;
  for (const auto& [base, exp] : terms) {
    const Rational cleared = exp * Rational(lcm);
    bits += std::abs(static_cast<double>(to_real(cleared))) *
            (boost::multiprecision::msb(numerator(base) > denominator(base) ? numerator(base)
                                                                            : denominator(base)) +
             1.0);
  }
  if (bits > 5e7)
    throw resource_error("exact log comparison would need > 5e7 bits; refusing");
  BigInt lhs = 1, rhs = 1;
  for (const auto& [base, exp] : terms) {
    BigInt e = numerator(exp * Rational(lcm));
    const BigInt num = numerator(base), den = denominator(base);
    if (e > 0) {
      lhs *= pow_int(num, static_cast<unsigned long long>(e));
      rhs *= pow_int(den, static_cast<unsigned long long>(e));
    } else if (e < 0) {
      lhs *= pow_int(den, static_cast<unsigned long long>(-e));
      rhs *= pow_int(num, static_cast<unsigned long long>(-e));
    }
  }
  return lhs > rhs ? 1 : lhs < rhs ? -1 : 0;
}

// ---------------------------------------------------------------------------
// Exponents of the form a + g*gamma, gamma = log|D|/log b.
// ---------------------------------------------------------------------------

struct GammaAffine {
  Rational plain;  // a
  Rational gamma;  // g

  GammaAffine() = default;
  GammaAffine(Rational a, Rational g) : plain(std::move(a)), gamma(std::move(g)) {}
  static GammaAffine constant(const Rational& a) { return {a, Rational(0)}; }

  bool is_plain() const { return gamma == 0; }

  GammaAffine operator+(const GammaAffine& o) const { return {plain + o.plain, gamma + o.gamma}; }
  GammaAffine operator-(const GammaAffine& o) const { return {plain - o.plain, gamma - o.gamma}; }
  GammaAffine operator*(const Rational& c) const { return {plain * c, gamma * c}; }

  Real numeric(const Real& gamma_value) const {
    return to_real(plain) + to_real(gamma) * gamma_value;
  }
};

// Exact sign of a + g*gamma: multiply through by log b > 0.
inline int sign_gamma_affine(const GammaAffine& x, const CantorParams& params) {
  return exact_sign_log_terms(
      {{Rational(params.base()), x.plain}, {Rational(params.digit_count()), x.gamma}});
}

inline std::string to_string(const GammaAffine& x) {
  if (x.gamma == 0) return to_string(x.plain);
  std::string g = to_string(x.gamma) + "*gamma";
  if (x.plain == 0) return g;
  return to_string(x.plain) + " + " + g;
}

// ---------------------------------------------------------------------------
// Approximation-speed specifications.
// ---------------------------------------------------------------------------

// psi(n) = coeff * base^(-theta n)
struct PowerDecaySpec {
  Rational coeff;
  Rational theta;
  long long base = 0;
};

// psi(n) = base^(-theta n) * n^(-beta)
struct LogModifiedSpec {
  Rational theta;
  Rational beta;
  long long base = 0;
};

// psi(n) for n = 1..values.size(), exact.
struct PsiTableSpec {
  std::vector<Rational> values;
};

struct IdentitySequence {};

// a_n = floor(slope*n + offset); must be positive, non-decreasing, unbounded.
struct AffineSequence {
  Rational slope;
  Rational offset;
};

struct SequenceTable {
  std::vector<long long> values;
};

using SequenceSpec = std::variant<IdentitySequence, AffineSequence, SequenceTable>;

struct PsiSpec {
  std::variant<PowerDecaySpec, LogModifiedSpec, PsiTableSpec> family;
  SequenceSpec sequence = IdentitySequence{};

  void validate() const {
    if (const auto* pd = std::get_if<PowerDecaySpec>(&family)) {
      if (pd->coeff <= 0 || pd->theta <= 0 || pd->base < 2)
        throw std::domain_error("psi power family needs coeff > 0, theta > 0, base >= 2");
    } else if (const auto* lm = std::get_if<LogModifiedSpec>(&family)) {
      if (lm->theta <= 0 || lm->base < 2)
        throw std::domain_error("psi log-modified family needs theta > 0, base >= 2");
    } else {
      const auto& tab = std::get<PsiTableSpec>(family);
      if (tab.values.empty()) throw std::domain_error("psi table must be non-empty");
      for (const auto& v : tab.values)
        if (v <= 0) throw std::domain_error("psi values must be positive");
    }
    if (const auto* aff = std::get_if<AffineSequence>(&sequence)) {
      if (aff->slope <= 0)
        throw std::domain_error("affine sequence slope must be positive (non-decreasing, unbounded)");
      if (floor_rational(aff->slope + aff->offset) < 1)
        throw std::domain_error("affine sequence must start at a positive integer");
    } else if (const auto* tab = std::get_if<SequenceTable>(&sequence)) {
      if (tab->values.empty()) throw std::domain_error("sequence table must be non-empty");
      long long prev = 0;
      for (long long v : tab->values) {
        if (v < 1 || v < prev) throw std::domain_error("sequence table must be positive and non-decreasing");
        prev = v;
      }
    }
  }

  bool family_is_table() const { return std::holds_alternative<PsiTableSpec>(family); }
  bool sequence_is_table() const { return std::holds_alternative<SequenceTable>(sequence); }
  bool symbolic() const { return !family_is_table() && !sequence_is_table(); }
};

namespace detail {

// Value of psi(n) as formal factors (base, exponent) with an overall rational
// coefficient; exact comparisons go through exact_sign_log_terms.
inline std::vector<std::pair<Rational, Rational>> psi_log_factors(const PsiSpec& spec,
                                                                  long long n) {
  if (const auto* pd = std::get_if<PowerDecaySpec>(&spec.family))
    return {{pd->coeff, Rational(1)}, {Rational(pd->base), Rational(-pd->theta * n)}};
  if (const auto* lm = std::get_if<LogModifiedSpec>(&spec.family))
    return {{Rational(lm->base), Rational(-lm->theta * n)}, {Rational(n), Rational(-lm->beta)}};
  const auto& tab = std::get<PsiTableSpec>(spec.family);
  if (n < 1 || n > static_cast<long long>(tab.values.size()))
    throw std::domain_error("psi table has no entry for n=" + std::to_string(n));
  return {{tab.values[static_cast<size_t>(n - 1)], Rational(1)}};
}

// Exact sign of log(psi(n1)) - log(psi(n2)).
inline int compare_psi(const PsiSpec& spec, long long n1, long long n2) {
  auto terms = psi_log_factors(spec, n1);
  for (auto& [base, exp] : psi_log_factors(spec, n2)) terms.emplace_back(base, -exp);
  return exact_sign_log_terms(terms);
}

inline Real psi_numeric(const PsiSpec& spec, long long n) {
  if (const auto* pd = std::get_if<PowerDecaySpec>(&spec.family))
    return to_real(pd->coeff) * exp(-to_real(pd->theta) * n * log(Real(pd->base)));
  if (const auto* lm = std::get_if<LogModifiedSpec>(&spec.family))
    return exp(-to_real(lm->theta) * n * log(Real(lm->base)) - to_real(lm->beta) * log(Real(n)));
  const auto& tab = std::get<PsiTableSpec>(spec.family);
  if (n < 1 || n > static_cast<long long>(tab.values.size()))
    throw std::domain_error("psi table has no entry for n=" + std::to_string(n));
  return to_real(tab.values[static_cast<size_t>(n - 1)]);
}

// Exact value of psi(n) when it is rational; throws otherwise.
inline Rational psi_exact(const PsiSpec& spec, long long n) {
  if (const auto* pd = std::get_if<PowerDecaySpec>(&spec.family)) {
    const Rational e = pd->theta * n;
    if (denominator(e) != 1)
      throw std::domain_error("psi(n) is irrational at n=" + std::to_string(n) +
                              " (theta*n is not an integer); use exact comparisons or a table");
    return pd->coeff * pow_rational(Rational(pd->base), -static_cast<long long>(numerator(e)));
  }
  if (const auto* lm = std::get_if<LogModifiedSpec>(&spec.family)) {
    const Rational e = lm->theta * n;
    if (denominator(e) != 1 || denominator(lm->beta) != 1)
      throw std::domain_error("psi(n) is irrational at n=" + std::to_string(n) +
                              "; use exact comparisons or a table");
    return pow_rational(Rational(lm->base), -static_cast<long long>(numerator(e))) *
           pow_rational(Rational(n), -static_cast<long long>(numerator(lm->beta)));
  }
  const auto& tab = std::get<PsiTableSpec>(spec.family);
  if (n < 1 || n > static_cast<long long>(tab.values.size()))
    throw std::domain_error("psi table has no entry for n=" + std::to_string(n));
  return tab.values[static_cast<size_t>(n - 1)];
}

inline long long sequence_at(const SequenceSpec& seq, long long n) {
  if (std::holds_alternative<IdentitySequence>(seq)) return n;
  if (const auto* aff = std::get_if<AffineSequence>(&seq))
    return static_cast<long long>(floor_rational(aff->slope * n + aff->offset));
  const auto& tab = std::get<SequenceTable>(seq);
  if (n < 1 || n > static_cast<long long>(tab.values.size()))
    throw std::domain_error("sequence table has no entry for n=" + std::to_string(n));
  return tab.values[static_cast<size_t>(n - 1)];
}

// All n with a_n = i (finite since A is non-decreasing and unbounded in the
// closed-form cases, and explicit otherwise). Empty when i is not attained.
inline std::vector<long long> fiber(const PsiSpec& spec, long long i) {
  std::vector<long long> out;
  if (std::holds_alternative<IdentitySequence>(spec.sequence)) {
    if (i >= 1) out.push_back(i);
    return out;
  }
  if (const auto* aff = std::get_if<AffineSequence>(&spec.sequence)) {
    // floor(u n + v) = i  <=>  (i - v)/u <= n < (i + 1 - v)/u
    const Rational lo = (Rational(i) - aff->offset) / aff->slope;
    const Rational hi = (Rational(i) + 1 - aff->offset) / aff->slope;
    BigInt n = ceil_rational(lo);
    if (n < 1) n = 1;
    if (hi - Rational(n) > 2'000'000)
      throw resource_error("sequence fiber too large to enumerate (> 2e6 elements)");
    for (; Rational(n) < hi; ++n) out.push_back(static_cast<long long>(n));
    return out;
  }
  const auto& tab = std::get<SequenceTable>(spec.sequence);
  for (size_t n = 0; n < tab.values.size(); ++n)
    if (tab.values[n] == i) out.push_back(static_cast<long long>(n) + 1);
  return out;
}

}  // namespace detail

// I(A) intersected with [1, cutoff].
inline std::vector<long long> index_set(const PsiSpec& spec, long long cutoff) {
  std::vector<long long> out;
  if (std::holds_alternative<IdentitySequence>(spec.sequence)) {
    for (long long i = 1; i <= cutoff; ++i) out.push_back(i);
    return out;
  }
  if (std::holds_alternative<AffineSequence>(spec.sequence)) {
    for (long long i = 1; i <= cutoff; ++i)
      if (!detail::fiber(spec, i).empty()) out.push_back(i);
    return out;
  }
  const auto& tab = std::get<SequenceTable>(spec.sequence);
  for (long long v : tab.values)
    if (v <= cutoff && (out.empty() || out.back() != v)) out.push_back(v);
  return out;
}

// max{ psi(n) : a_n = i }, exact. The maximum is located by exact log
// comparisons, so it is found even when individual values are irrational.
inline Rational psi_A(const PsiSpec& spec, long long i) {
  spec.validate();
  auto ns = detail::fiber(spec, i);
  if (const auto* tab = std::get_if<PsiTableSpec>(&spec.family))
    std::erase_if(ns, [&](long long n) { return n > static_cast<long long>(tab->values.size()); });
  if (ns.empty()) throw std::domain_error("index " + std::to_string(i) + " is not attained by the sequence");
  long long best = ns.front();
  for (long long n : ns)
    if (detail::compare_psi(spec, n, best) > 0) best = n;
  return detail::psi_exact(spec, best);
}

// ---------------------------------------------------------------------------
// Dimension functions f(r) = r^s * (log(1/r))^c.
// ---------------------------------------------------------------------------

struct DimensionFunctionSpec {
  GammaAffine s;               // exponent, possibly involving gamma
  Rational log_power = Rational(0);  // c

  void validate(const CantorParams& params) const {
    if (sign_gamma_affine(s, params) < 0)
      throw std::domain_error("dimension function exponent s must be >= 0");
    if (sign_gamma_affine(s, params) == 0 && log_power >= 0)
      throw std::domain_error("f(r) must tend to 0 as r -> 0: need s > 0 or (s = 0 and c < 0)");
  }

  Real value(const Real& r, const Real& gamma_value) const {
    const Real sv = s.numeric(gamma_value);
    Real out = exp(sv * log(r));
    if (log_power != 0) out *= exp(to_real(log_power) * log(log(Real(1) / r)));
    return out;
  }
};

struct MonotonicityReport {
  bool monotonic_on_grid = true;
  std::string domain;
};

// Checks r^-gamma f(r) for monotonicity on the grid r = b^-1 .. b^-40.
inline MonotonicityReport monotonic_grid_report(const DimensionFunctionSpec& f,
                                                const CantorParams& params) {
  const Real g = params.gamma();
  MonotonicityReport rep;
  rep.domain = "grid r = b^-j, j = 1..40";
  Real prev = 0;
  int direction = 0;
  for (int j = 1; j <= 40; ++j) {
    const Real r = exp(-Real(j) * log(Real(params.base())));
    const Real v = f.value(r, g) * exp(-g * log(r));
    if (j > 1) {
      const int step = v > prev ? 1 : v < prev ? -1 : 0;
      if (step != 0) {
        if (direction == 0) direction = step;
        else if (direction != step) rep.monotonic_on_grid = false;
      }
    }
    prev = v;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Verdicts.
// ---------------------------------------------------------------------------

enum class Outcome { Zero, Full, Inconclusive, Undecided };
enum class Basis { Symbolic, NumericAdvisory };
enum class SeriesSum { Converges, Diverges, Unknown };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Zero: return "Zero";
    case Outcome::Full: return "Full";
    case Outcome::Inconclusive: return "Inconclusive";
    case Outcome::Undecided: return "Undecided";
  }
  return "?";
}

inline const char* to_string(Basis b) {
  return b == Basis::Symbolic ? "Symbolic" : "NumericAdvisory";
}

inline const char* to_string(SeriesSum s) {
  switch (s) {
    case SeriesSum::Converges: return "Converges";
    case SeriesSum::Diverges: return "Diverges";
    case SeriesSum::Unknown: return "Unknown";
  }
  return "?";
}

struct SeriesReport {
  std::string name;
  SeriesSum sum = SeriesSum::Unknown;
  Basis basis = Basis::NumericAdvisory;
  bool empty_qualifying = false;
  std::optional<double> closed_form_ratio;  // e^R of the dominant class, when defined
  std::vector<double> partial_sums;
  std::vector<std::string> notes;
};

struct Verdict {
  Outcome outcome = Outcome::Undecided;
  std::vector<SeriesReport> series;
  std::vector<std::string> notes;
};

enum class ShiftKind { None, Identity, FloorAlpha, CeilAlpha };

// Shape of one theorem series: sum over qualifying i in I of
//   f(psi_A(i) - m/((b-1) b^{e(i)})) * b^{i * weight_rate * gamma},
// where e(i) = i, floor(i*alpha) or ceil(i*alpha) according to shift.
struct SeriesShape {
  std::string name;
  Rational weight_rate;  // 1, alpha1 or alpha2
  ShiftKind shift = ShiftKind::None;
  Rational alpha = Rational(1);  // the alpha inside floor/ceil
};

namespace detail {

struct LinearForm {
  Rational slope;
  Rational offset;
};

// eta(i) = smallest fiber element over the class i = r (mod M); linear with
// rational coefficients along each residue class.
inline std::optional<LinearForm> class_eta(const PsiSpec& spec, long long r, long long M) {
  if (std::holds_alternative<IdentitySequence>(spec.sequence))
    return LinearForm{Rational(1), Rational(0)};
  const auto& aff = std::get<AffineSequence>(spec.sequence);
  // representative far enough out that fibers live in n >= 1
  long long i0 = r;
  const long long start =
      static_cast<long long>(floor_rational(aff.slope + aff.offset)) + 2 * M + 4;
  while (i0 < start) i0 += M;
  auto ns = fiber(spec, i0);
  if (ns.empty()) return std::nullopt;  // class not attained
  const Rational slope = Rational(1) / aff.slope;
  return LinearForm{slope, Rational(ns.front()) - slope * i0};
}

// Per-i decay exponent and per-class constant of psi_A along a class:
//   psi_A(i) = Cpsi * exp(-Lpsi * i) * eta(i)^-beta.
struct ClassPsi {
  std::vector<std::pair<Rational, Rational>> rate;   // log factors of e^{Lpsi}
  std::vector<std::pair<Rational, Rational>> konst;  // log factors of Cpsi
  Rational beta;
  long long psi_base = 0;
  Rational psi_rate_coeff;  // Lpsi = psi_rate_coeff * ln(psi_base)
};

inline ClassPsi class_psi(const PsiSpec& spec, const LinearForm& eta) {
  ClassPsi out;
  Rational coeff, theta;
  long long base;
  if (const auto* pd = std::get_if<PowerDecaySpec>(&spec.family)) {
    coeff = pd->coeff;
    theta = pd->theta;
    base = pd->base;
    out.beta = 0;
  } else {
    const auto& lm = std::get<LogModifiedSpec>(spec.family);
    coeff = 1;
    theta = lm.theta;
    base = lm.base;
    out.beta = lm.beta;
  }
  out.psi_base = base;
  out.psi_rate_coeff = theta * eta.slope;
  out.rate = {{Rational(base), theta * eta.slope}};
  out.konst = {{coeff, Rational(1)}, {Rational(base), -theta * eta.offset}};
  return out;
}

inline std::vector<std::pair<Rational, Rational>> negated(
    std::vector<std::pair<Rational, Rational>> terms) {
  for (auto& [base, exp] : terms) exp = -exp;
  return terms;
}

inline std::vector<std::pair<Rational, Rational>> concat(
    std::vector<std::pair<Rational, Rational>> a,
    const std::vector<std::pair<Rational, Rational>>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

struct ClassOutcome {
  bool infinite_qualifying = false;
  std::optional<SeriesSum> sum;          // set when infinite_qualifying
  std::optional<double> ratio;           // e^R numeric
  bool unknown_cross = false;            // gamma-cross term prevented exactness
};

}  // namespace detail

// Symbolic classification of one theorem series for family psi specs with
// identity or affine sequences. Residue classes are analyzed separately and
// exactly; the series diverges iff some class does.
inline SeriesReport classify_series_symbolic(const CantorParams& params,
                                             const DimensionFunctionSpec& f, const PsiSpec& spec,
                                             const SeriesShape& shape) {
  SeriesReport report;
  report.name = shape.name;
  report.basis = Basis::Symbolic;

  const long long d = params.digit_count();
  const long long b = params.base();
  const int m = shape.shift == ShiftKind::None ? 0 : params.m();

  long long M = 1;
  if (const auto* aff = std::get_if<AffineSequence>(&spec.sequence))
    M = std::lcm(M, static_cast<long long>(numerator(aff->slope)));
  if (m > 0 && (shape.shift == ShiftKind::FloorAlpha || shape.shift == ShiftKind::CeilAlpha))
    M = std::lcm(M, static_cast<long long>(denominator(shape.alpha)));

  bool any_diverges = false, any_unknown = false, any_infinite = false;

  for (long long r = 0; r < M; ++r) {
    auto eta = detail::class_eta(spec, r, M);
    if (!eta) continue;  // class not attained by A
    const auto cp = detail::class_psi(spec, *eta);

    // Qualifying analysis against the shift, when there is one.
    bool qualifies_infinitely = true;
    std::vector<std::pair<Rational, Rational>> effective_rate = cp.rate;
    if (m > 0 && shape.shift != ShiftKind::None) {
      Rational shift_alpha = shape.shift == ShiftKind::Identity ? Rational(1) : shape.alpha;
      // shift(i) = m/(b-1) * b^{corr_r} * e^{-shift_alpha ln(b) i}
      Rational corr(0);
      if (shape.shift == ShiftKind::FloorAlpha) {
        const BigInt num = numerator(shape.alpha) * r;
        corr = Rational(num % denominator(shape.alpha), denominator(shape.alpha));
      } else if (shape.shift == ShiftKind::CeilAlpha) {
        // ceil(i alpha) = i alpha + eps_r, so the shift constant carries b^-eps_r.
        const BigInt num = numerator(shape.alpha) * r;
        const BigInt rem = num % denominator(shape.alpha);
        corr = rem == 0 ? Rational(0)
                        : Rational(rem - denominator(shape.alpha), denominator(shape.alpha));
      }
      const int rate_cmp = exact_sign_log_terms(
          detail::concat(cp.rate, {{Rational(b), -shift_alpha}}));
      if (rate_cmp > 0) {
        qualifies_infinitely = false;  // psi decays strictly faster: finite qualifying set
      } else if (rate_cmp == 0) {
        if (cp.beta > 0) {
          qualifies_infinitely = false;
        } else if (cp.beta == 0) {
          // constant battle: psi_A(i) > shift(i) for all i in the class or none
          auto shift_konst = std::vector<std::pair<Rational, Rational>>{
              {Rational(m, b - 1), Rational(1)}, {Rational(b), corr}};
          qualifies_infinitely =
              exact_sign_log_terms(detail::concat(cp.konst, detail::negated(shift_konst))) > 0;
        }
        // beta < 0: psi dominates along the class; qualifying cofinite
      }
      // rate_cmp < 0: psi dominates; shift asymptotically negligible
    }
    if (!qualifies_infinitely) continue;
    any_infinite = true;

    // Per-i log ratio R = -s * Lpsi + weight_rate * ln(d).
    std::vector<std::pair<Rational, Rational>> pure = {
        {Rational(d), shape.weight_rate}};
    for (const auto& [base, exp] : cp.rate) pure.emplace_back(base, -f.s.plain * exp);
    bool cross = false;
    Real cross_value = 0;
    if (f.s.gamma != 0) {
      // -s_gamma * gamma * Lpsi, with gamma ln(u) = rho ln(d) when u ~ b.
      for (const auto& [base, exp] : cp.rate) {
        const BigInt num = numerator(base), den = denominator(base);
        if (den != 1 || num < 2) {
          if (num == 1 && den == 1) continue;
          cross = true;
          break;
        }
        auto rho = mult_dep_ratio(static_cast<long long>(num), b);
        if (rho) {
          pure.emplace_back(Rational(d), -f.s.gamma * exp * *rho);
        } else {
          cross = true;
          cross_value += -to_real(f.s.gamma * exp) * params.gamma() * log(Real(num));
        }
      }
    }

    int sign;
    if (!cross) {
      sign = exact_sign_log_terms(pure);
    } else {
      Real v = cross_value;
      for (const auto& [base, exp] : pure)
        v += to_real(exp) * log(to_real(base));
      if (abs(v) < Real("1e-30")) {
        any_unknown = true;
        report.notes.push_back(
            "class " + std::to_string(r) + ": exponent within numeric margin of the boundary and "
            "not exactly reducible; cannot certify");
        continue;
      }
      sign = v > 0 ? 1 : -1;
    }

    if (!report.closed_form_ratio) {
      Real v = 0;
      for (const auto& [base, exp] : pure) v += to_real(exp) * log(to_real(base));
      if (cross) v += cross_value;
      report.closed_form_ratio = static_cast<double>(exp(v));
    }

    if (sign > 0) {
      any_diverges = true;
    } else if (sign == 0) {
      // ratio exactly 1: p-series on the polynomial factor i^(c - beta*s)
      const GammaAffine rho = GammaAffine::constant(f.log_power - cp.beta * f.s.plain) -
                              GammaAffine(Rational(0), cp.beta * f.s.gamma);
      const GammaAffine rho_plus_one = rho + GammaAffine::constant(Rational(1));
      if (sign_gamma_affine(rho_plus_one, params) >= 0) any_diverges = true;
      // rho < -1: class converges
    }
    // sign < 0: class converges
  }

  if (!any_infinite) {
    report.empty_qualifying = true;
    report.notes.push_back("qualifying index set is finite or empty; the series converges trivially");
  }
  report.sum = any_diverges  ? SeriesSum::Diverges
               : any_unknown ? SeriesSum::Unknown
                             : SeriesSum::Converges;
  return report;
}

namespace detail {

// Exact qualifying test psi_A(i) > m/((b-1) b^e).
inline bool qualifies(const PsiSpec& spec, long long i, int m, long long b, const BigInt& e) {
  if (m == 0) return true;
  auto ns = fiber(spec, i);
  if (ns.empty()) return false;
  long long best = ns.front();
  for (long long n : ns)
    if (compare_psi(spec, n, best) > 0) best = n;
  auto terms = psi_log_factors(spec, best);
  terms.emplace_back(Rational(m, b - 1), Rational(-1));
  terms.emplace_back(Rational(b), Rational(e));
  return exact_sign_log_terms(terms) > 0;
}

inline BigInt shift_exponent(const SeriesShape& shape, long long i) {
  switch (shape.shift) {
    case ShiftKind::None:
    case ShiftKind::Identity:
      return BigInt(i);
    case ShiftKind::FloorAlpha:
      return floor_rational(shape.alpha * i);
    case ShiftKind::CeilAlpha:
      return ceil_rational(shape.alpha * i);
  }
  return BigInt(i);
}

}  // namespace detail

// Numeric partial sums of a theorem series, for diagnostics. Qualification is
// still tested exactly per term; only the summed values are floating.
inline std::vector<double> numeric_partial_sums(const CantorParams& params,
                                                const DimensionFunctionSpec& f, const PsiSpec& spec,
                                                const SeriesShape& shape, long long max_terms,
                                                std::vector<std::string>* notes = nullptr) {
  const Real g = params.gamma();
  const long long b = params.base();
  const int m = shape.shift == ShiftKind::None ? 0 : params.m();
  std::vector<double> checkpoints;
  const std::vector<long long> marks = {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
  Real sum = 0;
  long long terms_seen = 0;
  for (long long i : index_set(spec, max_terms)) {
    bool in_domain = true;
    Real psi_val = 0;
    try {
      auto ns = detail::fiber(spec, i);
      std::erase_if(ns, [&](long long n) {
        if (!spec.family_is_table()) return false;
        return n > static_cast<long long>(std::get<PsiTableSpec>(spec.family).values.size());
      });
      if (ns.empty()) continue;
      long long best = ns.front();
      for (long long n : ns)
        if (detail::compare_psi(spec, n, best) > 0) best = n;
      psi_val = detail::psi_numeric(spec, best);
      if (m > 0 && !detail::qualifies(spec, i, m, b, detail::shift_exponent(shape, i))) in_domain = false;
    } catch (const std::domain_error&) {
      break;  // table exhausted
    }
    if (in_domain) {
      Real x = psi_val;
      if (m > 0) {
        const BigInt e = detail::shift_exponent(shape, i);
        x -= to_real(Rational(m, b - 1)) * exp(-Real(e) * log(Real(b)));
      }
      if (x > 0) {
        const Real weight = exp(Real(i) * to_real(shape.weight_rate) * log(Real(params.digit_count())));
        sum += f.value(x, g) * weight;
      }
    }
    ++terms_seen;
    if (std::find(marks.begin(), marks.end(), terms_seen) != marks.end())
      checkpoints.push_back(static_cast<double>(sum));
    if (sum > Real("1e120")) {
      if (notes) notes->push_back("partial sums exceed 1e120 after " + std::to_string(terms_seen) + " terms");
      checkpoints.push_back(static_cast<double>(Real("1e120")));
      break;
    }
  }
  if (checkpoints.empty() || checkpoints.back() != static_cast<double>(sum))
    if (sum <= Real("1e120")) checkpoints.push_back(static_cast<double>(sum));
  return checkpoints;
}

// Does psi_A(i) >= t^-i / 2 hold for infinitely many i in I? Decided
// symbolically for family specs; when it holds the union of approximating
// balls covers [0,1] at those levels.
inline std::optional<bool> covers_unit_interval(const PsiSpec& spec, long long t) {
  if (!spec.symbolic()) return std::nullopt;
  long long M = 1;
  if (const auto* aff = std::get_if<AffineSequence>(&spec.sequence))
    M = static_cast<long long>(numerator(aff->slope));
  for (long long r = 0; r < M; ++r) {
    auto eta = detail::class_eta(spec, r, M);
    if (!eta) continue;
    const auto cp = detail::class_psi(spec, *eta);
    const int rate_cmp =
        exact_sign_log_terms(detail::concat(cp.rate, {{Rational(t), Rational(-1)}}));
    if (rate_cmp < 0) return true;  // psi decays slower than t^-i
    if (rate_cmp == 0) {
      if (cp.beta < 0) return true;
      if (cp.beta == 0) {
        auto half = std::vector<std::pair<Rational, Rational>>{{Rational(1, 2), Rational(1)}};
        if (exact_sign_log_terms(detail::concat(cp.konst, detail::negated(half))) >= 0)
          return true;
      }
    }
  }
  return false;
}

namespace detail {

inline SeriesReport advisory_series(const CantorParams& params, const DimensionFunctionSpec& f,
                                    const PsiSpec& spec, const SeriesShape& shape) {
  SeriesReport rep;
  rep.name = shape.name;
  rep.basis = Basis::NumericAdvisory;
  rep.sum = SeriesSum::Unknown;
  rep.partial_sums = numeric_partial_sums(params, f, spec, shape, 10'000, &rep.notes);
  rep.notes.push_back("finite table data cannot witness convergence or divergence");
  return rep;
}

inline SeriesReport build_series(const CantorParams& params, const DimensionFunctionSpec& f,
                                 const PsiSpec& spec, const SeriesShape& shape) {
  if (!spec.symbolic()) return advisory_series(params, f, spec, shape);
  SeriesReport rep = classify_series_symbolic(params, f, spec, shape);
  rep.partial_sums = numeric_partial_sums(params, f, spec, shape, 500, &rep.notes);
  return rep;
}

inline void apply_monotonicity_note(Verdict& v, const CantorParams& params,
                                    const DimensionFunctionSpec& f) {
  const auto rep = monotonic_grid_report(f, params);
  if (!rep.monotonic_on_grid)
    v.notes.push_back("warning: r^-gamma f(r) is not monotonic on the check grid (" + rep.domain + ")");
}

// Applies the covering escape: when the balls cover [0,1] infinitely often,
// divergence of the controlling series still yields Full; otherwise the
// situation degenerates and we refuse to decide.
inline bool apply_escape(Verdict& v, const PsiSpec& spec, long long t, SeriesSum divergence_side) {
  auto covers = covers_unit_interval(spec, t);
  if (!covers || !*covers) return false;
  v.notes.push_back(
      "psi_A(i) >= t^-i/2 for infinitely many i: the approximating balls cover [0,1] at those "
      "levels and the limsup set is all of [0,1]");
  if (divergence_side == SeriesSum::Diverges) {
    v.outcome = Outcome::Full;
  } else {
    v.outcome = Outcome::Undecided;
    v.notes.push_back(
        "the controlling series does not diverge, so the gauge measure of the whole set vanishes "
        "and the dichotomy is degenerate; refusing to decide");
  }
  return true;
}

}  // namespace detail

// Zero-full verdict for approximation by p/b^n lattices (t = b), with the
// endpoint-offset shift m/((b-1) b^i) and weight b^{i gamma}.
inline Verdict verdict_base_equal(const CantorParams& params, const DimensionFunctionSpec& f,
                                  const PsiSpec& spec) {
  spec.validate();
  f.validate(params);
  Verdict v;
  SeriesShape shape{"base-equal series", Rational(1),
                    params.m() > 0 ? ShiftKind::Identity : ShiftKind::None, Rational(1)};
  v.series.push_back(detail::build_series(params, f, spec, shape));
  detail::apply_monotonicity_note(v, params, f);
  const SeriesSum sum = v.series[0].sum;
  if (v.series[0].basis == Basis::NumericAdvisory) {
    v.outcome = Outcome::Undecided;
    return v;
  }
  if (detail::apply_escape(v, spec, params.base(), sum)) return v;
  v.outcome = sum == SeriesSum::Diverges   ? Outcome::Full
              : sum == SeriesSum::Converges ? Outcome::Zero
                                            : Outcome::Undecided;
  return v;
}

// Zero-full verdict for multiplicatively dependent t, requiring that D
// contains 0 or b-1; series sum f(psi_A(i)) t^{i gamma}.
inline Verdict verdict_dependent(const CantorParams& params, long long t,
                                 const DimensionFunctionSpec& f, const PsiSpec& spec) {
  spec.validate();
  f.validate(params);
  const RegimeReport regime = analyze(params.base(), t);
  if (!regime.mult_dependent)
    throw precondition_error("verdict_dependent: b and t are not multiplicatively dependent");
  if (params.m() != 0)
    throw precondition_error(
        "verdict_dependent: D contains neither 0 nor b-1; this dichotomy does not apply, use "
        "verdict_main instead");
  Verdict v;
  SeriesShape shape{"dependent series", *regime.alpha1, ShiftKind::None, *regime.alpha1};
  v.series.push_back(detail::build_series(params, f, spec, shape));
  detail::apply_monotonicity_note(v, params, f);
  const SeriesSum sum = v.series[0].sum;
  if (v.series[0].basis == Basis::NumericAdvisory) {
    v.outcome = Outcome::Undecided;
    return v;
  }
  if (detail::apply_escape(v, spec, t, sum)) return v;
  v.outcome = sum == SeriesSum::Diverges   ? Outcome::Full
              : sum == SeriesSum::Converges ? Outcome::Zero
                                            : Outcome::Undecided;
  return v;
}

// Two-series verdict for t with the same prime divisors as b: the zero side
// uses ceil(i alpha2) shifts with weight b^{i alpha2 gamma}, the full side
// floor(i alpha1) with weight b^{i alpha1 gamma}.
inline Verdict verdict_main(const CantorParams& params, long long t,
                            const DimensionFunctionSpec& f, const PsiSpec& spec) {
  spec.validate();
  f.validate(params);
  const RegimeReport regime = analyze(params.base(), t);
  if (!regime.same_primes)
    throw precondition_error(
        "verdict_main: b and t have different prime divisors; no theorem applies, see the "
        "different-primes conjecture (predict/census)");
  Verdict v;
  const bool shifted = params.m() > 0;
  SeriesShape zero_shape{"zero series (alpha2)", *regime.alpha2,
                         shifted ? ShiftKind::CeilAlpha : ShiftKind::None, *regime.alpha2};
  SeriesShape full_shape{"full series (alpha1)", *regime.alpha1,
                         shifted ? ShiftKind::FloorAlpha : ShiftKind::None, *regime.alpha1};
  v.series.push_back(detail::build_series(params, f, spec, zero_shape));
  v.series.push_back(detail::build_series(params, f, spec, full_shape));
  detail::apply_monotonicity_note(v, params, f);
  if (v.series[0].basis == Basis::NumericAdvisory) {
    v.outcome = Outcome::Undecided;
    return v;
  }
  const SeriesSum zero_sum = v.series[0].sum;
  const SeriesSum full_sum = v.series[1].sum;
  if (detail::apply_escape(v, spec, t, full_sum)) return v;
  if (zero_sum == SeriesSum::Converges) v.outcome = Outcome::Zero;
  else if (full_sum == SeriesSum::Diverges) v.outcome = Outcome::Full;
  else if (zero_sum == SeriesSum::Diverges && full_sum == SeriesSum::Converges) {
    v.outcome = Outcome::Inconclusive;
    v.notes.push_back("the zero-side series diverges while the full-side series converges; the "
                      "two-series criterion cannot decide");
  } else {
    v.outcome = Outcome::Undecided;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Decay rate lambda_psi and dimension predictions.
// ---------------------------------------------------------------------------

struct LambdaReport {
  Real value = 0;
  Basis basis = Basis::Symbolic;
  std::optional<Rational> exact;  // set when log(u)/log(t) is rational
  long long window = 0;           // table estimation window
  bool degenerate_sub1 = false;   // lambda < 1: trivial regime
  std::vector<std::string> notes;
};

// liminf of -log psi(n) / (n log t).
inline LambdaReport lambda_psi(const PsiSpec& spec, long long t) {
  spec.validate();
  if (t < 2) throw std::domain_error("lambda_psi: t must be >= 2");
  LambdaReport rep;
  if (!spec.family_is_table()) {
    Rational theta;
    long long base;
    if (const auto* pd = std::get_if<PowerDecaySpec>(&spec.family)) {
      theta = pd->theta;
      base = pd->base;
    } else {
      const auto& lm = std::get<LogModifiedSpec>(spec.family);
      theta = lm.theta;
      base = lm.base;
    }
    rep.basis = Basis::Symbolic;
    if (auto rho = mult_dep_ratio(base, t)) {
      rep.exact = theta * *rho;
      rep.value = to_real(*rep.exact);
    } else {
      rep.value = to_real(theta) * log(Real(base)) / log(Real(t));
    }
  } else {
    const auto& tab = std::get<PsiTableSpec>(spec.family);
    rep.basis = Basis::NumericAdvisory;
    rep.window = static_cast<long long>(tab.values.size());
    std::vector<Real> samples;
    for (size_t n = 1; n <= tab.values.size(); ++n)
      samples.push_back(-log(to_real(tab.values[n - 1])) / (Real(n) * log(Real(t))));
    const size_t half = samples.size() / 2;
    Real lo = samples[half], hi = samples[half];
    for (size_t j = half; j < samples.size(); ++j) {
      if (samples[j] < lo) lo = samples[j];
      if (samples[j] > hi) hi = samples[j];
    }
    rep.value = lo;
    if (abs(lo) > Real("1e-12") && (hi - lo) / abs(lo) > Real("0.05"))
      rep.notes.push_back("tail estimates oscillate by more than 5%; the window does not witness "
                          "convergence of the liminf");
    rep.notes.push_back("finite-window estimate over " + std::to_string(rep.window) + " table values");
  }
  if (rep.value < 1) {
    rep.degenerate_sub1 = true;
    rep.notes.push_back("lambda < 1: the approximation sets are trivially the whole interval regime");
  }
  return rep;
}

struct PredictionEntry {
  std::string label;  // "dimension", "lower_bound", "upper_bound"
  Real value;
  std::string tag;  // "theorem" | "conjecture"
};

struct DimensionPrediction {
  Regime regime = Regime::DifferentPrimes;
  Real gamma = 0;
  Real lambda = 0;
  std::vector<PredictionEntry> entries;
  std::optional<Real> large_intersection_threshold;  // admissible s strictly below this
  std::vector<std::string> notes;
};

// Regime-dispatched Hausdorff dimension prediction for W_t(psi) cap C(b,D)
// given the decay rate lambda >= 1.
inline DimensionPrediction predict_dimension(const CantorParams& params, long long t,
                                             const Real& lambda) {
  if (lambda < 1)
    throw std::domain_error(
        "predict_dimension: lambda < 1, the situation is trivial (the whole-set regime)");
  const RegimeReport regime = analyze(params.base(), t);
  DimensionPrediction out;
  out.regime = regime.regime;
  out.gamma = params.gamma();
  out.lambda = lambda;
  const Real g = out.gamma;
  const bool digit_hypothesis = params.m() == 0;  // D contains 0 or b-1
  const Real logb = log(Real(params.base()));
  const Real logt = log(Real(t));

  switch (regime.regime) {
    case Regime::MultiplicativelyDependent: {
      if (digit_hypothesis) {
        out.entries.push_back({"dimension", g / lambda, "theorem"});
        if (lambda > 1) out.large_intersection_threshold = g / lambda;
      } else if (lambda > 1) {
        out.entries.push_back({"dimension", Real(0), "theorem"});
        out.notes.push_back(
            "D misses both 0 and b-1 and lambda > 1: the shifted series converges for every "
            "gauge, so the intersection carries zero measure in all of them");
      } else {
        out.entries.push_back({"lower_bound", Real(0), "theorem"});
        out.entries.push_back({"upper_bound", g, "theorem"});
        out.notes.push_back(
            "D misses both 0 and b-1 and lambda = 1: the decay rate alone does not determine "
            "the dimension");
      }
      break;
    }
    case Regime::SamePrimesIndependent: {
      const Real a1 = to_real(*regime.alpha1), a2 = to_real(*regime.alpha2);
      const Real ub = a2 * logb / logt * g / lambda;
      if (digit_hypothesis) {
        out.entries.push_back({"lower_bound", a1 * logb / logt * g / lambda, "theorem"});
        out.entries.push_back({"upper_bound", ub, "theorem"});
        out.entries.push_back({"dimension", g / lambda, "conjecture"});
      } else if (lambda * logt > a2 * logb) {
        out.entries.push_back({"dimension", Real(0), "theorem"});
        out.notes.push_back("D misses both 0 and b-1 and lambda exceeds alpha2 log b / log t: "
                            "the shifted zero-side series always converges");
      } else {
        out.entries.push_back({"lower_bound", Real(0), "theorem"});
        out.entries.push_back({"upper_bound", ub, "theorem"});
        out.notes.push_back("D misses both 0 and b-1: only the zero-side bound survives");
      }
      break;
    }
    case Regime::DifferentPrimes: {
      Real value = 1 / lambda + g - 1;
      if (value < 0) value = 0;
      out.entries.push_back({"dimension", value, "conjecture"});
      if (!digit_hypothesis)
        out.notes.push_back("the different-primes prediction assumes D contains 0 or b-1, which "
                            "does not hold here");
      break;
    }
  }
  return out;
}

}  // namespace zerofull
