// Rewrites a ball centered on a lattice point p/b^n as recentered balls whose
// centers lie inside C(b,D), or detects that the intersection is empty.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zerofull/cantor.hpp"
#include "zerofull/exactnum.hpp"

namespace zerofull {

struct Ball {
  Rational center;
  Rational radius;  // open ball, radius > 0
};

enum class FormKind { Empty, Left, Right, Pair };

inline const char* to_string(FormKind k) {
  switch (k) {
    case FormKind::Empty: return "Empty";
    case FormKind::Left: return "Left";
    case FormKind::Right: return "Right";
    case FormKind::Pair: return "Pair";
  }
  return "?";
}

// Outcome of the classifier. Every carried ball has positive radius and a
// center inside C(b,D); components whose recentered radius is non-positive
// are dropped, degrading Pair -> Left/Right -> Empty.
struct IntersectionForm {
  std::optional<Ball> left;   // recentered from a left endpoint (shift +d_l)
  std::optional<Ball> right;  // recentered from a right endpoint (shift -d_r)

  FormKind kind() const {
    if (left && right) return FormKind::Pair;
    if (left) return FormKind::Left;
    if (right) return FormKind::Right;
    return FormKind::Empty;
  }

  std::vector<Ball> balls() const {
    std::vector<Ball> out;
    if (left) out.push_back(*left);
    if (right) out.push_back(*right);
    return out;
  }
};

// The exact offsets d_{l,n} = m_l/((b-1) b^n) and d_{r,n} = m_r/((b-1) b^n)
// from a level-n endpoint to the nearest point of C(b,D).
inline std::pair<Rational, Rational> shifts(const CantorParams& params, long long n) {
  if (n < 1) throw std::domain_error("shifts: n must be >= 1");
  const BigInt scale = (params.base() - 1) * pow_int(params.base(), static_cast<unsigned long long>(n));
  return {Rational(params.m_l(), scale), Rational(params.m_r(), scale)};
}

// Case analysis for B(p/b^n, radius) intersected with C(b,D), valid for
// radius < b^-n / 2. The returned form meets C(b,D) in exactly the same set
// as the input ball.
inline IntersectionForm classify(const CantorParams& params, const BigInt& p, long long n,
                                 const Rational& radius) {
  check_lattice_range(params, p, n);
  if (n < 1) throw std::domain_error("classify: n must be >= 1");
  if (radius <= 0) throw std::domain_error("classify: radius must be positive");
  const Rational half_cell = Rational(1, 2 * pow_int(params.base(), static_cast<unsigned long long>(n)));
  if (radius >= half_cell)
    throw not_applicable_error(
        "classify: radius >= b^-n/2 is outside the lemma hypothesis; at this size the balls at "
        "consecutive lattice points overlap and the caller must handle the large-radius regime");
  const Rational center(p, pow_int(params.base(), static_cast<unsigned long long>(n)));
  auto [d_l, d_r] = shifts(params, n);
  IntersectionForm form;
  if (is_left_endpoint(params, p, n) && radius > d_l)
    form.left = Ball{center + d_l, radius - d_l};
  if (is_right_endpoint(params, p, n) && radius > d_r)
    form.right = Ball{center - d_r, radius - d_r};
  return form;
}

// Predicate form of classify.
inline bool survives(const CantorParams& params, const BigInt& p, long long n,
                     const Rational& radius) {
  return classify(params, p, n, radius).kind() != FormKind::Empty;
}

// Interpretation note surfaced by the CLI in verbose mode: the endpoint case
// analysis treats the "both endpoints" branch as applying to points of the
// intersection of the left and right endpoint sets; a union reading would
// shadow the single-endpoint branches.
inline const char* classify_interpretation_note() {
  return "note: the two-ball branch applies to lattice points that are simultaneously left and "
         "right endpoints (intersection reading); a union reading would shadow the one-sided "
         "branches";
}

}  // namespace zerofull
