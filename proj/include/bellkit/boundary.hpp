#ifndef BELLKIT_BOUNDARY_HPP
#define BELLKIT_BOUNDARY_HPP

#include "bellkit/strategy.hpp"

#include <vector>

namespace bellkit {

// Saturation tolerance separating boundary from interior. Inputs produced by
// the closed-form pipelines saturate exactly up to rounding; measured data
// sits on a knife edge at this resolution.
inline constexpr double kSaturationTol = 1e-10;

enum class Membership { interior, boundary, outside };

/// One arcsin condition: sum_{(x,y) != (i,j)} asin c_xy - asin c_ij = xi*pi.
struct SaturatedCondition {
  int i = 0;
  int j = 0;
  int xi = +1;
  double value = 0.0;  // the arcsin sum itself
};

struct MembershipReport {
  Membership where = Membership::interior;
  std::vector<SaturatedCondition> saturated;  // lexicographic in (i, j, xi)
  std::array<double, 4> sums{};               // arcsin sums indexed by 2i+j
};

namespace detail {

inline void check_correlator_range(const Correlators& c) {
  for (int k = 0; k < 4; ++k)
    if (std::fabs(c(k)) > 1.0 + kAlgebraTol)
      throw domain_error("correlator entry outside [-1, 1]");
}

inline double clamped_asin(double x) {
  return std::asin(std::min(1.0, std::max(-1.0, x)));
}

inline std::array<double, 4> arcsin_sums(const Correlators& c) {
  double total = 0.0;
  for (int k = 0; k < 4; ++k) total += clamped_asin(c(k));
  std::array<double, 4> s{};
  for (int k = 0; k < 4; ++k) s[k] = total - 2.0 * clamped_asin(c(k));
  return s;
}

}  // namespace detail

/// Membership of a correlator 4-vector in the quantum set with uniform
/// marginals, via the eight arcsin inequalities.
inline MembershipReport masanes_membership(const Correlators& c) {
  detail::check_correlator_range(c);
  MembershipReport rep;
  rep.sums = detail::arcsin_sums(c);
  bool violated = false;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = rep.sums[2 * i + j];
      if (std::fabs(s) > kPi + kSaturationTol) violated = true;
      for (int xi : {+1, -1})
        if (std::fabs(s - xi * kPi) <= kSaturationTol)
          rep.saturated.push_back({i, j, xi, s});
    }
  rep.where = violated ? Membership::outside
              : rep.saturated.empty() ? Membership::interior
                                      : Membership::boundary;
  return rep;
}

/// Singlet self-test criterion: some arcsin condition saturates at +-pi and
/// at most one arccos <A_x B_y> lies in {0, pi} (i.e. at most one |c| = 1).
inline bool wang_selftest_check(const Correlators& c) {
  detail::check_correlator_range(c);
  auto sums = detail::arcsin_sums(c);
  bool saturated = false;
  for (double s : sums)
    if (std::fabs(std::fabs(s) - kPi) <= kSaturationTol) saturated = true;
  if (!saturated) return false;
  int degenerate = 0;
  for (int k = 0; k < 4; ++k)
    if (1.0 - std::fabs(c(k)) <= kSaturationTol) ++degenerate;
  return degenerate <= 1;
}

struct TangentResult {
  BellParameters params;
  double check = 0.0;       // B . c - eta_Q, at most ~1e-10 in magnitude
  SaturatedCondition used;  // the saturated condition the construction chose
  int saturated_count = 0;  // > 1 flags a degenerate (e.g. deterministic) point
};

/// Construct a family member tangent at a boundary point. The saturated
/// condition with the lowest (i, j, xi) in lexicographic order (+1 before -1)
/// is relabelled to the canonical orientation (i, j, xi) = (0, 1, +1) by an
/// Alice input swap for i = 1, a Bob input swap for j = 0 and a global
/// outcome flip for xi = -1; the parameters are then
/// (theta, phi, omega) = (a00 + a10, pi/2 - a00, pi/2 - a01) with
/// a_xy = arccos c_xy, pulled back through the inverse relabelling.
inline TangentResult tangent_from_boundary(const Correlators& point) {
  MembershipReport rep = masanes_membership(point);
  if (rep.where != Membership::boundary)
    throw not_on_boundary_error(
        rep.where == Membership::interior
            ? "tangent_from_boundary: point is interior"
            : "tangent_from_boundary: point is outside the quantum set");

  const SaturatedCondition& sat = rep.saturated.front();
  const bool swap_alice = sat.i == 1;
  const bool swap_bob = sat.j == 0;
  const bool negate = sat.xi == -1;

  Correlators c = point;
  if (swap_alice) c = Correlators(c(2), c(3), c(0), c(1));
  if (swap_bob) c = Correlators(c(1), c(0), c(3), c(2));
  if (negate) c = -c;

  std::array<double, 4> alpha{};
  for (int k = 0; k < 4; ++k)
    alpha[k] = std::acos(std::min(1.0, std::max(-1.0, c(k))));
  double vartheta = alpha[0] + alpha[2];  // = alpha01 - alpha11 by saturation

  double t = vartheta, f = kPi / 2 - alpha[0], w = kPi / 2 - alpha[1];
  if (negate) { f += kPi; w += kPi; }
  if (swap_bob) std::swap(f, w);
  if (swap_alice) {
    double t2 = -t;
    f = t + f;
    w = t + w;
    t = t2;
  }

  TangentResult out;
  out.params = BellParameters(t, f, w);
  out.used = sat;
  out.saturated_count = static_cast<int>(rep.saturated.size());
  out.check = evaluate(make_functional(out.params), point) - quantum_bound(out.params);
  return out;
}

}  // namespace bellkit

#endif  // BELLKIT_BOUNDARY_HPP
