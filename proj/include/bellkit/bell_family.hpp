#ifndef BELLKIT_BELL_FAMILY_HPP
#define BELLKIT_BELL_FAMILY_HPP

#include "bellkit/qmat.hpp"

#include <optional>

namespace bellkit {

/// The (theta, phi, omega) triple labelling one member of the Bell family.
/// Angles are normalized to (-pi, pi] on construction so that equivalent
/// parameters compare equal in caches and reports.
struct BellParameters {
  double theta = 0.0;
  double phi = 0.0;
  double omega = 0.0;

  BellParameters() = default;
  BellParameters(double t, double f, double w)
      : theta(normalize_angle(t)), phi(normalize_angle(f)), omega(normalize_angle(w)) {}

  friend bool operator==(const BellParameters&, const BellParameters&) = default;
};

/// Linear form on the four correlators <A_x B_y>, stored in input order
/// (00, 01, 10, 11). When built from BellParameters the coefficients are
///   c00 =  cos(t+f) cos(t+w) cos w,   c01 = -cos(t+f) cos(t+w) cos f,
///   c10 = -cos f cos w cos(t+w),      c11 =  cos f cos w cos(t+f).
struct BellFunctional {
  Coefficients coeffs = Coefficients::Zero();
  std::optional<BellParameters> source;
  double local_bound = 0.0;  // brute-force value, cached at construction
};

/// Max over the 16 deterministic sign assignments a_x, b_y in {+-1}.
inline double local_bound_bruteforce_coeffs(const Coefficients& c) {
  double best = 0.0;
  for (int a0 = -1; a0 <= 1; a0 += 2)
    for (int a1 = -1; a1 <= 1; a1 += 2)
      for (int b0 = -1; b0 <= 1; b0 += 2)
        for (int b1 = -1; b1 <= 1; b1 += 2) {
          double v = c(0) * a0 * b0 + c(1) * a0 * b1 + c(2) * a1 * b0 +
                     c(3) * a1 * b1;
          best = std::max(best, v);
        }
  return best;
}

inline double local_bound_bruteforce(const BellFunctional& f) {
  return local_bound_bruteforce_coeffs(f.coeffs);
}

inline BellFunctional make_functional(const BellParameters& p) {
  double ctf = std::cos(p.theta + p.phi);
  double ctw = std::cos(p.theta + p.omega);
  double cf = std::cos(p.phi);
  double cw = std::cos(p.omega);
  BellFunctional f;
  f.coeffs << ctf * ctw * cw, -ctf * ctw * cf, -cf * cw * ctw, cf * cw * ctf;
  f.source = p;
  f.local_bound = local_bound_bruteforce_coeffs(f.coeffs);
  return f;
}

inline BellFunctional make_functional(const Coefficients& c) {
  BellFunctional f;
  f.coeffs = c;
  f.local_bound = local_bound_bruteforce_coeffs(c);
  return f;
}

/// Closed-form local bound: max over the two +- branches.
inline double local_bound_formula(const BellParameters& p) {
  double ctf = std::cos(p.theta + p.phi);
  double ctw = std::cos(p.theta + p.omega);
  double cf = std::cos(p.phi);
  double cw = std::cos(p.omega);
  double plus = std::fabs(ctw * cw * (ctf + cf)) + std::fabs(ctf * cf * (ctw + cw));
  double minus = std::fabs(ctw * cw * (ctf - cf)) + std::fabs(ctf * cf * (ctw - cw));
  return std::max(plus, minus);
}

/// Signed quantum bound sin(t) sin(w-f) sin(t+w+f); the quantum bounds of the
/// functional are +-eta_Q. Meaningful as the quantum bound only when
/// selftest_condition holds.
inline double quantum_bound(const BellParameters& p) {
  return std::sin(p.theta) * std::sin(p.omega - p.phi) *
         std::sin(p.theta + p.omega + p.phi);
}

// Deadband for the strict sign test below. At exactly degenerate triples
// (a cosine factor vanishing, e.g. phi = pi/2) the floating-point product is
// sign noise of order 1e-16, and those triples must be classified as not
// self-testing.
inline constexpr double kConditionTol = 1e-14;

/// cos(t+f) cos(f) cos(t+w) cos(w) < 0, strictly.
inline bool selftest_condition(const BellParameters& p) {
  return std::cos(p.theta + p.phi) * std::cos(p.phi) *
             std::cos(p.theta + p.omega) * std::cos(p.omega) <
         -kConditionTol;
}

// ---------------------------------------------------------------------------
// Parameter equivalences to Bell expressions from the literature.

enum class KnownInequality { CHSH, I_delta, J_gamma, Tilted, Symmetric };

struct KnownMapping {
  BellParameters params;
  /// Dividing the family coefficients by `scale` yields the literature form.
  double scale = 1.0;
};

/// CHSH: fixed triple; scaled coefficients are exactly (1, 1, 1, -1).
inline KnownMapping known_chsh() {
  return {BellParameters(-kPi / 2, 3 * kPi / 4, kPi / 4), 1.0 / (2.0 * std::sqrt(2.0))};
}

/// I_delta family, delta in (0, pi/6].
inline KnownMapping known_i_delta(double delta) {
  if (!(delta > 0.0 && delta <= kPi / 6))
    throw domain_error("I_delta: delta must lie in (0, pi/6]");
  double t = delta + kPi / 2;
  double sd = std::sin(delta);
  return {BellParameters(t, 0.0, t), -sd * sd * std::cos(2 * delta)};
}

/// J_gamma family, gamma in (0, pi/6]; phi = 3pi/2 - 3 asin(sin(pi/6+gamma)).
inline KnownMapping known_j_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= kPi / 6))
    throw domain_error("J_gamma: gamma must lie in (0, pi/6]");
  double phi = 3 * kPi / 2 - 3 * std::asin(std::sin(kPi / 6 + gamma));
  double c3 = std::cos(phi / 3);
  return {BellParameters(-2 * phi / 3, phi, phi / 3), c3 * c3 * c3};
}

/// Marginal-free tilted-CHSH subfamily, phi in (0, pi/2); tilting parameter
/// alpha = 1/tan(phi). Scaled quantum bound is 2.
inline KnownMapping known_tilted(double phi) {
  if (!(phi > 0.0 && phi < kPi / 2))
    throw domain_error("tilted: phi must lie in (0, pi/2)");
  return {BellParameters(kPi / 2, phi, -phi), -std::sin(phi) * std::cos(phi)};
}

/// Party-symmetric two-parameter family: theta = omega - phi with
/// 2*omega - phi = 2*alpha and phi = -2*beta. Requires cos(alpha-beta) != 0.
inline KnownMapping known_symmetric(double alpha, double beta) {
  double div = std::cos(alpha - beta);
  if (std::fabs(div) < kAlgebraTol)
    throw domain_error("symmetric: cos(alpha-beta) must be nonzero");
  return {BellParameters(alpha + beta, -2 * beta, alpha - beta), div};
}

inline KnownMapping known_inequality(KnownInequality kind, double p0 = 0.0,
                                     double p1 = 0.0) {
  switch (kind) {
    case KnownInequality::CHSH: return known_chsh();
    case KnownInequality::I_delta: return known_i_delta(p0);
    case KnownInequality::J_gamma: return known_j_gamma(p0);
    case KnownInequality::Tilted: return known_tilted(p0);
    case KnownInequality::Symmetric: return known_symmetric(p0, p1);
  }
  throw domain_error("known_inequality: unknown kind");
}

/// Map the (alpha, beta, gamma) parameters of the original presentation onto
/// the family triple via theta = -alpha-gamma, phi = pi/2+alpha,
/// omega = pi/2-beta, with delta = -(alpha+beta+gamma).
inline BellParameters from_le_parameters(double alpha, double beta, double gamma) {
  double delta = -(alpha + beta + gamma);
  double sines[4] = {std::sin(alpha), std::sin(beta), std::sin(gamma),
                     std::sin(delta)};
  double k = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (std::fabs(sines[i]) < kAlgebraTol)
      throw degenerate_error("from_le_parameters: sine denominator vanishes");
    k += std::cos(i == 0 ? alpha : i == 1 ? beta : i == 2 ? gamma : delta) / sines[i];
  }
  if (!std::isfinite(k) || std::fabs(k) < kAlgebraTol)
    throw degenerate_error("from_le_parameters: K = sum of cotangents is zero");
  return BellParameters(-alpha - gamma, kPi / 2 + alpha, kPi / 2 - beta);
}

}  // namespace bellkit

#endif  // BELLKIT_BELL_FAMILY_HPP
