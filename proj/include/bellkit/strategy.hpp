#ifndef BELLKIT_STRATEGY_HPP
#define BELLKIT_STRATEGY_HPP

#include "bellkit/bell_family.hpp"

#include <array>
#include <limits>

namespace bellkit {

/// The two-qubit strategy achieving the quantum bound: state (|00>+i|11>)/sqrt(2)
/// with XY-plane observables at angles a0=0, a1=theta for Alice and b0=phi,
/// b1=omega for Bob.
struct TargetStrategy {
  Vector4 state;
  std::array<double, 2> alice_angles;  // {0, theta}
  std::array<double, 2> bob_angles;    // {phi, omega}

  Matrix2 alice_observable(int x) const {
    return planar_observable(Plane::XY, alice_angles.at(x));
  }
  Matrix2 bob_observable(int y) const {
    return planar_observable(Plane::XY, bob_angles.at(y));
  }
};

inline TargetStrategy target_strategy(const BellParameters& p) {
  return {target_state(), {0.0, p.theta}, {p.phi, p.omega}};
}

/// Correlator 4-vector of the target strategy in closed form:
/// (sin f, sin w, sin(t+f), sin(t+w)), i.e. <A_x B_y> = sin(a_x + b_y).
/// Gated in the test suite against the Born-rule path.
inline Correlators correlators_closed_form(const BellParameters& p) {
  Correlators c;
  c << std::sin(p.phi), std::sin(p.omega), std::sin(p.theta + p.phi),
      std::sin(p.theta + p.omega);
  return c;
}

/// Correlator 4-vector evaluated through the 4x4 Born rule.
inline Correlators correlators_born(const TargetStrategy& s) {
  Correlators c;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      c(2 * x + y) =
          born_correlator(s.state, s.alice_observable(x), s.bob_observable(y));
  return c;
}

/// Joint conditional distributions for all four input pairs, with uniform
/// marginals (the family has no marginal terms).
struct Behaviour {
  std::array<Eigen::Matrix2d, 4> dist;  // index 2x+y; entries p(ab|xy)
  Correlators correlators;

  JointDistribution distribution(int x, int y) const {
    return JointDistribution(dist.at(2 * x + y));
  }
};

/// Uniform-marginal reconstruction p(ab|xy) = (1 + (-1)^(a+b) c_xy)/4.
inline Behaviour behaviour_from_correlators(const Correlators& c) {
  Behaviour b;
  b.correlators = c;
  for (int i = 0; i < 4; ++i) {
    double cx = c(i);
    if (std::fabs(cx) > 1.0 + kAlgebraTol)
      throw domain_error("behaviour_from_correlators: correlator outside [-1,1]");
    cx = std::min(1.0, std::max(-1.0, cx));
    Eigen::Matrix2d p;
    p << (1 + cx) / 4, (1 - cx) / 4, (1 - cx) / 4, (1 + cx) / 4;
    b.dist[i] = p;
  }
  return b;
}

inline Behaviour target_behaviour(const BellParameters& p) {
  return behaviour_from_correlators(correlators_closed_form(p));
}

/// The eight CHSH-type sign patterns: every (s00,s01,s10,s11) in {+-1}^4
/// whose product is -1, listed explicitly. values[0] is the standard
/// I_CHSH = c00 + c01 + c10 - c11.
struct ChshScores {
  std::array<double, 8> values;
  double max;
};

inline constexpr std::array<std::array<int, 4>, 8> kChshSigns = {{
    {+1, +1, +1, -1},
    {+1, +1, -1, +1},
    {+1, -1, +1, +1},
    {-1, +1, +1, +1},
    {-1, -1, -1, +1},
    {-1, -1, +1, -1},
    {-1, +1, -1, -1},
    {+1, -1, -1, -1},
}};

inline ChshScores chsh_scores(const Correlators& c) {
  ChshScores out{};
  out.max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kChshSigns.size(); ++k) {
    double v = 0.0;
    for (int i = 0; i < 4; ++i) v += kChshSigns[k][i] * c(i);
    out.values[k] = v;
    out.max = std::max(out.max, v);
  }
  return out;
}

/// Dot product of functional coefficients with a correlator vector.
inline double evaluate(const BellFunctional& f, const Correlators& c) {
  return f.coeffs.dot(c);
}

}  // namespace bellkit

#endif  // BELLKIT_STRATEGY_HPP
