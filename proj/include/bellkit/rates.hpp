#ifndef BELLKIT_RATES_HPP
#define BELLKIT_RATES_HPP

#include "bellkit/boundary.hpp"
#include "bellkit/strategy.hpp"

#include <iosfwd>
#include <vector>

namespace bellkit {

/// H(A|X=0,Y=0,B) of the target behaviour: H_bin((1 + sin phi)/2).
inline double reconciliation_entropy(const BellParameters& p) {
  return binary_entropy((1.0 + std::sin(p.phi)) / 2.0);
}

/// Key rate 1 - reconciliation, certified by the Bell functional: the maximal
/// violation self-tests a pure maximally entangled state, so H(A|X=0,E) = 1.
inline double key_rate_at_selftest(const BellParameters& p) {
  if (!selftest_condition(p))
    throw not_certified_error(
        "key_rate_at_selftest: cosine-product condition fails, the Bell "
        "expression does not certify the entropy");
  return 1.0 - reconciliation_entropy(p);
}

/// Key rate certified by constraining all four correlators (the arcsin
/// self-test criterion); computed through the (0,0) joint distribution.
inline double key_rate_from_correlators(const BellParameters& p) {
  if (!wang_selftest_check(correlators_closed_form(p)))
    throw not_certified_error(
        "key_rate_from_correlators: arcsin self-test criterion fails");
  Behaviour b = target_behaviour(p);
  return 1.0 - conditional_entropy(b.distribution(0, 0));
}

/// Global randomness rate H(AB) of the (x,y) = (0,1) target distribution,
/// certified by the Bell functional; equals 2 exactly iff sin(omega) = 0.
inline double global_rate_at_selftest(const BellParameters& p) {
  if (!selftest_condition(p))
    throw not_certified_error(
        "global_rate_at_selftest: cosine-product condition fails");
  Behaviour b = target_behaviour(p);
  return joint_entropy(b.distribution(0, 1));
}

/// Same quantity under the four-correlator (arcsin criterion) gate.
inline double global_rate_from_correlators(const BellParameters& p) {
  if (!wang_selftest_check(correlators_closed_form(p)))
    throw not_certified_error(
        "global_rate_from_correlators: arcsin self-test criterion fails");
  Behaviour b = target_behaviour(p);
  return joint_entropy(b.distribution(0, 1));
}

struct RateReport {
  BellParameters params;
  double key_rate = 0.0;
  double global_rate = 0.0;
  double chsh_max = 0.0;
  double reconciliation = 0.0;
  bool selftested = false;
};

/// Rates for the target behaviour at `p`, gated on the Bell-functional
/// condition first and the correlator criterion second. When neither gate
/// passes the rates are zero with selftested = false.
RateReport make_rate_report(const BellParameters& p);

enum class ChshLine {
  key_line,      // omega = 5pi/6, theta in (eps', pi/3]
  keyrand_line,  // omega = pi,    theta in (eps', pi/4]
};

/// CHSH value of the target strategy along the line, as a function of theta
/// with phi = pi/2 - eps_prime.
double chsh_line_value(ChshLine mode, double theta, double eps_prime);

/// Bisection for the theta achieving chsh_line_value == target_s; returns
/// (theta*, pi/2 - eps_prime, omega_mode). Throws range_error (carrying the
/// achievable endpoints) when target_s is not reachable for this eps_prime.
BellParameters find_params_for_chsh(double target_s, ChshLine mode, double eps_prime);

struct PropositionRow {
  BellParameters params;
  bool certified = false;  // condition on the cosine product, or arcsin criterion
  double key_rate = 0.0;
  double global_rate = 0.0;
  double chsh_max = 0.0;
  bool pass = false;
};

struct PropositionTable {
  int prop = 0;
  std::vector<PropositionRow> rows;
  double s_lo = 0.0;  // CHSH range covered by the sweep
  double s_hi = 0.0;
  bool passed = false;
};

/// Sweep the parameter curve of proposition 2..6 at the given resolution and
/// check every row against the proposition's claimed rates and CHSH range.
PropositionTable proposition_report(int prop, int grid);

/// CSV with header theta,phi,omega,condition,key_rate,global_rate,chsh_max,pass.
void write_proposition_csv(const PropositionTable& table, std::ostream& os);

}  // namespace bellkit

#endif  // BELLKIT_RATES_HPP
