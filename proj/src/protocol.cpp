#include "bellkit/protocol.hpp"

#include "bellkit/rates.hpp"

#include <cmath>

namespace bellkit {

BellEstimate estimate_bell(const TestTallies& tallies, const BellFunctional& f) {
  BellEstimate out;
  double var = 0.0;
  for (int xy = 0; xy < 4; ++xy) {
    std::uint64_t n = 0;
    for (int ab = 0; ab < 4; ++ab) n += tallies[xy][ab];
    if (n == 0)
      throw insufficient_statistics_error(
          "estimate_bell: no test counts for an input pair");
    double same = static_cast<double>(tallies[xy][0] + tallies[xy][3]);
    double corr = (2.0 * same - static_cast<double>(n)) / static_cast<double>(n);
    out.estimate += f.coeffs(xy) * corr;
    var += f.coeffs(xy) * f.coeffs(xy) * (1.0 - corr * corr) /
           static_cast<double>(n);
  }
  out.stderr = std::sqrt(var);
  return out;
}

double default_abort_threshold(const BellParameters& params, std::uint64_t rounds,
                               double test_probability) {
  const Coefficients c = make_functional(params).coeffs;
  const Correlators corr = correlators_closed_form(params);
  const double n_pair = test_probability * static_cast<double>(rounds) / 4.0;
  double var = 0.0;
  for (int xy = 0; xy < 4; ++xy)
    var += c(xy) * c(xy) * (1.0 - corr(xy) * corr(xy)) / n_pair;
  return std::fabs(quantum_bound(params)) - 5.0 * std::sqrt(var);
}

ProtocolReport simulate(const Behaviour& behaviour, const ProtocolConfig& cfg) {
  if (cfg.rounds == 0) throw domain_error("simulate: rounds must be >= 1");
  if (!(cfg.test_probability > 0.0 && cfg.test_probability < 1.0))
    throw domain_error("simulate: test probability must lie in (0, 1)");

  // Cumulative outcome distributions per input pair, generation pair first.
  double cum[4][4];
  for (int xy = 0; xy < 4; ++xy) {
    double acc = 0.0;
    const Eigen::Matrix2d& p = behaviour.dist[xy];
    for (int ab = 0; ab < 4; ++ab) {
      acc += p(ab >> 1, ab & 1);
      cum[xy][ab] = acc;
    }
    cum[xy][3] = 1.0;  // guard against rounding in the tail
  }
  auto draw_outcome = [&](int xy, double u) {
    int ab = 0;
    while (ab < 3 && u >= cum[xy][ab]) ++ab;
    return ab;
  };

  ProtocolReport rep{};
  Rng g(cfg.seed);
  for (std::uint64_t r = 0; r < cfg.rounds; ++r) {
    if (uniform_unit(g) < cfg.test_probability) {
      int xy = static_cast<int>(g() >> 62);  // two uniform bits
      int ab = draw_outcome(xy, uniform_unit(g));
      rep.test_counts[xy][ab]++;
      rep.test_rounds++;
    } else {
      int ab = draw_outcome(0, uniform_unit(g));
      rep.generation_rounds++;
      if ((ab >> 1) == (ab & 1)) rep.key_agreement_count++;
    }
  }

  const BellFunctional f = make_functional(cfg.params);
  BellEstimate est = estimate_bell(rep.test_counts, f);
  const double sgn = quantum_bound(cfg.params) < 0 ? -1.0 : 1.0;
  rep.bell_estimate = est.estimate;
  rep.bell_stderr = est.stderr;
  rep.bell_violation = sgn * est.estimate;
  rep.threshold = cfg.abort_threshold.value_or(
      default_abort_threshold(cfg.params, cfg.rounds, cfg.test_probability));
  rep.aborted = rep.bell_violation < rep.threshold;
  rep.raw_key_agreement = rep.generation_rounds > 0 ? raw_key_agreement(rep) : 0.0;

  if (!rep.aborted && selftest_condition(cfg.params))
    rep.projected_key_bits = (1.0 - cfg.test_probability) *
                             static_cast<double>(cfg.rounds) *
                             key_rate_at_selftest(cfg.params);
  return rep;
}

double raw_key_agreement(const ProtocolReport& report) {
  if (report.generation_rounds == 0)
    throw insufficient_statistics_error("raw_key_agreement: no generation rounds");
  return static_cast<double>(report.key_agreement_count) /
         static_cast<double>(report.generation_rounds);
}

}  // namespace bellkit
