#include "bellkit/protocol.hpp"

#include "bellkit/rates.hpp"

#include <doctest.h>

using namespace bellkit;

namespace {

const BellParameters kKeyPoint(kPi / 3, kPi / 2 - 0.01, 5 * kPi / 6);

ProtocolConfig config(std::uint64_t rounds, double q, std::uint64_t seed,
                      const BellParameters& p = kKeyPoint) {
  ProtocolConfig cfg;
  cfg.rounds = rounds;
  cfg.test_probability = q;
  cfg.params = p;
  cfg.seed = seed;
  return cfg;
}

Behaviour deterministic_behaviour() {
  // a0 = a1 = b0 = b1 = +1: every correlator equals 1
  return behaviour_from_correlators(Correlators(1, 1, 1, 1));
}

}  // namespace

TEST_CASE("estimate consistency on exact tallies") {
  BellFunctional f = make_functional(kKeyPoint);
  // dyadic correlators make the cell probabilities exact in units of n/8
  Behaviour b = behaviour_from_correlators(Correlators(1, 0, 0.5, -0.5));
  TestTallies tallies{};
  const std::uint64_t n = 8000;
  for (int xy = 0; xy < 4; ++xy)
    for (int ab = 0; ab < 4; ++ab)
      tallies[xy][ab] = static_cast<std::uint64_t>(
          std::llround(b.dist[xy](ab >> 1, ab & 1) * static_cast<double>(n)));
  BellEstimate est = estimate_bell(tallies, f);
  CHECK(est.estimate == doctest::Approx(evaluate(f, b.correlators)).epsilon(1e-15));

  // all mass on agreeing outcomes: every correlator is 1
  TestTallies agree{};
  for (int xy = 0; xy < 4; ++xy) {
    agree[xy][0] = 10;
    agree[xy][3] = 14;
  }
  BellEstimate unit = estimate_bell(agree, f);
  CHECK(unit.estimate == doctest::Approx(f.coeffs.sum()).epsilon(1e-14));
  CHECK(unit.stderr == 0.0);

  TestTallies empty{};
  CHECK_THROWS_AS(estimate_bell(empty, f), insufficient_statistics_error);
}

TEST_CASE("simulation is bit-reproducible") {
  Behaviour honest = target_behaviour(kKeyPoint);
  ProtocolReport a = simulate(honest, config(20000, 0.1, 99));
  ProtocolReport b = simulate(honest, config(20000, 0.1, 99));
  CHECK(a.bell_estimate == b.bell_estimate);
  CHECK(a.bell_stderr == b.bell_stderr);
  CHECK(a.generation_rounds == b.generation_rounds);
  CHECK(a.test_counts == b.test_counts);
  CHECK(a.raw_key_agreement == b.raw_key_agreement);

  ProtocolReport c = simulate(honest, config(20000, 0.1, 100));
  CHECK(a.bell_estimate != c.bell_estimate);
}

TEST_CASE("input validation") {
  Behaviour honest = target_behaviour(kKeyPoint);
  CHECK_THROWS_AS(simulate(honest, config(0, 0.1, 1)), domain_error);
  CHECK_THROWS_AS(simulate(honest, config(100, 0.0, 1)), domain_error);
  CHECK_THROWS_AS(simulate(honest, config(100, 1.0, 1)), domain_error);
}

TEST_CASE("honest runs keep the estimate near the quantum bound") {
  Behaviour honest = target_behaviour(kKeyPoint);
  const double eta = quantum_bound(kKeyPoint);
  int within = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ProtocolReport rep = simulate(honest, config(200000, 0.1, seed));
    CHECK_FALSE(rep.aborted);
    CHECK(rep.projected_key_bits > 0.0);
    if (std::fabs(rep.bell_estimate - eta) <= 5 * rep.bell_stderr) ++within;
  }
  CHECK(within >= 19);
}

TEST_CASE("estimates are unbiased") {
  Behaviour honest = target_behaviour(kKeyPoint);
  const double eta = quantum_bound(kKeyPoint);
  double sum = 0.0, se = 0.0;
  const int n_seeds = 1000;
  for (int seed = 1; seed <= n_seeds; ++seed) {
    ProtocolReport rep = simulate(honest, config(20000, 0.2, 1000 + seed));
    sum += rep.bell_estimate;
    se = rep.bell_stderr;
  }
  double mean = sum / n_seeds;
  CHECK(std::fabs(mean - eta) <= 3.0 * se / std::sqrt(static_cast<double>(n_seeds)));
}

TEST_CASE("stderr shrinks like one over the square root of the test rounds") {
  // a point whose correlators stay away from +-1, where the plug-in variance
  // estimate is smooth at these sample sizes
  BellParameters p(kPi / 3, kPi / 3, kPi);
  Behaviour honest = target_behaviour(p);
  ProtocolReport small = simulate(honest, config(50000, 0.1, 42, p));
  ProtocolReport large = simulate(honest, config(200000, 0.1, 42, p));
  double ratio = small.bell_stderr / large.bell_stderr;
  CHECK(ratio > 2.0 * 0.8);
  CHECK(ratio < 2.0 * 1.2);

  ProtocolReport sixteen = simulate(honest, config(800000, 0.1, 42, p));
  double ratio16 = small.bell_stderr / sixteen.bell_stderr;
  CHECK(ratio16 > 4.0 * 0.8);
  CHECK(ratio16 < 4.0 * 1.2);
}

TEST_CASE("deterministic local devices abort under the default threshold") {
  Behaviour local = deterministic_behaviour();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ProtocolReport rep = simulate(local, config(200000, 0.1, seed));
    CHECK(rep.aborted);
    CHECK(rep.projected_key_bits == 0.0);
  }
}

TEST_CASE("raw key agreement") {
  Behaviour perfect = target_behaviour(BellParameters(kPi / 4, kPi / 2, kPi));
  ProtocolReport rep = simulate(
      perfect, config(50000, 0.1, 7, BellParameters(kPi / 4, kPi / 2 - 1e-6, kPi)));
  CHECK(raw_key_agreement(rep) == 1.0);  // phi = pi/2: perfectly correlated

  Behaviour skew = target_behaviour(BellParameters(kPi / 3, kPi / 6, 5 * kPi / 6));
  ProtocolReport srep = simulate(
      skew, config(400000, 0.1, 7, BellParameters(kPi / 3, kPi / 6, 5 * kPi / 6)));
  CHECK(raw_key_agreement(srep) == doctest::Approx(0.75).epsilon(4e-3));

  // expectation (1 + sin phi)/2 at the near-perfect point
  ProtocolReport nrep = simulate(target_behaviour(kKeyPoint), config(400000, 0.1, 9));
  double expectation = (1 + std::sin(kKeyPoint.phi)) / 2;
  double sigma = std::sqrt(expectation * (1 - expectation) /
                           static_cast<double>(nrep.generation_rounds));
  CHECK(std::fabs(raw_key_agreement(nrep) - expectation) <= 5 * sigma + 1e-9);

  ProtocolReport none{};
  CHECK_THROWS_AS(raw_key_agreement(none), insufficient_statistics_error);
}

TEST_CASE("report invariants") {
  Behaviour honest = target_behaviour(kKeyPoint);
  ProtocolReport rep = simulate(honest, config(50000, 0.3, 21));
  std::uint64_t tally_sum = 0;
  for (const auto& row : rep.test_counts)
    for (std::uint64_t v : row) tally_sum += v;
  CHECK(tally_sum == rep.test_rounds);
  CHECK(rep.test_rounds + rep.generation_rounds == 50000);
  double coeff_sum = make_functional(kKeyPoint).coeffs.cwiseAbs().sum();
  CHECK(std::fabs(rep.bell_estimate) <= coeff_sum + 1e-12);
}

TEST_CASE("projected key accounting") {
  Behaviour honest = target_behaviour(kKeyPoint);
  ProtocolConfig cfg = config(100000, 0.1, 5);
  ProtocolReport rep = simulate(honest, cfg);
  REQUIRE_FALSE(rep.aborted);
  CHECK(rep.projected_key_bits ==
        doctest::Approx(0.9 * 100000 * key_rate_at_selftest(kKeyPoint)).epsilon(1e-12));

  // uncertified parameters project zero key even without an abort
  BellParameters uncertified(kPi / 3, kPi / 2, 5 * kPi / 6);
  Behaviour b = target_behaviour(uncertified);
  ProtocolConfig ucfg = config(50000, 0.1, 5, uncertified);
  ucfg.abort_threshold = -10.0;  // never abort
  ProtocolReport urep = simulate(b, ucfg);
  CHECK_FALSE(urep.aborted);
  CHECK(urep.projected_key_bits == 0.0);
}
