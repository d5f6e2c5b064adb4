#ifndef BELLKIT_PROTOCOL_HPP
#define BELLKIT_PROTOCOL_HPP

#include "bellkit/strategy.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace bellkit {

struct ProtocolConfig {
  std::uint64_t rounds = 0;
  double test_probability = 0.1;  // q in (0,1)
  BellParameters params;
  /// Abort threshold in sign-canonicalized Bell-value units (the violation
  /// sign(eta_Q) * <B>, whose honest value is +|eta_Q|). Defaults to
  /// |eta_Q| - 5 * predicted standard error.
  std::optional<double> abort_threshold;
  std::uint64_t seed = 1;
};

/// counts[2x+y][2a+b] over the test rounds.
using TestTallies = std::array<std::array<std::uint64_t, 4>, 4>;

struct BellEstimate {
  double estimate = 0.0;  // signed, estimates <B>
  double stderr = 0.0;    // binomial plug-in propagated through the form
};

struct ProtocolReport {
  TestTallies test_counts{};
  std::uint64_t test_rounds = 0;
  std::uint64_t generation_rounds = 0;
  std::uint64_t key_agreement_count = 0;  // generation rounds with a == b
  double bell_estimate = 0.0;             // signed, comparable to eta_Q
  double bell_stderr = 0.0;
  double bell_violation = 0.0;  // sign(eta_Q) * bell_estimate
  double threshold = 0.0;       // canonical units, as used for the abort rule
  bool aborted = false;
  double raw_key_agreement = 0.0;
  double projected_key_bits = 0.0;  // asymptotic projection, not a finite-key claim
};

/// Empirical correlator per input pair from the tallies, dotted with the
/// functional; stderr by binomial plug-in. Every input pair needs at least
/// one count.
BellEstimate estimate_bell(const TestTallies& tallies, const BellFunctional& f);

/// |eta_Q| - 5 * stderr predicted for the honest behaviour at the configured
/// rounds and test probability.
double default_abort_threshold(const BellParameters& params, std::uint64_t rounds,
                               double test_probability);

/// Spot-checking simulation against a fixed i.i.d. behaviour: test rounds
/// draw (x,y) uniformly and sample (a,b) from p(ab|xy); generation rounds
/// sample from p(ab|00). Bit-reproducible for a fixed seed.
ProtocolReport simulate(const Behaviour& behaviour, const ProtocolConfig& cfg);

/// Fraction of generation rounds with a == b; expectation (1 + sin phi)/2
/// for the honest behaviour.
double raw_key_agreement(const ProtocolReport& report);

}  // namespace bellkit

#endif  // BELLKIT_PROTOCOL_HPP
