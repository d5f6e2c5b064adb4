#ifndef BELLKIT_REDUCTION_HPP
#define BELLKIT_REDUCTION_HPP

#include "bellkit/strategy.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bellkit {

/// Strategy in the reduced search space: a Bell-diagonal two-qubit state with
/// ZX-plane observables, Alice's first angle gauge-fixed to 0.
struct ReducedStrategy {
  Eigen::Vector4d lambdas = Eigen::Vector4d::Zero();  // weights on Phi_0..Phi_3
  double a1 = 0.0;
  double b0 = 0.0;
  double b1 = 0.0;
};

struct SearchConfig {
  int grid_resolution = 32;      // coarse cells per angle axis
  int starts = 16;               // local refinements (top grid cells or probe starts)
  double step_floor = 1e-9;      // terminal coordinate-descent step
  std::uint64_t budget = 4000000;  // objective evaluations per maximize call
  std::uint64_t seed = 1;
};

struct MaximizeResult {
  double value = 0.0;  // signed functional value at the best strategy
  ReducedStrategy strategy;
  bool converged = false;  // every refinement reached the step floor in budget
  std::uint64_t evaluations = 0;
};

/// Closed-form value of the functional on a Bell-diagonal state with ZX
/// observables at angles (a0, a1) and (b0, b1):
///   sum_xy c_xy [ (l0 - l3) cos(a_x - b_y) + (l1 - l2) cos(a_x + b_y) ].
/// Taking a0 as a free argument keeps the full gauge orbit expressible; the
/// gauge rotation shifting all four angles fixes the value when the state is
/// Phi_0. Gated in the tests against the matrix-trace path.
double reduced_value(const Coefficients& c, const Eigen::Vector4d& lambdas,
                     double a0, double a1, double b0, double b1);

/// Tr[rho' B] through explicit 4x4 matrices; validates the simplex weights.
double reduced_bell_value(const BellParameters& params, const ReducedStrategy& rs);

/// Multi-start search maximizing |reduced value|: coarse grid over angles at
/// the simplex corners, then coordinate descent over (lambdas, angles) with
/// halving steps from the best cells.
MaximizeResult maximize_reduced(const BellParameters& params, const SearchConfig& cfg);

struct UniquenessCluster {
  int bell_state = 0;   // modal Bell state of the converged runs in the cluster
  int reflection = 0;   // t in {0,1}: the sigma_Z (x) sigma_Z angle reflection
  int sign_shift = 0;   // k in {0,1}: pi shift of Bob's angles (the -eta extremum)
  int count = 0;
  double a1 = 0.0, b0 = 0.0, b1 = 0.0;  // representative angles
  double value = 0.0;
};

struct UniquenessReport {
  BellParameters params;
  double eta_abs = 0.0;
  double local_bound = 0.0;
  double tol = 0.0;
  int starts = 0;
  int qualifying_runs = 0;  // converged within tol of |eta_Q| and above the local bound
  std::vector<UniquenessCluster> clusters;
  bool passed = false;
  std::string violation;  // empty when passed
};

/// Probe the uniqueness claim: from >= 64 independent starts, every run that
/// reaches |eta_Q| (within tol, and strictly above the local bound) must be a
/// point mass on a single Bell state with angles matching
/// (theta, pi/2 - phi, pi/2 - omega) up to the symmetry group (reflection,
/// Bob-side pi shift, Bell-state frame change). Throws not_certified_error
/// when the condition on the cosine product fails, and degenerate_error when
/// the local-quantum gap (or the gap to the opposite Bell-diagonal branch) is
/// too small for the probe to resolve at this tol.
UniquenessReport uniqueness_probe(const BellParameters& params, double tol,
                                  const SearchConfig& cfg = SearchConfig{});

}  // namespace bellkit

#endif  // BELLKIT_REDUCTION_HPP
