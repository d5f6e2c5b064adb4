#ifndef BELLKIT_SWEEP_HPP
#define BELLKIT_SWEEP_HPP

#include "bellkit/strategy.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bellkit {

/// Figure 1: axes (theta, phi) over [0, pi]^2 with omega = pi; the rate
/// column is the global randomness rate under the cosine-product condition.
/// Figure 2: axes (theta, omega) over [0, pi] x [0, 2pi] with phi = pi/2; the
/// rate column is the key rate under the arcsin (four-correlator) criterion.
struct SweepSpec {
  int figure = 1;
  int resolution = 241;  // grid points per axis, >= 2
};

struct SweepCell {
  double axis1 = 0.0;
  double axis2 = 0.0;
  double chsh_max = 0.0;
  bool certified = false;
  double rate = 0.0;  // meaningful only when certified
};

struct Landmark {
  std::string name;
  double axis1 = 0.0, axis2 = 0.0;  // nominal location
  double expected = 0.0;
  double actual = 0.0;  // value at the grid point nearest the location
  bool on_grid = false;  // location coincides with a grid node
  bool pass = false;     // |actual - expected| <= 1e-3; asserted only on-grid
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // row-major, axis1 outer
  double grid_max = 0.0;
  std::size_t argmax = 0;
  std::vector<Landmark> landmarks;
  bool landmarks_pass = false;  // every on-grid landmark within tolerance
};

SweepResult sweep_grid(const SweepSpec& spec);

/// CSV with header axis1,axis2,chsh_max,certified,rate; the rate field is
/// empty when the cell is not certified.
void write_sweep_csv(const SweepResult& result, std::ostream& os);

}  // namespace bellkit

#endif  // BELLKIT_SWEEP_HPP
