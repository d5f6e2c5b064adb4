#include "bellkit/sweep.hpp"

#include "bellkit/boundary.hpp"
#include "bellkit/rates.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace bellkit {

namespace {

constexpr double kLandmarkTol = 1e-3;

SweepCell figure1_cell(double theta, double phi) {
  BellParameters p(theta, phi, kPi);
  SweepCell cell;
  cell.axis1 = theta;
  cell.axis2 = phi;
  cell.chsh_max = chsh_scores(correlators_closed_form(p)).max;
  cell.certified = selftest_condition(p);
  if (cell.certified) cell.rate = global_rate_at_selftest(p);
  return cell;
}

SweepCell figure2_cell(double theta, double omega) {
  BellParameters p(theta, kPi / 2, omega);
  SweepCell cell;
  cell.axis1 = theta;
  cell.axis2 = omega;
  cell.chsh_max = chsh_scores(correlators_closed_form(p)).max;
  cell.certified = wang_selftest_check(correlators_closed_form(p));
  if (cell.certified) cell.rate = key_rate_from_correlators(p);
  return cell;
}

}  // namespace

SweepResult sweep_grid(const SweepSpec& spec) {
  if (spec.figure != 1 && spec.figure != 2)
    throw domain_error("sweep_grid: figure must be 1 or 2");
  if (spec.resolution < 2)
    throw domain_error("sweep_grid: resolution must be >= 2");

  const int n = spec.resolution;
  const double hi1 = kPi;
  const double hi2 = spec.figure == 1 ? kPi : kTwoPi;
  const double h1 = hi1 / (n - 1);
  const double h2 = hi2 / (n - 1);

  SweepResult result;
  result.spec = spec;
  result.cells.resize(static_cast<std::size_t>(n) * n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    double a1 = h1 * static_cast<double>(i);
    for (int j = 0; j < n; ++j) {
      double a2 = h2 * j;
      result.cells[i * n + j] =
          spec.figure == 1 ? figure1_cell(a1, a2) : figure2_cell(a1, a2);
    }
  });

  result.grid_max = result.cells[0].chsh_max;
  result.argmax = 0;
  for (std::size_t k = 1; k < result.cells.size(); ++k)
    if (result.cells[k].chsh_max > result.grid_max) {
      result.grid_max = result.cells[k].chsh_max;
      result.argmax = k;
    }

  auto value_near = [&](double a1, double a2) {
    long i = std::lround(a1 / h1);
    long j = std::lround(a2 / h2);
    i = std::min<long>(std::max<long>(i, 0), n - 1);
    j = std::min<long>(std::max<long>(j, 0), n - 1);
    bool on_grid = std::fabs(i * h1 - a1) < 1e-9 && std::fabs(j * h2 - a2) < 1e-9;
    return std::pair<double, bool>(result.cells[i * n + j].chsh_max, on_grid);
  };
  auto add_landmark = [&](const std::string& name, double a1, double a2,
                          double expected) {
    auto [actual, on_grid] = value_near(a1, a2);
    result.landmarks.push_back(
        {name, a1, a2, expected, actual,
         on_grid, std::fabs(actual - expected) <= kLandmarkTol});
  };

  if (spec.figure == 1) {
    add_landmark("chsh_max = 3*sqrt(3)/2 at (pi/3, pi/3)", kPi / 3, kPi / 3,
                 3 * std::sqrt(3.0) / 2);
    result.landmarks.push_back({"grid max = 3*sqrt(3)/2", kPi / 3, kPi / 3,
                                3 * std::sqrt(3.0) / 2, result.grid_max, true,
                                std::fabs(result.grid_max - 3 * std::sqrt(3.0) / 2) <=
                                    kLandmarkTol});
  } else {
    add_landmark("chsh_max = 5/2 at (pi/3, 5pi/6)", kPi / 3, 5 * kPi / 6, 2.5);
    add_landmark("chsh_max = 1+sqrt(2) at (pi/4, pi)", kPi / 4, kPi,
                 1 + std::sqrt(2.0));
    result.landmarks.push_back({"grid max = 5/2", kPi / 3, 5 * kPi / 6, 2.5,
                                result.grid_max, true,
                                std::fabs(result.grid_max - 2.5) <= kLandmarkTol});
  }

  result.landmarks_pass = true;
  for (const Landmark& l : result.landmarks)
    if (l.on_grid && !l.pass) result.landmarks_pass = false;
  return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& os) {
  os << (result.spec.figure == 1 ? "theta,phi" : "theta,omega")
     << ",chsh_max,certified,rate\n";
  char buf[192];
  for (const SweepCell& cell : result.cells) {
    if (cell.certified)
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,1,%.17g\n", cell.axis1,
                    cell.axis2, cell.chsh_max, cell.rate);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,0,\n", cell.axis1,
                    cell.axis2, cell.chsh_max);
    os << buf;
  }
}

}  // namespace bellkit
