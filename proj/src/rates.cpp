#include "bellkit/rates.hpp"

#include <cstdio>
#include <ostream>

namespace bellkit {

RateReport make_rate_report(const BellParameters& p) {
  RateReport rep;
  rep.params = p;
  rep.reconciliation = reconciliation_entropy(p);
  rep.chsh_max = chsh_scores(correlators_closed_form(p)).max;
  if (selftest_condition(p)) {
    rep.selftested = true;
    rep.key_rate = key_rate_at_selftest(p);
    rep.global_rate = global_rate_at_selftest(p);
  } else if (wang_selftest_check(correlators_closed_form(p))) {
    rep.selftested = true;
    rep.key_rate = key_rate_from_correlators(p);
    rep.global_rate = global_rate_from_correlators(p);
  }
  return rep;
}

double chsh_line_value(ChshLine mode, double theta, double eps_prime) {
  if (mode == ChshLine::key_line) {
    const double omega = 5 * kPi / 6;
    return std::cos(eps_prime) + std::sin(omega) + std::cos(theta - eps_prime) -
           std::sin(theta + omega);
  }
  return std::cos(eps_prime) + std::cos(theta - eps_prime) + std::sin(theta);
}

BellParameters find_params_for_chsh(double target_s, ChshLine mode, double eps_prime) {
  const double theta_hi = mode == ChshLine::key_line ? kPi / 3 : kPi / 4;
  const double omega = mode == ChshLine::key_line ? 5 * kPi / 6 : kPi;
  if (!(eps_prime > 0.0 && eps_prime < theta_hi))
    throw domain_error("find_params_for_chsh: eps_prime must lie in (0, theta_hi)");

  auto value = [&](double th) { return chsh_line_value(mode, th, eps_prime); };
  const double lo_val = value(eps_prime);  // open endpoint
  const double hi_val = value(theta_hi);

  // The interval argument rests on monotonicity in theta; check it on a
  // coarse scan before bisecting.
  double prev = lo_val;
  for (int k = 1; k <= 64; ++k) {
    double v = value(eps_prime + (theta_hi - eps_prime) * k / 64.0);
    if (v < prev - 1e-12)
      throw degenerate_error("find_params_for_chsh: line is not monotone");
    prev = v;
  }

  if (!(target_s > lo_val && target_s <= hi_val + 1e-15))
    throw range_error("find_params_for_chsh: target outside achievable interval",
                      lo_val, hi_val);

  double lo = eps_prime, hi = theta_hi;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (value(mid) < target_s)
      lo = mid;
    else
      hi = mid;
  }
  return BellParameters(hi, kPi / 2 - eps_prime, omega);
}

namespace {

constexpr double kRateTol = 1e-9;
constexpr double kEndpointTol = 1e-3;

bool in_range(double v, double lo_excl, double hi, double tol) {
  return v > lo_excl && v <= hi + tol;
}

// Solve chsh(t) = s on the prop-2 diagonal (theta = phi = t, omega = pi)
// where the value 2 sin t + sin 2t decreases on [pi/3, pi/2).
double prop2_theta_for(double s) {
  double lo = kPi / 3, hi = kPi / 2;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = 2 * std::sin(mid) + std::sin(2 * mid);
    (v >= s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PropositionRow prop2_row(double t) {
  PropositionRow row;
  row.params = BellParameters(t, t, kPi);
  row.certified = selftest_condition(row.params);
  row.chsh_max = chsh_scores(correlators_closed_form(row.params)).max;
  if (row.certified) {
    row.key_rate = key_rate_at_selftest(row.params);
    row.global_rate = global_rate_at_selftest(row.params);
  }
  row.pass = row.certified && std::fabs(row.global_rate - 2.0) <= kRateTol &&
             in_range(row.chsh_max, 2.0, 3 * std::sqrt(3.0) / 2, kRateTol);
  return row;
}

PropositionRow line_row(double s, ChshLine mode, double eps_prime, bool want_global) {
  PropositionRow row;
  row.params = find_params_for_chsh(s, mode, eps_prime);
  row.certified = selftest_condition(row.params);
  row.chsh_max = chsh_scores(correlators_closed_form(row.params)).max;
  const double s_max = mode == ChshLine::key_line ? 2.5 : 1 + std::sqrt(2.0);
  if (row.certified) {
    row.key_rate = key_rate_at_selftest(row.params);
    row.global_rate = want_global ? global_rate_at_selftest(row.params) : 0.0;
  }
  double eps = reconciliation_entropy(row.params);
  row.pass = row.certified &&
             std::fabs(row.key_rate - (1.0 - eps)) <= kRateTol &&
             std::fabs(row.chsh_max - s) <= 1e-8 &&
             in_range(row.chsh_max, 2.0, s_max, kRateTol) &&
             (!want_global || std::fabs(row.global_rate - 2.0) <= kRateTol);
  return row;
}

PropositionRow correlator_row(double theta, double omega, double s_max) {
  PropositionRow row;
  row.params = BellParameters(theta, kPi / 2, omega);
  row.certified = wang_selftest_check(correlators_closed_form(row.params));
  row.chsh_max = chsh_scores(correlators_closed_form(row.params)).max;
  if (row.certified) {
    row.key_rate = key_rate_from_correlators(row.params);
    row.global_rate = global_rate_from_correlators(row.params);
  }
  row.pass = row.certified && std::fabs(row.key_rate - 1.0) <= kRateTol &&
             in_range(row.chsh_max, 2.0, s_max, kRateTol);
  return row;
}

}  // namespace

PropositionTable proposition_report(int prop, int grid) {
  if (grid < 2) throw domain_error("proposition_report: grid must be >= 2");
  PropositionTable table;
  table.prop = prop;

  // Rows are independent; they are computed in parallel and emitted in grid
  // order.
  switch (prop) {
    case 2: {
      // theta = phi = t, omega = pi; t from pi/3 (CHSH max 3sqrt3/2) towards
      // pi/2 (CHSH -> 2), stopping where the value reaches 2 + 1e-3.
      double t_hi = prop2_theta_for(2.0 + kEndpointTol);
      table.rows.resize(grid);
      parallel_for(static_cast<std::size_t>(grid), [&](std::size_t k) {
        table.rows[k] = prop2_row(kPi / 3 + (t_hi - kPi / 3) *
                                                static_cast<double>(k) / (grid - 1));
      });
      break;
    }
    case 3:
    case 5: {
      const ChshLine mode = prop == 3 ? ChshLine::key_line : ChshLine::keyrand_line;
      const double s_max = prop == 3 ? 2.5 : 1 + std::sqrt(2.0);
      const double eps_small = 1e-3;
      table.rows.resize(grid);
      parallel_for(static_cast<std::size_t>(grid), [&](std::size_t k) {
        double s = (2.0 + kEndpointTol) +
                   (s_max - 2.0 - kEndpointTol) * static_cast<double>(k) / (grid - 1);
        table.rows[k] = line_row(s, mode, eps_small, prop == 5);
      });
      // Endpoint of the admissible reconciliation range: eps' = pi/3 gives
      // eps = 2 - (3/4)log2(3) on the key line; eps' = pi/4 gives
      // eps = H_bin((2+sqrt2)/4) on the key+randomness line. The corner
      // itself is an exact limit point where the cosine product vanishes, so
      // its row checks the limiting values by formula and carries
      // certified = false.
      const BellParameters corner = prop == 3
                                        ? BellParameters(kPi / 3, kPi / 6, 5 * kPi / 6)
                                        : BellParameters(kPi / 4, kPi / 4, kPi);
      const double expected_eps =
          prop == 3 ? 2.0 - 0.75 * std::log2(3.0)
                    : binary_entropy((2.0 + std::sqrt(2.0)) / 4.0);
      PropositionRow end;
      end.params = corner;
      end.certified = selftest_condition(corner);  // false: degenerate limit
      double eps = reconciliation_entropy(corner);
      end.key_rate = 1.0 - eps;
      end.global_rate =
          prop == 5 ? joint_entropy(target_behaviour(corner).distribution(0, 1)) : 0.0;
      end.chsh_max = chsh_scores(correlators_closed_form(corner)).max;
      end.pass = std::fabs(eps - expected_eps) <= kRateTol &&
                 std::fabs(end.chsh_max - s_max) <= 1e-8 &&
                 (prop != 5 || std::fabs(end.global_rate - 2.0) <= kRateTol);
      table.rows.push_back(end);
      break;
    }
    case 4: {
      table.rows.resize(grid);
      parallel_for(static_cast<std::size_t>(grid), [&](std::size_t k) {
        table.rows[k] = correlator_row(
            kPi / 3 * static_cast<double>(k + 1) / grid, 5 * kPi / 6, 2.5);
      });
      break;
    }
    case 6: {
      table.rows.resize(grid);
      parallel_for(static_cast<std::size_t>(grid), [&](std::size_t k) {
        PropositionRow row = correlator_row(
            kPi / 4 * static_cast<double>(k + 1) / grid, kPi, 1 + std::sqrt(2.0));
        row.pass = row.pass && std::fabs(row.global_rate - 2.0) <= kRateTol;
        table.rows[k] = row;
      });
      break;
    }
    default:
      throw domain_error("proposition_report: prop must be one of 2..6");
  }

  table.s_lo = table.rows.front().chsh_max;
  table.s_hi = table.s_lo;
  table.passed = true;
  for (const PropositionRow& row : table.rows) {
    table.s_lo = std::min(table.s_lo, row.chsh_max);
    table.s_hi = std::max(table.s_hi, row.chsh_max);
    table.passed = table.passed && row.pass;
  }
  return table;
}

void write_proposition_csv(const PropositionTable& table, std::ostream& os) {
  os << "theta,phi,omega,condition,key_rate,global_rate,chsh_max,pass\n";
  char buf[256];
  for (const PropositionRow& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%d\n",
                  row.params.theta, row.params.phi, row.params.omega,
                  row.certified ? 1 : 0, row.key_rate, row.global_rate,
                  row.chsh_max, row.pass ? 1 : 0);
    os << buf;
  }
}

}  // namespace bellkit
