// bellkit — command-line front end: bounds, SOS certificates, rates,
// boundary queries, protocol simulation, figure sweeps and proposition
// reproduction. See README.md and FORMATS.md for the file formats.

#include "bellkit/boundary.hpp"
#include "bellkit/io.hpp"
#include "bellkit/protocol.hpp"
#include "bellkit/rates.hpp"
#include "bellkit/reduction.hpp"
#include "bellkit/sos.hpp"
#include "bellkit/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace bellkit;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw parse_error("cannot open output path: " + path);
  return os;
}

Correlators correlators_from_fields(const std::vector<std::string>& fields) {
  if (fields.size() < 4) throw parse_error("expected four correlator fields");
  Correlators c;
  for (int k = 0; k < 4; ++k) {
    double v;
    if (!detail::parse_number(fields[k], v))
      throw parse_error("bad correlator field: " + fields[k]);
    c(k) = v;
  }
  return c;
}

std::string membership_name(Membership m) {
  switch (m) {
    case Membership::interior: return "interior";
    case Membership::boundary: return "boundary";
    case Membership::outside: return "outside";
  }
  return "?";
}

std::string saturated_list(const MembershipReport& rep) {
  std::string out;
  for (const SaturatedCondition& s : rep.saturated) {
    if (!out.empty()) out += ';';
    out += "(" + std::to_string(s.i) + "," + std::to_string(s.j) + "," +
           (s.xi > 0 ? "+" : "-") + ")";
  }
  return out;
}

// Inject key = value pairs from --config <file> as --key=value tokens, for
// keys not already present on the command line. Explicit flags win.
std::vector<std::string> with_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  std::ifstream in(config_path);
  if (!in) throw parse_error("cannot open config file: " + config_path);
  for (const auto& [key, value] : parse_config(in)) {
    bool present = false;
    for (const std::string& a : args)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) present = true;
    if (!present) args.push_back("--" + key + "=" + value);
  }
  return args;
}

int cmd_bound(const BellParameters& p, bool oracle, const SearchConfig& cfg,
              double probe_tol) {
  BellFunctional f = make_functional(p);
  std::cout << "parameters: theta=" << fmt(p.theta) << " phi=" << fmt(p.phi)
            << " omega=" << fmt(p.omega) << "\n";
  std::cout << "coefficients: c00=" << fmt(f.coeffs(0)) << " c01=" << fmt(f.coeffs(1))
            << " c10=" << fmt(f.coeffs(2)) << " c11=" << fmt(f.coeffs(3)) << "\n";
  std::cout << "local bound (formula):     " << fmt(local_bound_formula(p)) << "\n";
  std::cout << "local bound (brute force): " << fmt(local_bound_bruteforce(f)) << "\n";
  std::cout << "quantum bound (signed):    " << fmt(quantum_bound(p)) << "\n";
  std::cout << "self-test condition:       "
            << (selftest_condition(p) ? "satisfied" : "not satisfied") << "\n";
  if (!oracle) return kExitPass;

  MaximizeResult m = maximize_reduced(p, cfg);
  double eta = std::fabs(quantum_bound(p));
  std::cout << "oracle max |value|:        " << fmt(std::fabs(m.value))
            << (m.converged ? "" : "  (not converged)") << "\n";
  bool ok;
  if (selftest_condition(p)) {
    std::cout << "oracle gap to |eta_Q|:     " << fmt(std::fabs(m.value) - eta) << "\n";
    ok = m.converged && std::fabs(std::fabs(m.value) - eta) <= 1e-6;
    try {
      UniquenessReport rep = uniqueness_probe(p, probe_tol, cfg);
      std::cout << "uniqueness probe:          "
                << (rep.passed ? "passed" : "FAILED: " + rep.violation) << " ("
                << rep.qualifying_runs << "/" << rep.starts << " runs at the bound, "
                << rep.clusters.size() << " symmetry clusters)\n";
      ok = ok && rep.passed;
    } catch (const degenerate_error& e) {
      std::cout << "uniqueness probe:          skipped (" << e.what() << ")\n";
    }
  } else {
    std::cout << "oracle gap to local bound: "
              << fmt(std::fabs(m.value) - local_bound_formula(p)) << "\n";
    std::cout << "uniqueness probe:          skipped (condition fails)\n";
    ok = m.converged;
  }
  return ok ? kExitPass : kExitFail;
}

int cmd_sweep(const SweepSpec& spec, const std::string& out_path) {
  SweepResult result = sweep_grid(spec);
  std::ofstream os = open_out(out_path);
  write_sweep_csv(result, os);
  std::cout << "figure " << spec.figure << " sweep, " << spec.resolution << "x"
            << spec.resolution << " cells -> " << out_path << "\n";
  std::cout << "grid max chsh_max = " << fmt(result.grid_max) << " at ("
            << fmt(result.cells[result.argmax].axis1) << ", "
            << fmt(result.cells[result.argmax].axis2) << ")\n";
  for (const Landmark& l : result.landmarks) {
    std::cout << "landmark: " << l.name << ": value " << fmt(l.actual);
    if (l.on_grid)
      std::cout << (l.pass ? " [ok]" : " [FAIL]") << "\n";
    else
      std::cout << " [off-grid, informational]\n";
  }
  return result.landmarks_pass ? kExitPass : kExitFail;
}

int cmd_verify_sos(const BellParameters& p, int trials, std::uint64_t seed,
                   double tolerance) {
  SosCertificate cert = build_certificate(p);
  std::cout << "certificate: c0=" << fmt(cert.c0) << " c1=" << fmt(cert.c1) << "\n";
  Rng g(seed);
  double residual = verify_operator_identity(cert, trials, g);
  std::cout << "operator identity residual (" << trials
            << " trials): " << fmt(residual) << "\n";
  auto [r0, r1] = residuals_at_strategy(cert, target_strategy(p));
  std::cout << "residuals at target strategy: " << fmt(r0) << ", " << fmt(r1) << "\n";
  bool ok = residual <= tolerance && r0 <= 1e-10 && r1 <= 1e-10;
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitPass : kExitFail;
}

int cmd_rates(const BellParameters& p) {
  RateReport rep = make_rate_report(p);
  std::cout << "parameters: theta=" << fmt(p.theta) << " phi=" << fmt(p.phi)
            << " omega=" << fmt(p.omega) << "\n";
  std::string gate = "none";
  if (selftest_condition(p)) gate = "bell-functional";
  else if (wang_selftest_check(correlators_closed_form(p))) gate = "correlators";
  std::cout << "selftested: " << (rep.selftested ? "yes" : "no") << " (gate: " << gate
            << ")\n";
  std::cout << "reconciliation entropy: " << fmt(rep.reconciliation) << "\n";
  if (rep.selftested) {
    std::cout << "key rate:    " << fmt(rep.key_rate) << "\n";
    std::cout << "global rate: " << fmt(rep.global_rate) << "\n";
  }
  std::cout << "chsh max:    " << fmt(rep.chsh_max) << "\n";
  return kExitPass;
}

void classify_to_stream(const Correlators& c, std::ostream& os) {
  MembershipReport rep = masanes_membership(c);
  bool wang = wang_selftest_check(c);
  os << fmt(c(0)) << "," << fmt(c(1)) << "," << fmt(c(2)) << "," << fmt(c(3)) << ","
     << membership_name(rep.where) << "," << saturated_list(rep) << ","
     << (wang ? 1 : 0) << "\n";
}

// Shared CSV row reader for the batch modes: yields the parsed correlator
// vector per data row, skipping one leading header row if present.
template <typename Fn>
void for_each_point(const std::string& in_path, Fn&& fn) {
  std::ifstream in(in_path);
  if (!in) throw parse_error("cannot open input path: " + in_path);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (detail::trimmed(line).empty()) continue;
    auto fields = split_csv_line(line);
    double probe;
    if (first && !fields.empty() && !detail::parse_number(fields[0], probe)) {
      first = false;
      continue;
    }
    first = false;
    fn(correlators_from_fields(fields));
  }
}

int cmd_boundary(const std::optional<Correlators>& point, const std::string& in_path,
                 const std::string& out_path) {
  if (point) {
    MembershipReport rep = masanes_membership(*point);
    std::cout << "membership: " << membership_name(rep.where) << "\n";
    if (!rep.saturated.empty())
      std::cout << "saturated conditions: " << saturated_list(rep) << "\n";
    std::cout << "wang self-test: " << (wang_selftest_check(*point) ? "yes" : "no")
              << "\n";
    return kExitPass;
  }
  std::ofstream os = open_out(out_path);
  os << "c00,c01,c10,c11,membership,saturated,wang\n";
  for_each_point(in_path, [&](const Correlators& c) { classify_to_stream(c, os); });
  return kExitPass;
}

int cmd_tangent(const std::optional<Correlators>& point, const std::string& in_path,
                const std::string& out_path) {
  if (point) {
    TangentResult t = tangent_from_boundary(*point);
    std::cout << "tangent parameters: theta=" << fmt(t.params.theta)
              << " phi=" << fmt(t.params.phi) << " omega=" << fmt(t.params.omega)
              << "\n";
    std::cout << "B.c - eta_Q = " << fmt(t.check) << "\n";
    if (t.saturated_count > 1)
      std::cout << "note: " << t.saturated_count
                << " saturated conditions (degenerate point); used (" << t.used.i
                << "," << t.used.j << "," << (t.used.xi > 0 ? "+" : "-") << ")\n";
    return kExitPass;
  }
  std::ofstream os = open_out(out_path);
  os << "c00,c01,c10,c11,status,theta,phi,omega,check\n";
  for_each_point(in_path, [&](const Correlators& c) {
    os << fmt(c(0)) << "," << fmt(c(1)) << "," << fmt(c(2)) << "," << fmt(c(3)) << ",";
    try {
      TangentResult t = tangent_from_boundary(c);
      os << "ok," << fmt(t.params.theta) << "," << fmt(t.params.phi) << ","
         << fmt(t.params.omega) << "," << fmt(t.check) << "\n";
    } catch (const not_on_boundary_error&) {
      os << membership_name(masanes_membership(c).where) << ",,,,\n";
    }
  });
  return kExitPass;
}

int cmd_simulate(const BellParameters& p, std::uint64_t rounds, double q,
                 std::optional<double> threshold, std::uint64_t seed,
                 const std::optional<Correlators>& device_correlators,
                 const std::string& out_path, const std::string& tallies_path) {
  ProtocolConfig cfg;
  cfg.rounds = rounds;
  cfg.test_probability = q;
  cfg.params = p;
  cfg.abort_threshold = threshold;
  cfg.seed = seed;
  Behaviour device = device_correlators
                         ? behaviour_from_correlators(*device_correlators)
                         : target_behaviour(p);
  ProtocolReport rep = simulate(device, cfg);

  json j;
  j["params"] = {{"theta", p.theta}, {"phi", p.phi}, {"omega", p.omega}};
  j["rounds"] = rounds;
  j["test_probability"] = q;
  j["seed"] = seed;
  j["test_rounds"] = rep.test_rounds;
  j["generation_rounds"] = rep.generation_rounds;
  j["bell_estimate"] = rep.bell_estimate;
  j["bell_stderr"] = rep.bell_stderr;
  j["bell_violation"] = rep.bell_violation;
  j["threshold"] = rep.threshold;
  j["aborted"] = rep.aborted;
  j["raw_key_agreement"] = rep.raw_key_agreement;
  j["projected_key_bits"] = rep.projected_key_bits;
  j["key_accounting"] = "projected asymptotic (iid); not a finite-key statement";

  if (!tallies_path.empty()) {
    std::ofstream ts = open_out(tallies_path);
    ts << "x,y,a,b,count\n";
    for (int xy = 0; xy < 4; ++xy)
      for (int ab = 0; ab < 4; ++ab)
        ts << (xy >> 1) << "," << (xy & 1) << "," << (ab >> 1) << "," << (ab & 1)
           << "," << rep.test_counts[xy][ab] << "\n";
  }
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream os = open_out(out_path);
    os << j.dump(2) << "\n";
  }
  return kExitPass;
}

int cmd_reproduce(int prop, int resolution, const std::string& out_path) {
  PropositionTable table = proposition_report(prop, resolution);
  int failed = 0;
  for (const PropositionRow& row : table.rows)
    if (!row.pass) ++failed;
  std::cout << "proposition " << prop << ": " << table.rows.size() << " rows, "
            << failed << " failing\n";
  std::cout << "chsh range covered: [" << fmt(table.s_lo) << ", " << fmt(table.s_hi)
            << "]\n";
  if (!out_path.empty()) {
    std::ofstream os = open_out(out_path);
    write_proposition_csv(table, os);
  }
  std::cout << (table.passed ? "PASS" : "FAIL") << "\n";
  return table.passed ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bellkit: three-parameter self-testing Bell expressions, their bounds and "
      "SOS certificates, device-independent key/randomness rates, quantum-set "
      "boundary queries, and a spot-checking protocol simulator"};
  app.fallthrough(true);
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  double tolerance = 1e-12;
  std::string out_path;
  std::string config_path;
  app.add_option("--seed", seed, "Master seed for randomized commands");
  app.add_option("--tolerance", tolerance,
                 "Residual tolerance for verification commands (default 1e-12)");
  app.add_option("--out", out_path, "Output path (CSV or JSON, per command)");
  app.add_option("--config", config_path,
                 "Flat key = value file; keys match long option names");

  std::string theta = "0", phi = "0", omega = "0";
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--theta", theta, "Angle literal, e.g. pi/3 or 0.25")->required();
    sub->add_option("--phi", phi, "Angle literal")->required();
    sub->add_option("--omega", omega, "Angle literal")->required();
  };

  auto* bound = app.add_subcommand(
      "bound", "Local and quantum bounds, coefficients, self-test condition");
  add_params(bound);
  bool oracle = false;
  SearchConfig search;
  double probe_tol = 1e-5;
  bound->add_flag("--oracle", oracle,
                  "Also run the reduced-strategy search and uniqueness probe");
  bound->add_option("--grid", search.grid_resolution, "Coarse grid cells per angle");
  bound->add_option("--starts", search.starts, "Refinement starts");
  bound->add_option("--step-floor", search.step_floor, "Terminal descent step");
  bound->add_option("--budget", search.budget, "Objective evaluation budget");
  bound->add_option("--probe-tol", probe_tol, "Uniqueness probe tolerance");

  auto* sweep = app.add_subcommand("sweep", "Figure grid sweep to CSV (--out)");
  sweep->footer(
      "CSV columns: theta,phi|omega,chsh_max,certified,rate. Figure 1 fixes "
      "omega = pi (rate = global randomness rate); figure 2 fixes phi = pi/2 "
      "(rate = key rate under the correlator criterion). See FORMATS.md.");
  SweepSpec spec;
  sweep->add_option("--figure", spec.figure, "1 (omega = pi) or 2 (phi = pi/2)")
      ->required();
  sweep->add_option("--resolution", spec.resolution, "Grid points per axis")
      ->required();

  auto* verify = app.add_subcommand(
      "verify-sos", "Check the SOS identity and target-strategy residuals");
  add_params(verify);
  int trials = 100;
  verify->add_option("--trials", trials, "Random involution draws");

  auto* rates = app.add_subcommand("rates", "Key and randomness rates at a point");
  add_params(rates);

  auto* boundary = app.add_subcommand(
      "boundary", "Quantum-set membership and the singlet self-test criterion");
  boundary->footer(
      "Batch CSV in: rows c00,c01,c10,c11 (optional header). CSV out columns: "
      "c00,c01,c10,c11,membership,saturated,wang. See FORMATS.md.");
  auto* tangent = app.add_subcommand(
      "tangent", "Tangent Bell functional at a boundary correlator point");
  tangent->footer(
      "Batch CSV in: rows c00,c01,c10,c11 (optional header). CSV out columns: "
      "c00,c01,c10,c11,status,theta,phi,omega,check. See FORMATS.md.");
  std::string c00, c01, c10, c11, in_path;
  for (CLI::App* sub : {boundary, tangent}) {
    sub->add_option("--c00", c00, "Correlator <A0B0>");
    sub->add_option("--c01", c01, "Correlator <A0B1>");
    sub->add_option("--c10", c10, "Correlator <A1B0>");
    sub->add_option("--c11", c11, "Correlator <A1B1>");
    sub->add_option("--in", in_path, "CSV of correlator points (one per row)");
  }

  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Monte-Carlo spot-checking protocol against a fixed behaviour");
  add_params(simulate_cmd);
  std::uint64_t rounds = 0;
  double q = 0.1;
  double threshold_value = 0.0;
  std::string device_corr;
  std::string tallies_path;
  simulate_cmd->add_option("--rounds", rounds, "Number of protocol rounds")->required();
  simulate_cmd->add_option("--q", q, "Test-round probability in (0,1)")->required();
  auto* threshold_opt = simulate_cmd->add_option(
      "--threshold", threshold_value,
      "Abort threshold for the violation sign(eta_Q)*<B>; default |eta_Q| - 5 stderr");
  simulate_cmd->add_option(
      "--correlators", device_corr,
      "Device correlators c00,c01,c10,c11 (default: honest target behaviour)");
  simulate_cmd->add_option("--tallies", tallies_path, "Write test tallies CSV here");
  simulate_cmd->footer(
      "Report is JSON; --tallies CSV columns: x,y,a,b,count. Config keys: "
      "theta, phi, omega, rounds, q, threshold, seed. See FORMATS.md.");

  auto* reproduce = app.add_subcommand("reproduce", "Verify propositions 2-6");
  reproduce->footer(
      "CSV out columns: theta,phi,omega,condition,key_rate,global_rate,"
      "chsh_max,pass. See FORMATS.md.");
  int prop = 0;
  int resolution = 100;
  reproduce->add_option("prop", prop, "Proposition id (2-6)")->required();
  reproduce->add_option("--resolution", resolution, "Rows per sweep");

  std::vector<std::string> args;
  try {
    args = with_config(argc, argv);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::vector<const char*> cargs;
  cargs.push_back("bellkit");
  for (const std::string& a : args) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), const_cast<char**>(cargs.data()));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    auto params = [&] { return BellParameters(parse_angle(theta), parse_angle(phi),
                                              parse_angle(omega)); };
    if (bound->parsed()) return cmd_bound(params(), oracle, search, probe_tol);
    if (sweep->parsed()) {
      if (out_path.empty()) throw parse_error("sweep requires --out <path>");
      return cmd_sweep(spec, out_path);
    }
    if (verify->parsed()) return cmd_verify_sos(params(), trials, seed, tolerance);
    if (rates->parsed()) return cmd_rates(params());
    if (boundary->parsed() || tangent->parsed()) {
      std::optional<Correlators> point;
      if (!c00.empty() || !c01.empty() || !c10.empty() || !c11.empty())
        point = correlators_from_fields({c00, c01, c10, c11});
      else if (in_path.empty())
        throw parse_error("provide --c00..--c11 or --in <csv>");
      if (!point && out_path.empty())
        throw parse_error("batch mode requires --out <path>");
      return boundary->parsed() ? cmd_boundary(point, in_path, out_path)
                                : cmd_tangent(point, in_path, out_path);
    }
    if (simulate_cmd->parsed()) {
      std::optional<double> threshold;
      if (threshold_opt->count() > 0) threshold = threshold_value;
      std::optional<Correlators> device;
      if (!device_corr.empty())
        device = correlators_from_fields(split_csv_line(device_corr));
      return cmd_simulate(params(), rounds, q, threshold, seed, device, out_path,
                          tallies_path);
    }
    if (reproduce->parsed()) return cmd_reproduce(prop, resolution, out_path);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
