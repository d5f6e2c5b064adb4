#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

std::string bin() {
  const char* b = std::getenv("BELLKIT_BIN");
  REQUIRE(b != nullptr);
  return b;
}

std::filesystem::path scratch() {
  const char* t = std::getenv("BELLKIT_TMP");
  REQUIRE(t != nullptr);
  std::filesystem::create_directories(t);
  return t;
}

RunResult run(const std::string& args) {
  std::string cmd = bin() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("bound prints the CHSH recovery") {
  RunResult r = run("bound --theta -pi/2 --phi 3pi/4 --omega pi/4");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("quantum bound (signed):    1") != std::string::npos);
  CHECK(r.output.find("0.35355339059327") != std::string::npos);
  CHECK(r.output.find("satisfied") != std::string::npos);

  RunResult r2 = run("bound --theta pi/3 --phi pi/3 --omega pi");
  CHECK(r2.exit_code == 0);
  CHECK(r2.output.find("0.625") != std::string::npos);
  CHECK(r2.output.find("-0.64951905283832") != std::string::npos);
}

TEST_CASE("bound with the oracle") {
  RunResult r = run("bound --theta pi/3 --phi pi/3 --omega pi --oracle --starts 64");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("uniqueness probe:          passed") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("bound --theta pie --phi 0 --omega 0").exit_code == 2);
  CHECK(run("bound --theta pi/3").exit_code == 2);  // missing required options
  CHECK(run("reproduce 7").exit_code == 2);
  CHECK(run("nonsense").exit_code == 2);
  CHECK(run("").exit_code == 2);
}

TEST_CASE("identical invocations are byte-identical") {
  std::string cmd = "rates --theta pi/3 --phi pi/3 --omega pi";
  RunResult a = run(cmd);
  RunResult b = run(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.find("selftested: yes (gate: bell-functional)") != std::string::npos);
}

TEST_CASE("rates at a correlator-certified point") {
  RunResult r = run("rates --theta pi/4 --phi pi/2 --omega pi");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("gate: correlators") != std::string::npos);
  CHECK(r.output.find("key rate:    1") != std::string::npos);
}

TEST_CASE("verify-sos") {
  RunResult r = run("verify-sos --theta pi/3 --phi pi/3 --omega pi --trials 50");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("PASS") != std::string::npos);

  // degenerate parameters are refused
  RunResult bad = run("verify-sos --theta 0 --phi pi/3 --omega pi");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("sweep writes a grid and checks landmarks") {
  auto out = scratch() / "fig1_small.csv";
  RunResult r = run("sweep --figure 1 --resolution 25 --out " + out.string());
  CHECK(r.exit_code == 0);
  std::string csv = slurp(out);
  CHECK(csv.rfind("theta,phi,chsh_max,certified,rate\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 25 * 25 + 1);

  // parallel cell computation still yields byte-identical output
  auto out2 = scratch() / "fig1_small_repeat.csv";
  CHECK(run("sweep --figure 1 --resolution 25 --out " + out2.string()).exit_code == 0);
  CHECK(csv == slurp(out2));

  CHECK(run("sweep --figure 1 --resolution 1 --out " + out.string()).exit_code == 2);
  CHECK(run("sweep --figure 3 --resolution 25 --out " + out.string()).exit_code == 2);
  CHECK(run("sweep --figure 1 --resolution 25 --out /nonexistent/dir/x.csv").exit_code ==
        2);
}

TEST_CASE("boundary single point and batch") {
  RunResult pr = run("boundary --c00 1 --c01 1 --c10 1 --c11 -1");
  CHECK(pr.exit_code == 0);
  CHECK(pr.output.find("membership: outside") != std::string::npos);

  RunResult b = run("boundary --c00 1 --c01 0.5 --c10 0.5 --c11 -0.5");
  CHECK(b.exit_code == 0);
  CHECK(b.output.find("membership: boundary") != std::string::npos);
  CHECK(b.output.find("(1,1,+)") != std::string::npos);
  CHECK(b.output.find("wang self-test: yes") != std::string::npos);

  auto in = scratch() / "points.csv";
  {
    std::ofstream os(in);
    os << "c00,c01,c10,c11\n";
    os << "1,1,1,-1\n";
    os << "0,0,0,0\n";
    os << "1,0.5,0.5,-0.5\n";
  }
  auto out = scratch() / "classified.csv";
  RunResult batch = run("boundary --in " + in.string() + " --out " + out.string());
  CHECK(batch.exit_code == 0);
  std::string csv = slurp(out);
  CHECK(csv.find("outside") != std::string::npos);
  CHECK(csv.find("interior") != std::string::npos);
  CHECK(csv.find("boundary") != std::string::npos);
}

TEST_CASE("tangent single point and failures") {
  RunResult t = run("tangent --c00 0.5 --c01 -0.5 --c10 0.866025403784438646 "
                    "--c11 0.866025403784438646");
  CHECK(t.exit_code == 0);
  CHECK(t.output.find("theta=1.57079632679") != std::string::npos);

  RunResult interior = run("tangent --c00 0 --c01 0 --c10 0 --c11 0");
  CHECK(interior.exit_code == 1);
}

TEST_CASE("simulate emits a reproducible json report") {
  auto out1 = scratch() / "sim1.json";
  auto out2 = scratch() / "sim2.json";
  std::string base = "simulate --theta pi/3 --phi 1.5607963267948966 --omega 5pi/6 "
                     "--rounds 20000 --q 0.1 --seed 7 --out ";
  CHECK(run(base + out1.string()).exit_code == 0);
  CHECK(run(base + out2.string()).exit_code == 0);
  std::string text1 = slurp(out1);
  CHECK(text1 == slurp(out2));

  auto j = nlohmann::json::parse(text1);
  CHECK(j["aborted"].get<bool>() == false);
  CHECK(j["generation_rounds"].get<long long>() > 15000);
  CHECK(j["bell_stderr"].get<double>() > 0.0);
  CHECK(j["raw_key_agreement"].get<double>() > 0.99);
}

TEST_CASE("simulate accepts a config file") {
  auto cfg = scratch() / "protocol.cfg";
  {
    std::ofstream os(cfg);
    os << "# spot-checking configuration\n";
    os << "theta = pi/3\nphi = 1.5607963267948966\nomega = 5pi/6\n";
    os << "rounds = 10000\nq = 0.1\nseed = 3\n";
  }
  RunResult r = run("simulate --config " + cfg.string());
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["rounds"].get<long long>() == 10000);
  CHECK(j["seed"].get<long long>() == 3);

  // command line wins over config
  RunResult r2 = run("simulate --config " + cfg.string() + " --rounds 5000");
  auto j2 = nlohmann::json::parse(r2.output);
  CHECK(j2["rounds"].get<long long>() == 5000);
}

TEST_CASE("simulate with a deterministic local device aborts") {
  RunResult r = run("simulate --theta pi/3 --phi 1.5607963267948966 --omega 5pi/6 "
                    "--rounds 100000 --q 0.1 --seed 5 --correlators 1,1,1,1");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["aborted"].get<bool>() == true);
  CHECK(j["projected_key_bits"].get<double>() == 0.0);
}

TEST_CASE("reproduce") {
  RunResult r = run("reproduce 4 --resolution 25");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("PASS") != std::string::npos);

  auto out = scratch() / "prop6.csv";
  RunResult r6 = run("reproduce 6 --resolution 10 --out " + out.string());
  CHECK(r6.exit_code == 0);
  std::string csv = slurp(out);
  CHECK(csv.rfind("theta,phi,omega,condition,key_rate,global_rate,chsh_max,pass\n",
                  0) == 0);
}
