#include "bellkit/boundary.hpp"

#include <doctest.h>

using namespace bellkit;

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

// Relabellings acting on correlator vectors; membership category must be
// invariant under all of them.
Correlators swap_alice(const Correlators& c) { return {c(2), c(3), c(0), c(1)}; }
Correlators swap_bob(const Correlators& c) { return {c(1), c(0), c(3), c(2)}; }
Correlators flip_alice_x1(const Correlators& c) { return {c(0), c(1), -c(2), -c(3)}; }
Correlators flip_bob_y1(const Correlators& c) { return {c(0), -c(1), c(2), -c(3)}; }
}  // namespace

TEST_CASE("membership classification") {
  MembershipReport pr = masanes_membership(Correlators(1, 1, 1, -1));
  CHECK(pr.where == Membership::outside);
  CHECK(pr.sums[3] == doctest::Approx(2 * kPi));  // the (1,1) condition hits 2pi

  MembershipReport b = masanes_membership(Correlators(1, 0.5, 0.5, -0.5));
  CHECK(b.where == Membership::boundary);
  REQUIRE(b.saturated.size() == 1);
  CHECK(b.saturated[0].i == 1);
  CHECK(b.saturated[0].j == 1);
  CHECK(b.saturated[0].xi == 1);
  CHECK(b.saturated[0].value == doctest::Approx(kPi).epsilon(1e-12));

  MembershipReport det = masanes_membership(Correlators(1, 1, 1, 1));
  CHECK(det.where == Membership::boundary);
  CHECK(det.saturated.size() == 4);  // every condition gives pi

  CHECK(masanes_membership(Correlators(0, 0, 0, 0)).where == Membership::interior);
  CHECK_THROWS_AS(masanes_membership(Correlators(1.01, 0, 0, 0)), domain_error);
}

TEST_CASE("membership is invariant under relabellings") {
  Rng g(60);
  for (int i = 0; i < 300; ++i) {
    Correlators c;
    if (i % 3 == 0) {
      BellParameters p(uniform_angle(g), uniform_angle(g), uniform_angle(g));
      c = correlators_closed_form(p);  // boundary points
    } else {
      for (int k = 0; k < 4; ++k) c(k) = 2.0 * uniform_unit(g) - 1.0;
    }
    Membership base = masanes_membership(c).where;
    for (auto* op : {&swap_alice, &swap_bob, &flip_alice_x1, &flip_bob_y1}) {
      CHECK(masanes_membership((*op)(c)).where == base);
      CHECK(masanes_membership(-c).where == base);
    }
  }
}

TEST_CASE("singlet self-test criterion") {
  CHECK(wang_selftest_check(Correlators(1, 0.5, 0.5, -0.5)));
  CHECK(wang_selftest_check(Correlators(1, 0, kSqrt2 / 2, -kSqrt2 / 2)));
  // all four arccos values are 0: degenerate deterministic point
  CHECK_FALSE(wang_selftest_check(Correlators(1, 1, 1, 1)));
  CHECK_FALSE(wang_selftest_check(Correlators(0, 0, 0, 0)));
  CHECK_THROWS_AS(wang_selftest_check(Correlators(0, 0, 2, 0)), domain_error);
}

TEST_CASE("tangent construction at a boundary point") {
  Correlators c(0.5, -0.5, kSqrt3 / 2, kSqrt3 / 2);
  TangentResult t = tangent_from_boundary(c);
  CHECK(std::fabs(t.params.theta - kPi / 2) < 1e-12);
  CHECK(std::fabs(t.params.phi - kPi / 6) < 1e-12);
  CHECK(std::fabs(t.params.omega + kPi / 6) < 1e-12);
  CHECK(std::fabs(t.check) <= 1e-10);
  CHECK(evaluate(make_functional(t.params), c) ==
        doctest::Approx(-kSqrt3 / 2).epsilon(1e-12));

  // round trip through the closed-form correlators of the same parameters
  TangentResult rt =
      tangent_from_boundary(correlators_closed_form(BellParameters(kPi / 2, kPi / 6, -kPi / 6)));
  CHECK(std::fabs(rt.check) <= 1e-10);

  CHECK_THROWS_AS(tangent_from_boundary(Correlators(0, 0, 0, 0)),
                  not_on_boundary_error);
  CHECK_THROWS_AS(tangent_from_boundary(Correlators(1, 1, 1, -1)),
                  not_on_boundary_error);
}

TEST_CASE("tangent at a degenerate deterministic point") {
  TangentResult t = tangent_from_boundary(Correlators(1, 1, 1, 1));
  CHECK(t.saturated_count == 4);
  CHECK(std::fabs(t.check) <= 1e-10);  // eta_Q = 0 tangent is legitimate
}

TEST_CASE("target correlators land on the self-testable boundary") {
  Rng g(1234);
  int done = 0;
  while (done < 1000) {
    BellParameters p(uniform_angle(g), uniform_angle(g), uniform_angle(g));
    if (!selftest_condition(p)) continue;
    ++done;
    Correlators c = correlators_closed_form(p);
    CHECK(masanes_membership(c).where == Membership::boundary);

    int extremal = 0;
    for (int k = 0; k < 4; ++k)
      if (1.0 - std::fabs(c(k)) <= kSaturationTol) ++extremal;
    if (extremal <= 1) CHECK(wang_selftest_check(c));

    TangentResult t = tangent_from_boundary(c);
    CHECK(std::fabs(t.check) <= kFormulaTol);
  }
}
