#include <cmath>

#include "doctest.h"
#include "frontnet/problems/eikadv.hpp"
#include "frontnet/problems/eikadv_oracle.hpp"
#include "frontnet/problems/eikonal.hpp"
#include "frontnet/problems/rotation.hpp"

using namespace frontnet;
using namespace frontnet::problems;

namespace {

// plain vs taped evaluation of f, g, phi at one point
void check_taped_matches(const Problem& prob, const Vec& x, const Vec& a) {
  const int d = prob.dim();
  Vec fx(d);
  prob.f(x.data(), a.data(), fx.data());

  ad::Tape t;
  ad::Var xv = t.input(x);
  ad::Var av = t.input(a);
  ad::Var fv = prob.f(t, xv, av);
  REQUIRE(fv.dim == d);
  for (int m = 0; m < d; ++m)
    CHECK(t.data(fv)[m] == doctest::Approx(fx[m]).epsilon(1e-14));

  if (prob.has_obstacle())
    CHECK(t.value(prob.g(t, xv)) ==
          doctest::Approx(prob.g(x.data())).epsilon(1e-14));
  CHECK(t.value(prob.phi(t, xv)) ==
        doctest::Approx(prob.phi(x.data())).epsilon(1e-14));
  CHECK(t.value(prob.gphi(t, xv)) ==
        doctest::Approx(prob.gphi(x.data())).epsilon(1e-14));
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("factory knows its catalogue") {
  for (const auto& name : Problem::known_names())
    CHECK(Problem::make(name, 0)->name() == name);
  CHECK_THROWS_WITH_AS(Problem::make("bogus", 2),
                       doctest::Contains("unknown problem"), config_error);
  CHECK_THROWS_AS(Problem::make("rotation", 3), config_error);
  CHECK(Problem::make("rotation", 0)->dim() == 2);
  CHECK(Problem::make("eikonal", 4)->dim() == 4);
}

TEST_CASE("rotation field, costs and control encoding") {
  auto prob = Problem::make("rotation", 2);
  CHECK(prob->horizon() == doctest::Approx(0.4));
  CHECK(prob->control_dim() == 1);
  CHECK(prob->has_obstacle());

  double x[2] = {1.0, 0.0};
  double a = 1.0, fx[2];
  prob->f(x, &a, fx);
  CHECK(fx[0] == doctest::Approx(0.0));
  CHECK(fx[1] == doctest::Approx(2.0 * kPi));

  double ob[2] = {0.0, 1.0};
  CHECK(prob->g(ob) == doctest::Approx(0.25));
  CHECK(prob->phi(x) == doctest::Approx(-0.5));
  double far2[2] = {1.0, 1.0};
  CHECK(prob->g(far2) == doctest::Approx(-0.75));

  check_taped_matches(*prob, {0.3, -0.8}, {0.6});
}

TEST_CASE("rotation reference values along reachable arcs") {
  auto prob = Problem::make("rotation", 2);
  const double T = prob->horizon();

  double rim[2] = {1.0, 0.0};
  for (double t : {0.0, 0.13, T}) {
    CHECK(prob->oracle(t, rim) == doctest::Approx(-0.5).epsilon(1e-9));
  }
  // terminal time is just the pointwise cost
  double q[2] = {0.3, 1.1};
  CHECK(prob->oracle(T, q) == doctest::Approx(prob->gphi(q)).epsilon(1e-12));

  // radius-2 start: nearest target-rim point is already below it
  double outer[2] = {2.0, 0.0};
  CHECK(prob->oracle(0.0, outer) == doctest::Approx(0.5).epsilon(1e-6));

  // value never exceeds sitting still, never undercuts the global floor
  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    double x[2] = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    double t = rng.uniform(0.0, T);
    double v = prob->oracle(t, x);
    CHECK(v <= prob->gphi(x) + 1e-9);
    CHECK(v >= -0.5 - 1e-9);
  }
}

TEST_CASE("rotation oracle resolution is converged at the default") {
  auto prob = Problem::make("rotation", 2);
  auto* rot = dynamic_cast<Rotation*>(prob.get());
  REQUIRE(rot != nullptr);
  Rng rng(7);
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    double x[2] = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    rot->set_oracle_samples(4096);
    double v1 = prob->oracle(0.0, x);
    rot->set_oracle_samples(8192);
    double v2 = prob->oracle(0.0, x);
    worst = std::max(worst, std::fabs(v1 - v2));
  }
  CHECK(worst < 2e-3);
}

TEST_CASE("eikonal distances and closed-form values in any dimension") {
  auto prob = Problem::make("eikonal", 2);
  CHECK(!prob->has_obstacle());
  double origin[2] = {0.0, 0.0};
  CHECK(prob->phi(origin) == doctest::Approx(0.5));  // 1 away from both wells
  CHECK(prob->oracle(0.0, origin) == doctest::Approx(-0.5));
  double xa[2] = {-1.0, 0.0};
  CHECK(prob->oracle(prob->horizon(), xa) == doctest::Approx(-0.5));
  double far2[2] = {3.0, 0.0};
  CHECK(prob->oracle(0.0, far2) == doctest::Approx(0.5));

  check_taped_matches(*prob, {0.4, -1.2}, {0.3, -0.5});

  auto p4 = Problem::make("eikonal", 4);
  double o4[4] = {0.0, 0.0, 0.0, 0.0};
  CHECK(p4->oracle(0.0, o4) == doctest::Approx(-0.5));
  check_taped_matches(*p4, {0.4, -1.2, 0.2, 0.1}, {0.3, -0.5, 0.1, 0.7});

  // dynamics follow the control exactly
  double a[2] = {0.6, -0.8}, fx[2];
  prob->f(origin, a, fx);
  CHECK(fx[0] == doctest::Approx(0.6));
  CHECK(fx[1] == doctest::Approx(-0.8));
}

TEST_CASE("slotted-wall running cost and terminal cost") {
  auto prob = Problem::make("eikadv-large", 2);
  CHECK(prob->horizon() == doctest::Approx(4.0));
  CHECK(prob->has_obstacle());

  double wall[2] = {4.0, 0.0};
  CHECK(prob->g(wall) == doctest::Approx(-2.0));  // the slot opening
  double high[2] = {4.0, 3.0};
  CHECK(prob->g(high) == doctest::Approx(2.0));  // capped by the wall height
  double origin[2] = {0.0, 0.0};
  CHECK(prob->phi(origin) == doctest::Approx(-1.0));

  check_taped_matches(*prob, {4.4, 1.3}, {0.3, -0.2});
  check_taped_matches(*Problem::make("eikadv-small", 3), {4.4, 1.3, -0.6},
                      {0.3, -0.2, 0.5});

  // drift pushes upstream along -e1, control adds speed c
  double a[2] = {1.0, 0.0}, fx[2];
  prob->f(origin, a, fx);
  CHECK(fx[0] == doctest::Approx(-1.0 + 0.5));
  CHECK(fx[1] == doctest::Approx(0.0));
}

TEST_CASE("drifting-ball reach times in both speed regimes") {
  // downstream of the target, drift dominant: closes 1.5 length units per
  // unit time
  auto t1 = reach_time_real(2.0, 0.0, 0.5, 1.0, 0.5);
  REQUIRE(t1.has_value());
  CHECK(*t1 == doctest::Approx(1.0).epsilon(1e-12));

  // upstream with weak control: unreachable
  CHECK(!reach_time_real(-2.0, 0.0, 0.5, 1.0, 0.5).has_value());

  // upstream with strong control: net speed 0.5 against the drift
  auto t3 = reach_time_real(-2.0, 0.0, 0.5, 0.5, 1.0);
  REQUIRE(t3.has_value());
  CHECK(*t3 == doctest::Approx(3.0).epsilon(1e-12));

  // already inside the target ball
  auto t0 = reach_time_real(0.1, 0.0, 0.5, 1.0, 0.5);
  REQUIRE(t0.has_value());
  CHECK(*t0 == 0.0);
}

TEST_CASE("wall oracle: straight route along the slot axis") {
  auto prob = Problem::make("eikadv-large", 2);
  auto* adv = dynamic_cast<EikonalAdvection*>(prob.get());
  REQUIRE(adv != nullptr);
  double x[2] = {6.0, 0.0};
  auto res = adv->oracle_detail(0.0, x);
  CHECK(res.branch == OracleBranch::Straight);
  CHECK(res.v == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(prob->oracle(0.0, x) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("wall oracle: bent route agrees with the exhaustive twin") {
  struct Regime {
    const char* name;
    WallGeometry geo;
  };
  WallGeometry small;
  small.b = 0.5;
  small.c = 1.0;
  const Regime regimes[] = {{"eikadv-large", WallGeometry{}},
                           {"eikadv-small", small}};

  for (const auto& reg : regimes) {
    CAPTURE(reg.name);
    auto prob = Problem::make(reg.name, 2);
    auto* adv = dynamic_cast<EikonalAdvection*>(prob.get());
    REQUIRE(adv != nullptr);

    int bent_seen = 0;
    auto compare_at = [&](double t, double x1, double x2) {
      double x[2] = {x1, x2};
      auto r = adv->oracle_detail(t, x);
      auto b = eikadv_two_segment_bruteforce(reg.geo, 4.0 - t, x, 2);
      if (r.branch == OracleBranch::Unreached || !b.reached) {
        CHECK(r.branch == OracleBranch::Unreached);
        CHECK_FALSE(b.reached);
        return;
      }
      CHECK(std::fabs(r.v - b.v) < 1e-6);
      if (r.branch == OracleBranch::TwoSegment) ++bent_seen;
    };

    // starts in the wall shadow, forced to detour over the whole horizon
    compare_at(0.0, 5.0, 2.0);
    compare_at(0.0, 5.5, -2.0);
    compare_at(0.0, 4.5, 3.0);
    CHECK(bent_seen >= 3);

    // random spot checks across the sampling box
    Rng rng(fnv1a64(reg.name));
    for (int i = 0; i < 32; ++i) {
      double x1 = rng.uniform(-2.0, 8.0), x2 = rng.uniform(-4.0, 4.0);
      compare_at(rng.uniform(0.0, 3.9), x1, x2);
    }
  }
}

TEST_CASE("wall oracle at vanishing horizon returns the pointwise cost") {
  auto prob = Problem::make("eikadv-small", 2);
  double x[2] = {1.7, -0.4};
  CHECK(prob->oracle(prob->horizon(), x) ==
        doctest::Approx(prob->gphi(x)).epsilon(1e-12));
}

}  // TEST_SUITE
