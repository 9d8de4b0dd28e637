#include <cmath>

#include "doctest.h"
#include "frontnet/dynamics/rollout.hpp"
#include "frontnet/problems/rotation.hpp"

using namespace frontnet;

namespace {
// closed-form flow of the rotation field for a frozen control
void rotate_exact(const double* x, double a, double h, double* out) {
  const double th = 2.0 * kPi * a * h;
  out[0] = std::cos(th) * x[0] - std::sin(th) * x[1];
  out[1] = std::sin(th) * x[0] + std::cos(th) * x[1];
}
}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("tableau catalogue and validation") {
  auto eu = dynamics::ButcherTableau::euler();
  auto he = dynamics::ButcherTableau::heun();
  auto rk = dynamics::ButcherTableau::rk4();
  CHECK(eu.q == 1);
  CHECK(he.q == 2);
  CHECK(rk.q == 4);
  CHECK(eu.consistent());
  CHECK(he.consistent());
  CHECK(rk.consistent());

  CHECK(dynamics::ButcherTableau::by_name("heun").name == "heun");
  CHECK_THROWS_WITH_AS(dynamics::ButcherTableau::by_name("rk5"),
                       doctest::Contains("unknown tableau"), config_error);

  // an entry on the diagonal makes the scheme implicit
  CHECK_THROWS_AS(dynamics::ButcherTableau("bad", 2, {0.5, 0.0, 1.0, 0.0},
                                           {0.5, 0.5}),
                  config_error);
}

TEST_CASE("euler and heun steps on the rotation field, frozen control") {
  auto prob = problems::Problem::make("rotation", 2);
  const double x[2] = {1.0, 0.0};
  const double a = 1.0;
  double out[2];

  dynamics::rk_step(dynamics::ButcherTableau::euler(), *prob, x, &a, 0.1, out);
  CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(0.2 * kPi).epsilon(1e-14));

  dynamics::rk_step(dynamics::ButcherTableau::heun(), *prob, x, &a, 0.1, out);
  CHECK(out[0] == doctest::Approx(1.0 - 0.02 * kPi * kPi).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(0.2 * kPi).epsilon(1e-14));
}

TEST_CASE("one-step error shrinks at the expected order") {
  auto prob = problems::Problem::make("rotation", 2);
  const double x[2] = {0.8, -0.3};
  const double a = 0.6;

  auto one_step_err = [&](const dynamics::ButcherTableau& tab, double h) {
    double num[2], ref[2];
    dynamics::rk_step(tab, *prob, x, &a, h, num);
    rotate_exact(x, a, h, ref);
    return std::sqrt(sq(num[0] - ref[0]) + sq(num[1] - ref[1]));
  };

  // local error orders: euler 2, heun 3, rk4 5
  struct Row {
    dynamics::ButcherTableau tab;
    double order;
  };
  for (const auto& row : {Row{dynamics::ButcherTableau::euler(), 2.0},
                          Row{dynamics::ButcherTableau::heun(), 3.0},
                          Row{dynamics::ButcherTableau::rk4(), 5.0}}) {
    double e1 = one_step_err(row.tab, 0.02);
    double e2 = one_step_err(row.tab, 0.01);
    double slope = std::log2(e1 / e2);
    CHECK(slope > row.order - 0.15);
  }
}

TEST_CASE("substep refinement halves bitwise into the semigroup property") {
  auto prob = problems::Problem::make("rotation", 2);
  const double x[2] = {1.3, 0.4};
  const double a = -0.7;
  const double dt = 0.2;
  auto tab = dynamics::ButcherTableau::heun();

  double once[2], twice[2], mid[2];
  dynamics::coarse_step(tab, *prob, x, &a, dt, 4, once);
  dynamics::coarse_step(tab, *prob, x, &a, dt / 2, 2, mid);
  dynamics::coarse_step(tab, *prob, mid, &a, dt / 2, 2, twice);
  CHECK(once[0] == twice[0]);
  CHECK(once[1] == twice[1]);
}

TEST_CASE("running obstacle max covers the substep feet, not the landing") {
  auto prob = problems::Problem::make("rotation", 2);
  auto tab = dynamics::ButcherTableau::heun();
  const double x[2] = {0.9, 0.05};
  const double a = 1.0;
  const double dt = 0.25;
  const int p = 3;

  double cur[2] = {x[0], x[1]}, nxt[2];
  double expect = -1e300;
  for (int j = 0; j < p; ++j) {
    expect = std::max(expect, prob->g(cur));
    dynamics::rk_step(tab, *prob, cur, &a, dt / p, nxt);
    cur[0] = nxt[0];
    cur[1] = nxt[1];
  }
  double out[2];
  auto res = dynamics::coarse_step(tab, *prob, x, &a, dt, p, out);
  REQUIRE(res.has_G);
  CHECK(res.G == expect);
  CHECK(out[0] == cur[0]);
  CHECK(out[1] == cur[1]);
  // this window is set up so g keeps growing: the landing point would beat
  // every foot, and it is deliberately left out
  CHECK(res.G < prob->g(out));
}

TEST_CASE("open-loop cost of holding still at the target rim") {
  auto prob = problems::Problem::make("rotation", 2);
  auto tab = dynamics::ButcherTableau::heun();
  const double x[2] = {1.0, 0.0};  // phi = -0.5 here, g well below
  const double controls[4] = {0.0, 0.0, 0.0, 0.0};
  double J = dynamics::trajectory_cost_openloop(tab, *prob, controls, 0, 4,
                                                0.1, 5, x);
  CHECK(J == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("taped coarse step reproduces the plain one and its x-gradient") {
  auto prob = problems::Problem::make("rotation", 2);
  auto tab = dynamics::ButcherTableau::heun();
  const Vec x0 = {0.7, -0.2};
  const Vec a0 = {0.35};
  const double dt = 0.2;
  const int p = 4;

  double plain[2];
  auto plain_res =
      dynamics::coarse_step(tab, *prob, x0.data(), a0.data(), dt, p, plain);

  ad::Tape t;
  ad::Var xv = t.input(x0);
  ad::Var av = t.input(a0);
  auto taped = dynamics::coarse_step(t, tab, *prob, xv, av, dt, p);
  CHECK(t.data(taped.xnext)[0] == doctest::Approx(plain[0]).epsilon(1e-14));
  CHECK(t.data(taped.xnext)[1] == doctest::Approx(plain[1]).epsilon(1e-14));
  REQUIRE(taped.has_G);
  CHECK(t.value(taped.G) == doctest::Approx(plain_res.G).epsilon(1e-14));

  // d/dx of a scalar through the step vs central differences
  ad::Var loss = t.dot(taped.xnext, taped.xnext);
  t.backward(loss);
  const double* g = t.adjoint_data(xv);
  for (int i = 0; i < 2; ++i) {
    const double h = 1e-6;
    Vec xp = x0, xm = x0;
    xp[i] += h;
    xm[i] -= h;
    double op[2], om[2];
    dynamics::coarse_step(tab, *prob, xp.data(), a0.data(), dt, p, op);
    dynamics::coarse_step(tab, *prob, xm.data(), a0.data(), dt, p, om);
    double fd = (op[0] * op[0] + op[1] * op[1] - om[0] * om[0] -
                 om[1] * om[1]) /
                (2.0 * h);
    CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
  }
}

}  // TEST_SUITE
