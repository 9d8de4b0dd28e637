#include <cmath>

#include "doctest.h"
#include "frontnet/metrics/contour.hpp"
#include "frontnet/metrics/errors.hpp"

using namespace frontnet;
using namespace frontnet::metrics;

namespace {

ReferenceGrid plane_grid(double rmax, int n) {
  problems::PlaneDefaults pl;
  pl.w1 = {1.0, 0.0};
  pl.w2 = {0.0, 1.0};
  pl.center = {0.0, 0.0};
  pl.rmax = rmax;
  return ReferenceGrid::from_plane(pl, n);
}

Vec sample(const ReferenceGrid& g, double (*f)(double, double)) {
  Vec v(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      v[static_cast<size_t>(i) * g.n + j] = f(g.coord(i), g.coord(j));
  return v;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("grid spans the plane symmetrically") {
  ReferenceGrid g = plane_grid(2.0, 201);
  CHECK(g.coord(0) == doctest::Approx(-2.0));
  CHECK(g.coord(200) == doctest::Approx(2.0));
  CHECK(g.coord(100) == doctest::Approx(0.0));
  double x[2];
  g.point(0, 200, x);
  CHECK(x[0] == doctest::Approx(-2.0));
  CHECK(x[1] == doctest::Approx(2.0));
  CHECK(g.size() == 201u * 201u);
}

TEST_CASE("a constant offset shows up identically in every error column") {
  ReferenceGrid g = plane_grid(2.0, 51);
  Vec ref = sample(g, [](double a, double b) {
    return std::sqrt(a * a + b * b) - 1.0;
  });
  Vec shifted = ref;
  for (double& v : shifted) v += 0.1;
  ErrorStats s = compute_errors(shifted, ref, 0.1);
  CHECK(s.global_linf == doctest::Approx(0.1));
  CHECK(s.global_l1 == doctest::Approx(0.1));
  CHECK(s.local_linf == doctest::Approx(0.1));
  CHECK(s.local_l1 == doctest::Approx(0.1));
  CHECK(s.local_count > 0);
  CHECK(s.local_count < g.size());
}

TEST_CASE("identical fields have zero error, band rules are enforced") {
  ReferenceGrid g = plane_grid(1.0, 21);
  Vec ref = sample(g, [](double a, double b) { return a + b; });
  ErrorStats s = compute_errors(ref, ref, 0.5);
  CHECK(s.global_linf == 0.0);
  CHECK(s.global_l1 == 0.0);
  CHECK(s.local_linf == 0.0);
  CHECK(s.local_l1 == 0.0);
  // a reference bounded away from zero leaves the band empty: must refuse
  Vec far = sample(g, [](double a, double b) { return a + b + 5.0; });
  CHECK_THROWS_AS(compute_errors(far, far, 0.5), numeric_error);

  // an infinite band folds local onto global
  Vec off = ref;
  off[0] += 1.0;
  ErrorStats w = compute_errors(off, ref,
                                std::numeric_limits<double>::infinity());
  CHECK(w.local_linf == w.global_linf);
  CHECK(w.local_l1 == w.global_l1);
  CHECK(w.local_count == g.size());
}

TEST_CASE("mismatched or empty fields are rejected") {
  Vec a = {1.0, 2.0}, b = {1.0};
  CHECK_THROWS_AS(compute_errors(a, b, 0.1), config_error);
  Vec e;
  CHECK_THROWS_AS(compute_errors(e, e, 0.1), config_error);
}

TEST_CASE("circle field traces one closed loop of the right radius") {
  ReferenceGrid g = plane_grid(2.0, 101);
  Vec field = sample(g, [](double a, double b) {
    return std::sqrt(a * a + b * b) - 1.0;
  });
  auto polys = zero_contours(g, field);
  REQUIRE(polys.size() == 1);
  const auto& loop = polys[0];
  CHECK(loop.size() > 50);
  CHECK(loop.front() == loop.back());  // closed
  const double cell = 4.0 / 100.0;
  for (const auto& pt : loop) {
    double r = std::sqrt(pt[0] * pt[0] + pt[1] * pt[1]);
    CHECK(std::fabs(r - 1.0) < cell);
  }
}

TEST_CASE("vertical line field yields one straight polyline") {
  ReferenceGrid g = plane_grid(1.0, 41);
  Vec field = sample(g, [](double a, double) { return a - 0.25; });
  auto polys = zero_contours(g, field);
  REQUIRE(polys.size() == 1);
  for (const auto& pt : polys[0]) CHECK(pt[0] == doctest::Approx(0.25));
  // spans the whole plane top to bottom
  CHECK(polys[0].size() == 41u);
}

TEST_CASE("saddle cells split consistently by the center sample") {
  // f = a*b has a saddle at the origin; the center rule gives two arcs
  ReferenceGrid g = plane_grid(1.0, 2);  // a single cell around the saddle
  Vec field = {+1.0, -1.0,   // (a=-1, b=-1), (a=-1, b=+1)
               -1.0, +1.0};  // (a=+1, b=-1), (a=+1, b=+1)
  // center average is 0, counted positive: arcs connect the + corners' sides
  auto polys = zero_contours(g, field);
  CHECK(polys.size() == 2);
  for (const auto& p : polys) CHECK(p.size() == 2u);
}

TEST_CASE("nested fronts come out as separate polylines") {
  ReferenceGrid g = plane_grid(2.0, 81);
  // annulus: negative between radius 0.5 and 1.5
  Vec field = sample(g, [](double a, double b) {
    double r = std::sqrt(a * a + b * b);
    return std::fabs(r - 1.0) - 0.5;
  });
  auto polys = zero_contours(g, field);
  CHECK(polys.size() == 2);
}

}  // TEST_SUITE
