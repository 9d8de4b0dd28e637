#include <cmath>
#include <functional>

#include "doctest.h"
#include "frontnet/autodiff/tape.hpp"

using namespace frontnet;

namespace {

using Builder = std::function<ad::Var(ad::Tape&, ad::Var)>;

double eval_at(const Builder& f, const Vec& x) {
  ad::Tape t;
  ad::Var y = f(t, t.input(x));
  return t.value(y);
}

// max relative deviation between reverse-mode and central differences
double fd_worst(const Builder& f, const Vec& x0, double h = 1e-6) {
  ad::Tape t;
  ad::Var x = t.input(x0);
  ad::Var y = f(t, x);
  REQUIRE(y.dim == 1);
  t.backward(y);
  const double* gp = t.adjoint_data(x);
  Vec g(gp, gp + x0.size());

  double worst = 0.0;
  for (size_t i = 0; i < x0.size(); ++i) {
    Vec xp = x0, xm = x0;
    xp[i] += h;
    xm[i] -= h;
    double fd = (eval_at(f, xp) - eval_at(f, xm)) / (2.0 * h);
    double denom = std::max({std::fabs(fd), std::fabs(g[i]), 1e-8});
    worst = std::max(worst, std::fabs(fd - g[i]) / denom);
  }
  return worst;
}

}  // namespace

TEST_SUITE("autodiff") {

TEST_CASE("scalar arithmetic forward values") {
  ad::Tape t;
  ad::Var a = t.constant(3.0), b = t.constant(-2.0);
  CHECK(t.value(t.add(a, b)) == 1.0);
  CHECK(t.value(t.sub(a, b)) == 5.0);
  CHECK(t.value(t.mul(a, b)) == -6.0);
  CHECK(t.value(t.div(a, b)) == -1.5);
  CHECK(t.value(t.neg(b)) == 2.0);
  CHECK(t.value(t.abs(b)) == 2.0);
  CHECK(t.value(t.sqrt(t.constant(9.0))) == 3.0);
  CHECK(t.value(t.max(a, b)) == 3.0);
  CHECK(t.value(t.min(a, b)) == -2.0);
  CHECK(t.value(t.add_const(a, 0.5)) == 3.5);
  CHECK(t.value(t.mul_const(a, -2.0)) == -6.0);
}

TEST_CASE("gradients of smooth composites match finite differences") {
  // inputs kept away from the kinks of abs/max/min/relu
  Vec x0 = {0.7, -1.3, 2.1};
  auto cases = std::vector<Builder>{
      [](ad::Tape& t, ad::Var x) {
        ad::Var a = t.element(x, 0), b = t.element(x, 1), c = t.element(x, 2);
        return t.mul(t.add(a, b), t.sub(c, b));
      },
      [](ad::Tape& t, ad::Var x) {
        ad::Var a = t.element(x, 0), c = t.element(x, 2);
        return t.div(a, c);
      },
      [](ad::Tape& t, ad::Var x) { return t.sqrt(t.dot(x, x)); },
      [](ad::Tape& t, ad::Var x) {
        return t.abs(t.element(x, 1));
      },
      [](ad::Tape& t, ad::Var x) {
        ad::Var a = t.element(x, 0), b = t.element(x, 1);
        return t.max(a, b);
      },
      [](ad::Tape& t, ad::Var x) {
        ad::Var a = t.element(x, 0), b = t.element(x, 1);
        return t.min(t.mul(a, a), b);
      },
      [](ad::Tape& t, ad::Var x) {
        ad::Var s = t.dot(x, x);
        return t.div(t.constant(1.0), t.add_const(s, 1.0));
      },
      [](ad::Tape& t, ad::Var x) {
        ad::Var r = t.relu(x);
        return t.dot(r, r);
      },
      [](ad::Tape& t, ad::Var x) {
        ad::Var s = t.sigmoid(x);
        return t.element(s, 2);
      },
      [](ad::Tape& t, ad::Var x) {
        ad::Var s = t.tanh(x);
        return t.dot(s, s);
      },
      [](ad::Tape& t, ad::Var x) {
        Vec base = {0.3, -0.4, 0.0};
        ad::Var l = t.lincomb(base, std::vector<ad::Var>{x},
                              std::vector<double>{1.5});
        return t.dot(l, x);
      },
      [](ad::Tape& t, ad::Var x) {
        ad::Var l = t.lincomb(std::vector<ad::Var>{x, x},
                              std::vector<double>{2.0, -0.5});
        return t.element(l, 1);
      },
      [](ad::Tape& t, ad::Var x) {
        std::vector<ad::Var> parts = {t.element(x, 2), t.element(x, 0)};
        ad::Var p = t.pack(parts);
        return t.dot(p, p);
      },
      [](ad::Tape& t, ad::Var x) {
        ad::Var s = t.element(x, 0);
        ad::Var v = t.scale(s, x);
        return t.element(v, 1);
      },
  };
  for (size_t i = 0; i < cases.size(); ++i) {
    CAPTURE(i);
    CHECK(fd_worst(cases[i], x0) < 1e-4);
  }
}

TEST_CASE("affine layer gradients, both input and weight side") {
  // 2x(3+1) weight block, bias in the last column
  Vec W = {0.2, -0.5, 0.8, 0.1, 1.5, 0.4, -0.3, -0.2};
  Vec x0 = {0.6, -0.9, 1.2};

  Builder f = [&](ad::Tape& t, ad::Var x) {
    ad::Var y = t.affine(W.data(), 2, 4, x, nullptr);
    return t.dot(y, y);
  };
  CHECK(fd_worst(f, x0) < 1e-4);

  // weight gradient against finite differences in W
  Vec wgrad(W.size(), 0.0);
  {
    ad::Tape t;
    ad::Var x = t.input(x0);
    ad::Var y = t.affine(W.data(), 2, 4, x, wgrad.data());
    t.backward(t.dot(y, y));
  }
  for (size_t k = 0; k < W.size(); ++k) {
    const double h = 1e-6;
    Vec Wp = W, Wm = W;
    Wp[k] += h;
    Wm[k] -= h;
    auto val = [&](const Vec& Wx) {
      ad::Tape t;
      ad::Var x = t.input(x0);
      ad::Var y = t.affine(Wx.data(), 2, 4, x, nullptr);
      return t.value(t.dot(y, y));
    };
    double fd = (val(Wp) - val(Wm)) / (2.0 * h);
    CHECK(std::fabs(fd - wgrad[k]) < 1e-5 * std::max(1.0, std::fabs(fd)));
  }
}

TEST_CASE("kink conventions pick the stated subgradients") {
  ad::Tape t;
  Vec z = {0.0};
  ad::Var x = t.input(z);
  ad::Var e = t.element(x, 0);

  SUBCASE("relu at zero") {
    t.backward(t.element(t.relu(x), 0));
    CHECK(t.adjoint_data(x)[0] == 0.0);
  }
  SUBCASE("abs at zero") {
    t.backward(t.abs(e));
    CHECK(t.adjoint_data(x)[0] == 0.0);
  }
  SUBCASE("sqrt at zero") {
    t.backward(t.sqrt(e));
    CHECK(t.adjoint_data(x)[0] == 0.0);
  }
}

TEST_CASE("ties in max and min route the gradient to the first argument") {
  Vec z = {1.4, 1.4};
  {
    ad::Tape t;
    ad::Var x = t.input(z);
    t.backward(t.max(t.element(x, 0), t.element(x, 1)));
    CHECK(t.adjoint_data(x)[0] == 1.0);
    CHECK(t.adjoint_data(x)[1] == 0.0);
  }
  {
    ad::Tape t;
    ad::Var x = t.input(z);
    t.backward(t.min(t.element(x, 0), t.element(x, 1)));
    CHECK(t.adjoint_data(x)[0] == 1.0);
    CHECK(t.adjoint_data(x)[1] == 0.0);
  }
}

TEST_CASE("max of obstacle and value routes each sample to one branch") {
  // with g != v the loser's adjoint stays exactly zero
  Vec z = {0.3, 0.9};
  ad::Tape t;
  ad::Var x = t.input(z);
  ad::Var g = t.element(x, 0), v = t.element(x, 1);
  t.backward(t.max(g, v));
  CHECK(t.adjoint_data(x)[0] == 0.0);
  CHECK(t.adjoint_data(x)[1] == 1.0);
}

TEST_CASE("domain violations throw") {
  ad::Tape t;
  ad::Var a = t.constant(1.0), zero = t.constant(0.0);
  CHECK_THROWS_AS(t.div(a, zero), numeric_error);
  CHECK_THROWS_AS(t.sqrt(t.constant(-1.0)), numeric_error);
}

TEST_CASE("clear resets the tape for reuse") {
  ad::Tape t;
  for (int round = 0; round < 3; ++round) {
    t.clear();
    Vec z = {2.0, -1.0};
    ad::Var x = t.input(z);
    ad::Var y = t.dot(x, x);
    CHECK(t.value(y) == doctest::Approx(5.0));
    t.backward(y);
    CHECK(t.adjoint_data(x)[0] == doctest::Approx(4.0));
  }
}

}  // TEST_SUITE
