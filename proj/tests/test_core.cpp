#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mfb/dual.hpp"
#include "mfb/expr.hpp"
#include "mfb/linalg.hpp"
#include "mfb/smooth.hpp"

using namespace mfb;

namespace {

// independent central-difference oracle for first derivatives
template <class F>
double fd1(F f, VecD x, int i, double h = 1e-5) {
  VecD xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (f(xp) - f(xm)) / (2 * h);
}

double test_fn(const VecD& x) {
  return std::sin(x[0]) * x[1] + std::exp(0.3 * x[1]) / (2.0 + std::cos(x[0])) + x[0] * x[0] * x[1];
}

template <class S>
S test_fn_generic(const Vec<S>& x) {
  using std::sin;
  using std::cos;
  using std::exp;
  return sin(x[0]) * x[1] + exp(0.3 * x[1]) / (2.0 + cos(x[0])) + x[0] * x[0] * x[1];
}

}  // namespace

TEST_CASE("dual first derivatives match finite differences") {
  VecD x = {0.7, -0.4};
  Vec<D1> xs = seed_coords(x);
  D1 r = test_fn_generic(xs);
  CHECK(r.v == Catch::Approx(test_fn(x)).margin(1e-14));
  for (int i = 0; i < 2; ++i)
    CHECK(r.d[i] == Catch::Approx(fd1(test_fn, x, i)).margin(1e-7));
}

TEST_CASE("dual derivatives of polynomials are exact") {
  // f = x^2 y + 3 x y^3: df/dx = 2xy + 3y^3, df/dy = x^2 + 9xy^2,
  // d2f/dxdy = 2x + 9y^2
  auto f = [](const auto& x) {
    using SV = typename std::decay_t<decltype(x)>::value_type;
    Vec<SV> out(1);
    out[0] = x[0] * x[0] * x[1] + 3.0 * x[0] * x[1] * x[1] * x[1];
    return out;
  };
  SmoothMap m = SmoothMap::make<2>(2, 1, f);
  VecD x = {1.3, -2.1};
  Jet2 j = eval_jet2(m, x);
  double dx = 2 * x[0] * x[1] + 3 * std::pow(x[1], 3);
  double dy = x[0] * x[0] + 9 * x[0] * x[1] * x[1];
  double dxy = 2 * x[0] + 9 * x[1] * x[1];
  CHECK(j.jac(0, 0) == Catch::Approx(dx).margin(1e-13));
  CHECK(j.jac(0, 1) == Catch::Approx(dy).margin(1e-13));
  CHECK(j.h(0, 0, 1) == Catch::Approx(dxy).margin(1e-13));
  CHECK(j.h(0, 1, 0) == Catch::Approx(dxy).margin(1e-13));
  CHECK(j.h(0, 0, 0) == Catch::Approx(2 * x[1]).margin(1e-13));
}

TEST_CASE("third-order nesting differentiates a second-derivative pipeline") {
  // g(t) = d^2/dx^2 sin(x)|_{x=t} = -sin(t); check dg/dt = -cos(t) via an
  // outer D1 around an inner jet2-style evaluation
  auto inner = [](auto x) {
    using SV = std::decay_t<decltype(x)>;
    auto xs = seed_coords2(Vec<SV>{x});
    using std::sin;
    auto r = sin(xs[0]);
    return r.d[0].d[0];  // second derivative w.r.t. the seeded slot
  };
  D1 t = seed_var(0.6, 0, 1);
  D1 g = inner(t);
  CHECK(g.v == Catch::Approx(-std::sin(0.6)).margin(1e-14));
  CHECK(g.d[0] == Catch::Approx(-std::cos(0.6)).margin(1e-14));
}

TEST_CASE("matrix inverse works at dual level and differentiates") {
  // m(t) = [[2+t, 1],[1, 3]], d/dt m^{-1} = -m^{-1} m' m^{-1}
  auto mk = [](auto t) {
    using SV = std::decay_t<decltype(t)>;
    Mat<SV> m(2, 2);
    m(0, 0) = SV(2.0) + t;
    m(0, 1) = SV(1.0);
    m(1, 0) = SV(1.0);
    m(1, 1) = SV(3.0);
    return m;
  };
  D1 t = seed_var(0.5, 0, 1);
  Mat<D1> inv = inverse(mk(t));
  MatD m0(2, 2), dm(2, 2);
  m0(0, 0) = 2.5; m0(0, 1) = 1; m0(1, 0) = 1; m0(1, 1) = 3;
  dm(0, 0) = 1;
  MatD i0 = inverse(m0);
  MatD expect = matmul(matmul(i0, dm), i0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(inv(i, j).v == Catch::Approx(i0(i, j)).margin(1e-14));
      CHECK(inv(i, j).d[0] == Catch::Approx(-expect(i, j)).margin(1e-13));
    }
}

TEST_CASE("sym_eigen and null_space behave") {
  MatD m(3, 3);
  m(0, 0) = 2; m(1, 1) = -1; m(2, 2) = 5;
  SymEigen e = sym_eigen(m);
  CHECK(e.values[0] == Catch::Approx(-1.0));
  CHECK(e.values[2] == Catch::Approx(5.0));

  MatD j(1, 3);
  j(0, 0) = 1; j(0, 1) = 1; j(0, 2) = 0;
  MatD ns = null_space(j);
  REQUIRE(ns.cols == 2);
  for (int c = 0; c < 2; ++c)
    CHECK(std::abs(ns(0, c) + ns(1, c)) < 1e-12);
}

TEST_CASE("expression grammar parses and evaluates") {
  std::vector<std::string> coords = {"x", "u"};
  Expr e = Expr::parse("1 + 0.1*sin(u) - x*x/(2 + cos(u))", coords);
  VecD x = {0.3, 0.9};
  double expect = 1 + 0.1 * std::sin(0.9) - 0.09 / (2 + std::cos(0.9));
  CHECK(e.eval<double>(x) == Catch::Approx(expect).margin(1e-15));

  // dual evaluation gives the u-derivative
  Vec<D1> xs = seed_coords(x);
  D1 r = e.eval<D1>(xs);
  double du = 0.1 * std::cos(0.9) - 0.09 * std::sin(0.9) / std::pow(2 + std::cos(0.9), 2);
  CHECK(r.d[1] == Catch::Approx(du).margin(1e-13));
}

TEST_CASE("expression errors carry position and token") {
  std::vector<std::string> coords = {"x"};
  CHECK_THROWS_AS(Expr::parse("x + tan(x)", coords), ParseError);
  CHECK_THROWS_AS(Expr::parse("x + ", coords), ParseError);
  CHECK_THROWS_AS(Expr::parse("(x + 1", coords), ParseError);
  try {
    Expr::parse("x + blob", coords);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(std::string(err.what()).find("blob") != std::string::npos);
    CHECK(std::string(err.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("smooth map refuses levels above its cap") {
  auto f = [](const auto& x) { return x; };
  SmoothMap m = SmoothMap::make<1>(2, 2, f);
  VecD x = {1.0, 2.0};
  CHECK_NOTHROW(m(x));
  CHECK_NOTHROW(m(seed_coords(x)));
  CHECK_THROWS_AS(m(seed_coords2(x)), Error);
}
