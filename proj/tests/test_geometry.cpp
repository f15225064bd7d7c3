#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mfb/curvature.hpp"
#include "mfb/field.hpp"
#include "mfb/scenario.hpp"
#include "mfb/tensor_ops.hpp"
#include "oracles.hpp"

using namespace mfb;

namespace {

// round S^2 / S^3 in a stereographic chart: g = 4 r^2 / (1 + |w|^2)^2 delta
TensorFieldSpec round_sphere_metric(const std::string& chart, int dim, double radius) {
  return two_cov_field(chart, dim,
      SmoothMap::make<3>(dim, dim * dim, [dim, radius](const auto& w) {
        using S = typename std::decay_t<decltype(w)>::value_type;
        S r2(0.0);
        for (int i = 0; i < dim; ++i) r2 = r2 + w[i] * w[i];
        S den = S(1.0) + r2;
        S conf = (4.0 * radius * radius) / (den * den);
        Vec<S> g(dim * dim, S(0.0));
        for (int i = 0; i < dim; ++i) g[i * dim + i] = conf;
        return g;
      }));
}

MetricField sphere_metric_field(int dim, double radius) {
  MetricField g;
  g.tensor = round_sphere_metric("north", dim, radius);
  g.tensor.components.emplace("south", round_sphere_metric("south", dim, radius).map_for("south"));
  g.signature.assign(dim, 1);
  return g;
}

}  // namespace

TEST_CASE("chart transitions: identity, periodic shift, stereographic round trip") {
  ChartManifold circle = make_circle();
  ManifoldPoint p{"angle", {1.2}};
  ManifoldPoint same = circle.transition(p, "angle");
  CHECK(same.coords[0] == Catch::Approx(1.2));

  // u = 3 in the (-pi, pi) window maps to 3 - 2pi in a (-2pi, 0) window
  ChartManifold shifted;
  shifted.name = "shifted-circle";
  Chart a = Chart::box_chart("a", 1, {{-kPi}, {kPi}});
  a.periods = {kTwoPi};
  Chart b = Chart::box_chart("b", 1, {{-kTwoPi}, {0.0}});
  b.periods = {kTwoPi};
  shifted.charts = {a, b};
  shifted.transitions.push_back(
      {"a", "b",
       SmoothMap::make<3>(1, 1, [](const auto& u) {
         using S = typename std::decay_t<decltype(u)>::value_type;
         return Vec<S>{wrap_periodic(u[0], -kTwoPi, kTwoPi)};
       }),
       {{3.0}, {-1.0}}});
  ManifoldPoint q = shifted.transition({"a", {3.0}}, "b");
  CHECK(q.coords[0] == Catch::Approx(3.0 - kTwoPi));

  ChartManifold s3 = make_sphere3();
  CHECK(s3.max_round_trip_error() < 1e-10);
  ManifoldPoint w{"north", {0.5, 0.1, -0.3}};
  ManifoldPoint ws = s3.transition(w, "south");
  ManifoldPoint back = s3.transition(ws, "north");
  for (int i = 0; i < 3; ++i) CHECK(back.coords[i] == Catch::Approx(w.coords[i]).margin(1e-12));

  CHECK_THROWS_AS(s3.transition({"north", {9.0, 0, 0}}, "south"), NotInOverlap);
  CHECK_THROWS_AS(s3.transition({"north", {0.5, 0.1, -0.3}}, "west"), NoTransitionPath);
}

TEST_CASE("evaluate: constant metric, sine derivative, FD agreement") {
  Scenario mink = builtin_minkowski5();
  ManifoldPoint p{"main", {0.3, -1.0, 0.5, 2.0, 0.7}};
  TensorValue v = evaluate(mink.manifold, mink.metric.tensor, p, 1);
  for (int k = 0; k < 25; ++k)
    for (int i = 0; i < 5; ++i) CHECK(std::abs(v.d1(k, i)) < 1e-15);

  // g_xx = 1 + 0.1 sin(u): d_u g_xx at u = 0 is 0.1
  Scenario up = builtin_u_periodic();
  MetricField g2;
  g2.tensor = two_cov_field("main", 2, SmoothMap::make<3>(2, 4, [](const auto& x) {
                              using S = typename std::decay_t<decltype(x)>::value_type;
                              using std::sin;
                              Vec<S> g(4, S(0.0));
                              g[0] = S(1.0) + 0.1 * sin(x[1]);
                              g[3] = S(-1.0);
                              return g;
                            }));
  g2.signature = {1, -1};
  TensorValue v2 = evaluate(up.manifold, g2.tensor, {"main", {0.4, 0.0}}, 1);
  CHECK(v2.d1(0, 1) == Catch::Approx(0.1).margin(1e-14));

  // dual first derivatives vs central differences on a smooth scenario field
  Scenario warped = builtin_warped_kk();
  ManifoldPoint q{"main", {0.2, 0.9, -0.4, 1.1, 0.3}};
  TensorValue dual = evaluate(warped.manifold, warped.metric.tensor, q, 1, DiffMethod::Dual);
  TensorValue fd = evaluate(warped.manifold, warped.metric.tensor, q, 1, DiffMethod::FiniteDifference);
  for (int k = 0; k < 25; ++k)
    for (int i = 0; i < 5; ++i)
      CHECK(dual.d1(k, i) == Catch::Approx(fd.d1(k, i)).margin(1e-7));

  CHECK_THROWS_AS(evaluate(warped.manifold, warped.metric.tensor, {"main", {99, 0, 0, 0, 0}}, 0),
                  PointOutsideDomain);
}

TEST_CASE("signature_at: spacetime product, Euclidean, degenerate") {
  Scenario prod = builtin_product_r13_s1_s3();
  ManifoldPoint p{"main", {0, 0.3, 0.1, -0.2, 0.5, 0.2, -0.1, 0.3}};
  std::vector<int> sig = sorted_signature(signature_at(prod.manifold, prod.metric, p));
  std::vector<int> expect = {-1, -1, 1, 1, 1, 1, 1, 1};
  CHECK(sig == expect);

  MatD euclid = MatD::identity(3);
  std::vector<int> s3 = signature_of(euclid);
  CHECK(s3 == std::vector<int>{1, 1, 1});

  MatD degen = MatD::identity(2);
  degen(1, 1) = 1e-14;
  CHECK_THROWS_AS(signature_of(degen), DegenerateMetric);
}

TEST_CASE("transition coherence: round-sphere metric transported between charts") {
  ChartManifold s2 = make_sphere3();  // same chart structure works for S^2? no: dims differ
  ChartManifold sphere = make_sphere3();
  MetricField g = sphere_metric_field(3, 1.0);
  // evaluate in north, transport components with the transition Jacobian,
  // compare against the south presentation
  for (const VecD& w : sphere.transitions[0].overlap_samples) {
    TensorValue north = evaluate(sphere, g.tensor, {"north", w}, 0);
    const TransitionMap* tr = sphere.find_transition("north", "south");
    Jet1 j = eval_jet1(tr->map, w);
    MatD jac_inv = inverse(j.jac);
    VecD moved = transport_components(g.tensor.variance, 3, north.comps, j.jac, jac_inv);
    TensorValue south = evaluate(sphere, g.tensor, {"south", tr->map(w)}, 0);
    for (int k = 0; k < 9; ++k) CHECK(moved[k] == Catch::Approx(south.comps[k]).margin(1e-8));
  }
}

TEST_CASE("curvature: flat, round S2, round S3 calibration") {
  Scenario mink = builtin_minkowski5();
  VecD x = {0.3, -1.0, 0.5, 2.0, 0.7};
  CurvatureBundle<double> flat = curvature(mink.metric.tensor.map_for("main"), x);
  for (double r : flat.riemann.a) CHECK(std::abs(r) < 1e-12);
  for (double e : flat.einstein.a) CHECK(std::abs(e) < 1e-12);
  for (int c = 0; c < 5; ++c)
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) CHECK(std::abs(flat.gamma(c, i, j)) < 1e-13);

  // S^2 radius 1 at the chart origin: scalar curvature 2, Einstein tensor 0
  TensorFieldSpec s2 = round_sphere_metric("north", 2, 1.0);
  CurvatureBundle<double> c2 = curvature(s2.map_for("north"), VecD{0.0, 0.0});
  CHECK(c2.scalar == Catch::Approx(2.0).margin(1e-10));
  for (double e : c2.einstein.a) CHECK(std::abs(e) < 1e-10);

  // S^3 radius 1: Ric = 2 g, S = 6, G = -g (the sign-convention anchor)
  TensorFieldSpec s3 = round_sphere_metric("north", 3, 1.0);
  for (VecD w : {VecD{0.0, 0.0, 0.0}, VecD{0.4, -0.2, 0.6}, VecD{-0.8, 0.3, 0.1}}) {
    CurvatureBundle<double> c3 = curvature(s3.map_for("north"), w);
    CHECK(c3.scalar == Catch::Approx(6.0).margin(1e-9));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(c3.ricci(i, j) == Catch::Approx(2.0 * c3.g(i, j)).margin(1e-9));
        CHECK(c3.einstein(i, j) == Catch::Approx(-c3.g(i, j)).margin(1e-9));
      }
    // constant-curvature oracle for the full lowered Riemann tensor
    Arr4<double> low = lower_riemann(c3);
    Arr4<double> expect = oracle::space_form_riemann(c3.g, 1.0);
    for (size_t k = 0; k < low.a.size(); ++k)
      CHECK(low.a[k] == Catch::Approx(expect.a[k]).margin(1e-9));
  }
}

TEST_CASE("riemann symmetries and einstein trace on a warped scenario") {
  Scenario warped = builtin_warped_kk();
  auto rng = oracle::rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    VecD x = oracle::random_vec(rng, 5, 1.2);
    CurvatureBundle<double> cb = curvature(warped.metric.tensor.map_for("main"), x);
    Arr4<double> low = lower_riemann(cb);
    const int n = 5;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            CHECK(low(a, b, c, d) == Catch::Approx(-low(a, b, d, c)).margin(1e-9));
            CHECK(low(a, b, c, d) == Catch::Approx(low(c, d, a, b)).margin(1e-9));
          }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += cb.einstein_endo(i, i);
    CHECK(tr == Catch::Approx(cb.scalar * (1.0 - n / 2.0)).margin(1e-9));
  }
}

TEST_CASE("musical: lower d_u, raise-lower identity, flat KK Y-flat") {
  Scenario kk = builtin_flat_kk();
  VecD x = {0.2, 0.8, -0.3, 1.0, 0.5};
  MetricAt m = metric_at(kk.metric, "main", x);

  VecD du = {0, 0, 0, 0, 1};
  VecD du_flat = musical(m.g, m.ginv, du, {Slot::Contravariant}, 0, false);
  // Y-flat = -(du + A_y dy), A_y = x
  CHECK(du_flat[4] == Catch::Approx(-1.0));
  CHECK(du_flat[2] == Catch::Approx(-x[1]));
  CHECK(du_flat[0] == Catch::Approx(0.0).margin(1e-15));

  auto rng = oracle::rng(5);
  VecD v = oracle::random_vec(rng, 5);
  VecD lowered = musical(m.g, m.ginv, v, {Slot::Contravariant}, 0, false);
  VecD back = musical(m.g, m.ginv, lowered, {Slot::Covariant}, 0, true);
  for (int i = 0; i < 5; ++i) CHECK(back[i] == Catch::Approx(v[i]).margin(1e-12));

  // slot-1 raise/lower on a 2-tensor round-trips as well
  VecD t = oracle::random_vec(rng, 25);
  VecD tl = musical(m.g, m.ginv, t, {Slot::Covariant, Slot::Contravariant}, 1, false);
  VecD tb = musical(m.g, m.ginv, tl, {Slot::Covariant, Slot::Covariant}, 1, true);
  for (int i = 0; i < 25; ++i) CHECK(tb[i] == Catch::Approx(t[i]).margin(1e-12));
}

TEST_CASE("divergence2: metric is parallel, Bianchi holds, FD cross-check") {
  Scenario warped = builtin_warped_kk();
  const std::string ch = "main";
  auto rng = oracle::rng(21);

  for (int trial = 0; trial < 8; ++trial) {
    VecD x = oracle::random_vec(rng, 5, 1.2);
    VecD divg = divergence2(warped.metric, warped.metric.tensor, ch, x);
    for (double c : divg) CHECK(std::abs(c) < 1e-10);
  }

  // T = G as a differentiable field; nabla . G = 0 by the Bianchi identity
  const SmoothMap& gmap = warped.metric.tensor.map_for(ch);
  TensorFieldSpec Gfield = two_cov_field(ch, 5,
      SmoothMap::make<1>(5, 25, [gmap](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        return curvature<S>(gmap, x).einstein.a;
      }));
  for (int trial = 0; trial < 5; ++trial) {
    VecD x = oracle::random_vec(rng, 5, 1.2);
    VecD divG = divergence2(warped.metric, Gfield, ch, x);
    for (double c : divG) CHECK(std::abs(c) < 1e-6);
    // finite-difference cross-check of the same divergence
    VecD divG_fd = divergence2_fd(warped.metric,
        [&](const VecD& at) {
          CurvatureBundle<double> cb = curvature(gmap, at);
          return cb.einstein;
        },
        ch, x);
    for (int i = 0; i < 5; ++i) CHECK(divG[i] - divG_fd[i] == Catch::Approx(0.0).margin(1e-4));
  }
}

TEST_CASE("divergence2 on Y tensor product in flat product scenario") {
  // T = Y (x) Y with Y-flat = -du in the plain product: divergence vanishes
  Scenario mink = builtin_minkowski5();
  TensorFieldSpec T = two_cov_field("main", 5,
      SmoothMap::make<2>(5, 25, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        Vec<S> t(25, S(0.0));
        t[4 * 5 + 4] = S(1.0);  // (-du)(x)(-du)
        return t;
      }));
  VecD x = {0.1, 0.2, 0.3, 0.4, 0.5};
  VecD d = divergence2(mink.metric, T, "main", x);
  for (double c : d) CHECK(std::abs(c) < 1e-9);
}

TEST_CASE("exterior derivative: d(df) = 0, flat KK field strength, constants") {
  Scenario kk = builtin_flat_kk();
  // omega = d f for f = x^2 u  ->  d omega = 0
  TensorFieldSpec omega = one_form_field("main", 5,
      SmoothMap::make<2>(5, 5, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        auto xs = seed_coords(x);
        auto fval = xs[1] * xs[1] * xs[4];
        Vec<S> w(5);
        for (int i = 0; i < 5; ++i) w[i] = fval.d[i];
        return w;
      }));
  VecD x = {0.5, 1.1, -0.2, 0.0, 0.9};
  MatD ddf = exterior_d_1form(omega, "main", x);
  for (double c : ddf.a) CHECK(std::abs(c) < 1e-12);

  // Y-flat = -(du + B x dy): F = dY-flat has F_xy = -B, F_yx = +B
  const double B = 1.0;
  TensorFieldSpec yflat = one_form_field("main", 5,
      SmoothMap::make<2>(5, 5, [B](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        Vec<S> w(5, S(0.0));
        w[2] = -B * x[1];
        w[4] = S(-1.0);
        return w;
      }));
  MatD F = exterior_d_1form(yflat, "main", x);
  CHECK(F(1, 2) == Catch::Approx(-B));
  CHECK(F(2, 1) == Catch::Approx(B));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (!((i == 1 && j == 2) || (i == 2 && j == 1))) CHECK(std::abs(F(i, j)) < 1e-14);

  TensorFieldSpec constant = one_form_field("main", 5,
      SmoothMap::make<2>(5, 5, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        return Vec<S>{S(0.3), S(-0.7), S(1.0), S(0.0), S(2.0)};
      }));
  MatD dc = exterior_d_1form(constant, "main", x);
  for (double c : dc.a) CHECK(c == 0.0);
}

TEST_CASE("lie derivative of the metric: Killing and non-Killing generators") {
  Scenario kk = builtin_flat_kk();
  VecD x = {0.2, 0.8, -0.3, 1.0, 0.5};
  TensorFieldSpec du = const_vector_field("main", 5, {0, 0, 0, 0, 1});
  MatD l = lie_metric(kk.metric, du, "main", x);
  for (double c : l.a) CHECK(std::abs(c) < 1e-14);

  // Euclidean plane: rotation generator is Killing, dilation is not
  MetricField plane;
  plane.tensor = two_cov_field("flat2", 2, SmoothMap::make<3>(2, 4, [](const auto& x) {
                                 using S = typename std::decay_t<decltype(x)>::value_type;
                                 Vec<S> g(4, S(0.0));
                                 g[0] = S(1.0);
                                 g[3] = S(1.0);
                                 return g;
                               }));
  plane.signature = {1, 1};
  TensorFieldSpec rot = vector_field("flat2", 2, SmoothMap::make<2>(2, 2, [](const auto& x) {
                                       using S = typename std::decay_t<decltype(x)>::value_type;
                                       return Vec<S>{-x[1], x[0]};
                                     }));
  MatD lr = lie_metric(plane, rot, "flat2", {0.7, -0.4});
  for (double c : lr.a) CHECK(std::abs(c) < 1e-12);

  TensorFieldSpec dil = vector_field("flat2", 2, SmoothMap::make<2>(2, 2, [](const auto& x) {
                                       using S = typename std::decay_t<decltype(x)>::value_type;
                                       return Vec<S>{x[0], S(0.0)};
                                     }));
  MatD ld = lie_metric(plane, dil, "flat2", {0.7, -0.4});
  CHECK(ld(0, 0) == Catch::Approx(2.0));
  CHECK(std::abs(ld(0, 1)) < 1e-14);
  CHECK(std::abs(ld(1, 1)) < 1e-14);
}

TEST_CASE("covariant acceleration: constants, Killing unit field, sphere oracle") {
  Scenario kk = builtin_flat_kk();
  VecD x = {0.2, 0.8, -0.3, 1.0, 0.5};
  TensorFieldSpec constX = const_vector_field("main", 5, {0.3, 0.2, 0.6, -0.1, 0.9});
  Scenario mink = builtin_minkowski5();
  VecD acc0 = covariant_accel(mink.metric, constX, "main", x);
  for (double c : acc0) CHECK(std::abs(c) < 1e-13);

  // Y = d_u is Killing of unit norm in flat KK, hence geodesic
  TensorFieldSpec du = const_vector_field("main", 5, {0, 0, 0, 0, 1});
  VecD accY = covariant_accel(kk.metric, du, "main", x);
  for (double c : accY) CHECK(std::abs(c) < 1e-9);

  // round S^2 in colatitude/azimuth coordinates: nabla_{d_phi} d_phi =
  // -sin(theta) cos(theta) d_theta
  MetricField sph;
  sph.tensor = two_cov_field("sph", 2, SmoothMap::make<3>(2, 4, [](const auto& x) {
                               using S = typename std::decay_t<decltype(x)>::value_type;
                               using std::sin;
                               Vec<S> g(4, S(0.0));
                               g[0] = S(1.0);
                               g[3] = sin(x[0]) * sin(x[0]);
                               return g;
                             }));
  sph.signature = {1, 1};
  TensorFieldSpec dphi = const_vector_field("sph", 2, {0, 1});
  VecD acc = covariant_accel(sph, dphi, "sph", {kPi / 4, 1.0});
  CHECK(acc[0] == Catch::Approx(-std::sin(kPi / 4) * std::cos(kPi / 4)).margin(1e-12));
  CHECK(std::abs(acc[1]) < 1e-12);
}
