#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mfb/bundle.hpp"
#include "mfb/chart.hpp"
#include "mfb/field.hpp"

namespace mfb {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// A fully described verification scene: manifold, metric, optional bundle,
// declared Killing fields, sampling region and expectations the suites check.
struct Scenario {
  std::string name;
  ChartManifold manifold;
  MetricField metric;
  std::optional<MultiFiberBundle> bundle;
  std::vector<TensorFieldSpec> killing;

  std::string sample_chart;
  Box sample_box;  // random sampling window inside the chart domain
  VecD future_ref; // future-pointing reference vector (sample chart components)
  std::map<std::string, double> tolerances;

  bool expect_flat = false;
  bool potential_is_killing = false;  // Y is expected to be Killing here
  bool average_scenario = false;      // metric averaging applies
  bool reference_dynamics = false;    // run the full trajectory battery
  double kk_field_strength = 1.0;

  double tol(const std::string& name, double fallback) const {
    auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
  }
};

inline std::vector<ManifoldPoint> draw_samples(const Scenario& sc, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<ManifoldPoint> out;
  const Box& b = sc.sample_box;
  for (int k = 0; k < count; ++k) {
    VecD c(b.lo.size());
    for (size_t i = 0; i < b.lo.size(); ++i) c[i] = b.lo[i] + U(rng) * (b.hi[i] - b.lo[i]);
    out.push_back({sc.sample_chart, c});
  }
  return out;
}

// ---- factor manifolds -----------------------------------------------------

// S^1 as two angle charts with wrap transitions.
inline ChartManifold make_circle() {
  ChartManifold m;
  m.name = "S1";
  Chart a;
  a.id = "angle";
  a.dim = 1;
  a.domain = {{-kPi}, {kPi}};
  a.periods = {kTwoPi};
  Chart b;
  b.id = "angle2";
  b.dim = 1;
  b.domain = {{0.0}, {kTwoPi}};
  b.periods = {kTwoPi};
  m.charts = {a, b};
  auto shift_into = [](double lo, double period) {
    return SmoothMap::make<3>(1, 1, [lo, period](const auto& u) {
      using S = typename std::decay_t<decltype(u)>::value_type;
      return Vec<S>{wrap_periodic(u[0], lo, period)};
    });
  };
  m.transitions.push_back({"angle", "angle2", shift_into(0.0, kTwoPi), {{-2.0}, {1.0}, {3.0}}});
  m.transitions.push_back({"angle2", "angle", shift_into(-kPi, kTwoPi), {{1.0}, {4.0}, {6.0}}});
  return m;
}

// A single zero-dimensional chart (the trivial W factor).
inline ChartManifold make_point() {
  ChartManifold m;
  m.name = "pt";
  Chart c;
  c.id = "pt";
  c.dim = 0;
  m.charts = {c};
  return m;
}

// S^3 as the two stereographic charts, transition w -> w/|w|^2.
inline ChartManifold make_sphere3() {
  ChartManifold m;
  m.name = "S3";
  auto mk = [](std::string id) {
    Chart c;
    c.id = std::move(id);
    c.dim = 3;
    c.domain = Box::cube(3, 4.0);
    c.periods = {0, 0, 0};
    return c;
  };
  m.charts = {mk("north"), mk("south")};
  auto invert = SmoothMap::make<3>(3, 3, [](const auto& w) {
    using S = typename std::decay_t<decltype(w)>::value_type;
    S r2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    return Vec<S>{w[0] / r2, w[1] / r2, w[2] / r2};
  });
  std::vector<VecD> overlap = {{0.5, 0.1, -0.3}, {1.0, 1.0, 0.5}, {-0.7, 0.4, 0.9}, {0.3, -0.3, 0.3}};
  m.transitions.push_back({"north", "south", invert, overlap});
  m.transitions.push_back({"south", "north", invert, overlap});
  return m;
}

inline ChartManifold make_line(const std::string& name, int dim, double half = kUnbounded) {
  ChartManifold m;
  m.name = name;
  Chart c;
  c.id = "base";
  c.dim = dim;
  c.domain = half >= kUnbounded ? Box::unbounded(dim) : Box::cube(dim, half);
  c.periods.assign(dim, 0.0);
  m.charts = {c};
  return m;
}

inline TensorFieldSpec const_vector_field(const std::string& chart, int dim, VecD comps) {
  return vector_field(chart, dim,
                      SmoothMap::make<3>(dim, dim, [comps](const auto& x) {
                        using S = typename std::decay_t<decltype(x)>::value_type;
                        return detail::lift<S>(comps);
                      }));
}

namespace detail {

// total chart (t,x,y,z,u): base slots then the fiber circle
inline Chart kk_total_chart(double box_half) {
  Chart c;
  c.id = "main";
  c.dim = 5;
  c.domain.lo = {-box_half, -box_half, -box_half, -box_half, -kPi};
  c.domain.hi = {box_half, box_half, box_half, box_half, kPi};
  c.periods = {0, 0, 0, 0, kTwoPi};
  return c;
}

// product-projection bundle maps: first bd coords to the base, then sd, wd
inline BundleMaps product_maps(const std::string& chart, int bd, int sd, int wd,
                               const std::string& base_chart, const std::string& s_chart,
                               const std::string& w_chart) {
  BundleMaps bm;
  bm.chart = chart;
  bm.region = Box::unbounded(bd + sd + wd);
  bm.base_chart = base_chart;
  bm.s_chart = s_chart;
  bm.w_chart = w_chart;
  const int n = bd + sd + wd;
  bm.pi = SmoothMap::make<3>(n, bd, [bd](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::value_type;
    return Vec<S>(x.begin(), x.begin() + bd);
  });
  bm.h = SmoothMap::make<3>(n, sd, [bd, sd](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::value_type;
    return Vec<S>(x.begin() + bd, x.begin() + bd + sd);
  });
  bm.f = SmoothMap::make<3>(n, wd, [bd, sd, wd](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::value_type;
    return Vec<S>(x.begin() + bd + sd, x.begin() + bd + sd + wd);
  });
  bm.phi_inv = SmoothMap::make<3>(n, n, [](const auto& a) { return a; });
  return bm;
}

}  // namespace detail

// ---- built-in scenarios ----------------------------------------------------

// diag(-1,1,1,1,-1) on R^{1,3} x S^1
inline Scenario builtin_minkowski5() {
  Scenario sc;
  sc.name = "minkowski5";
  sc.manifold.name = "minkowski5";
  sc.manifold.charts = {detail::kk_total_chart(50.0)};

  sc.metric.tensor = two_cov_field("main", 5,
      SmoothMap::make<3>(5, 25, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        Vec<S> g(25, S(0.0));
        g[0] = S(-1.0);
        g[6] = S(1.0);
        g[12] = S(1.0);
        g[18] = S(1.0);
        g[24] = S(-1.0);
        return g;
      }));
  sc.metric.signature = {-1, 1, 1, 1, -1};

  MultiFiberBundle b;
  b.base = make_line("base4", 4);
  b.S = make_circle();
  b.W = make_point();
  b.base_dim = 4;
  b.s_dim = 1;
  b.w_dim = 0;
  b.maps = {detail::product_maps("main", 4, 1, 0, "base", "angle", "pt")};
  b.trivializations = {{"main", Box::unbounded(5)}};
  b.fiber_coords = {4};
  sc.bundle = b;

  sc.killing = {const_vector_field("main", 5, {1, 0, 0, 0, 0}),
                const_vector_field("main", 5, {0, 0, 0, 0, 1})};
  sc.sample_chart = "main";
  sc.sample_box.lo = {-2, -2, -2, -2, -3};
  sc.sample_box.hi = {2, 2, 2, 2, 3};
  sc.future_ref = {1, 0, 0, 0, 0};
  sc.expect_flat = true;
  sc.potential_is_killing = true;
  return sc;
}

// eta_{mu nu} dx^mu dx^nu - (du + B x dy)^2
inline Scenario builtin_flat_kk(double B = 1.0) {
  Scenario sc;
  sc.name = "flat_kk";
  sc.manifold.name = "flat_kk";
  sc.manifold.charts = {detail::kk_total_chart(50.0)};

  sc.metric.tensor = two_cov_field("main", 5,
      SmoothMap::make<3>(5, 25, [B](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        Vec<S> g(25, S(0.0));
        S A = B * x[1];  // A_y = B x
        g[0 * 5 + 0] = S(-1.0);
        g[1 * 5 + 1] = S(1.0);
        g[2 * 5 + 2] = S(1.0) - A * A;
        g[3 * 5 + 3] = S(1.0);
        g[4 * 5 + 4] = S(-1.0);
        g[2 * 5 + 4] = -A;
        g[4 * 5 + 2] = -A;
        return g;
      }));
  sc.metric.signature = {-1, 1, 1, 1, -1};

  MultiFiberBundle b;
  b.base = make_line("base4", 4);
  b.S = make_circle();
  b.W = make_point();
  b.base_dim = 4;
  b.s_dim = 1;
  b.w_dim = 0;
  b.maps = {detail::product_maps("main", 4, 1, 0, "base", "angle", "pt")};
  b.trivializations = {{"main", Box::unbounded(5)}};
  b.fiber_coords = {4};
  sc.bundle = b;

  sc.killing = {const_vector_field("main", 5, {1, 0, 0, 0, 0}),
                const_vector_field("main", 5, {0, 0, 1, 0, 0}),
                const_vector_field("main", 5, {0, 0, 0, 1, 0}),
                const_vector_field("main", 5, {0, 0, 0, 0, 1})};
  sc.sample_chart = "main";
  sc.sample_box.lo = {-1.5, -1.5, -1.5, -1.5, -3};
  sc.sample_box.hi = {1.5, 1.5, 1.5, 1.5, 3};
  sc.future_ref = {1, 0, 0, 0, 0};
  sc.potential_is_killing = true;
  sc.reference_dynamics = true;
  sc.kk_field_strength = B;
  return sc;
}

// warped Lorentzian base with an x-dependent potential, Y = d_u still Killing
inline Scenario builtin_warped_kk() {
  Scenario sc;
  sc.name = "warped_kk";
  sc.manifold.name = "warped_kk";
  sc.manifold.charts = {detail::kk_total_chart(50.0)};

  sc.metric.tensor = two_cov_field("main", 5,
      SmoothMap::make<3>(5, 25, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        using std::sin;
        using std::cos;
        Vec<S> g(25, S(0.0));
        S A = 0.3 * sin(x[1]);  // A_y
        g[0 * 5 + 0] = S(-1.0) - 0.25 * sin(x[1]);
        g[1 * 5 + 1] = S(1.0);
        g[2 * 5 + 2] = S(1.0) + 0.25 * cos(x[1]) - A * A;
        g[3 * 5 + 3] = S(1.0);
        g[4 * 5 + 4] = S(-1.0);
        g[2 * 5 + 4] = -A;
        g[4 * 5 + 2] = -A;
        return g;
      }));
  sc.metric.signature = {-1, 1, 1, 1, -1};

  MultiFiberBundle b;
  b.base = make_line("base4", 4);
  b.S = make_circle();
  b.W = make_point();
  b.base_dim = 4;
  b.s_dim = 1;
  b.w_dim = 0;
  b.maps = {detail::product_maps("main", 4, 1, 0, "base", "angle", "pt")};
  b.trivializations = {{"main", Box::unbounded(5)}};
  b.fiber_coords = {4};
  sc.bundle = b;

  sc.killing = {const_vector_field("main", 5, {1, 0, 0, 0, 0}),
                const_vector_field("main", 5, {0, 0, 0, 0, 1})};
  sc.sample_chart = "main";
  sc.sample_box.lo = {-1.5, -1.5, -1.5, -1.5, -3};
  sc.sample_box.hi = {1.5, 1.5, 1.5, 1.5, 3};
  sc.future_ref = {1, 0, 0, 0, 0};
  sc.potential_is_killing = true;
  return sc;
}

// R^{1,3} x S^1 x S^3 with the round unit 3-sphere on the W factor
inline Scenario builtin_product_r13_s1_s3() {
  Scenario sc;
  sc.name = "product_r13_s1_s3";
  sc.manifold.name = "product_r13_s1_s3";
  Chart c;
  c.id = "main";
  c.dim = 8;
  c.domain.lo = {-50, -50, -50, -50, -kPi, -4, -4, -4};
  c.domain.hi = {50, 50, 50, 50, kPi, 4, 4, 4};
  c.periods = {0, 0, 0, 0, kTwoPi, 0, 0, 0};
  sc.manifold.charts = {c};

  sc.metric.tensor = two_cov_field("main", 8,
      SmoothMap::make<3>(8, 64, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        Vec<S> g(64, S(0.0));
        g[0 * 8 + 0] = S(-1.0);
        g[1 * 8 + 1] = S(1.0);
        g[2 * 8 + 2] = S(1.0);
        g[3 * 8 + 3] = S(1.0);
        g[4 * 8 + 4] = S(-1.0);
        S r2 = x[5] * x[5] + x[6] * x[6] + x[7] * x[7];
        S den = S(1.0) + r2;
        S conf = 4.0 / (den * den);
        g[5 * 8 + 5] = conf;
        g[6 * 8 + 6] = conf;
        g[7 * 8 + 7] = conf;
        return g;
      }));
  sc.metric.signature = {-1, 1, 1, 1, -1, 1, 1, 1};

  MultiFiberBundle b;
  b.base = make_line("base4", 4);
  b.S = make_circle();
  b.W = make_sphere3();
  b.base_dim = 4;
  b.s_dim = 1;
  b.w_dim = 3;
  b.maps = {detail::product_maps("main", 4, 1, 3, "base", "angle", "north")};
  b.trivializations = {{"main", Box::unbounded(8)}};
  b.fiber_coords = {4, 5, 6, 7};
  sc.bundle = b;

  sc.killing = {const_vector_field("main", 8, {1, 0, 0, 0, 0, 0, 0, 0}),
                const_vector_field("main", 8, {0, 0, 0, 0, 1, 0, 0, 0})};
  sc.sample_chart = "main";
  sc.sample_box.lo = {-1.5, -1.5, -1.5, -1.5, -3, -0.8, -0.8, -0.8};
  sc.sample_box.hi = {1.5, 1.5, 1.5, 1.5, 3, 0.8, 0.8, 0.8};
  sc.future_ref = {1, 0, 0, 0, 0, 0, 0, 0};
  sc.potential_is_killing = true;
  return sc;
}

// (x, u) with g_xx = 1 + 0.3 sin(u): Y = d_u is not Killing until averaged
inline Scenario builtin_u_periodic() {
  Scenario sc;
  sc.name = "u_periodic";
  sc.manifold.name = "u_periodic";
  Chart c;
  c.id = "main";
  c.dim = 2;
  c.domain.lo = {-50, -kPi};
  c.domain.hi = {50, kPi};
  c.periods = {0, kTwoPi};
  sc.manifold.charts = {c};

  sc.metric.tensor = two_cov_field("main", 2,
      SmoothMap::make<3>(2, 4, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        using std::sin;
        Vec<S> g(4, S(0.0));
        g[0] = S(1.0) + 0.3 * sin(x[1]);
        g[3] = S(-1.0);
        return g;
      }));
  sc.metric.signature = {1, -1};

  MultiFiberBundle b;
  b.base = make_line("base1", 1);
  b.S = make_circle();
  b.W = make_point();
  b.base_dim = 1;
  b.s_dim = 1;
  b.w_dim = 0;
  b.maps = {detail::product_maps("main", 1, 1, 0, "base", "angle", "pt")};
  b.trivializations = {{"main", Box::unbounded(2)}};
  b.fiber_coords = {1};
  sc.bundle = b;

  sc.sample_chart = "main";
  sc.sample_box.lo = {-2, -3};
  sc.sample_box.hi = {2, 3};
  sc.future_ref = {0, 1};
  sc.average_scenario = true;
  return sc;
}

// (b, u, w): Phi rotates the (w1, w2) pair by 0.7 b + u, so the S-fibers are
// twisted circles rather than coordinate circles.
inline Scenario builtin_twisted_phi() {
  Scenario sc;
  sc.name = "twisted_phi";
  sc.manifold.name = "twisted_phi";
  Chart c;
  c.id = "main";
  c.dim = 5;
  c.domain.lo = {-2.5, -kPi, -0.6, -0.6, -0.6};
  c.domain.hi = {2.5, kPi, 0.6, 0.6, 0.6};
  c.periods = {0, kTwoPi, 0, 0, 0};
  sc.manifold.charts = {c};

  sc.metric.tensor = two_cov_field("main", 5,
      SmoothMap::make<3>(5, 25, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        Vec<S> g(25, S(0.0));
        g[0] = S(1.0);
        g[6] = S(-1.0);
        S r2 = x[2] * x[2] + x[3] * x[3] + x[4] * x[4];
        S den = S(1.0) + r2;
        S conf = 4.0 / (den * den);
        g[12] = conf;
        g[18] = conf;
        g[24] = conf;
        return g;
      }));
  sc.metric.signature = {1, -1, 1, 1, 1};

  MultiFiberBundle b;
  b.base = make_line("base1", 1);
  b.S = make_circle();
  b.W = make_sphere3();
  b.base_dim = 1;
  b.s_dim = 1;
  b.w_dim = 3;

  BundleMaps bm;
  bm.chart = "main";
  bm.region = Box::unbounded(5);
  bm.base_chart = "base";
  bm.s_chart = "angle";
  bm.w_chart = "north";
  bm.pi = SmoothMap::make<3>(5, 1, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::value_type;
    return Vec<S>{x[0]};
  });
  bm.h = SmoothMap::make<3>(5, 1, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::value_type;
    return Vec<S>{x[1]};
  });
  bm.f = SmoothMap::make<3>(5, 3, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::value_type;
    using std::sin;
    using std::cos;
    S phi = 0.7 * x[0] + x[1];
    S cph = cos(phi), sph = sin(phi);
    return Vec<S>{cph * x[2] - sph * x[3], sph * x[2] + cph * x[3], x[4]};
  });
  bm.phi_inv = SmoothMap::make<3>(5, 5, [](const auto& a) {
    using S = typename std::decay_t<decltype(a)>::value_type;
    using std::sin;
    using std::cos;
    // a = (b, s, v1, v2, v3)
    S phi = 0.7 * a[0] + a[1];
    S cph = cos(phi), sph = sin(phi);
    return Vec<S>{a[0], a[1], cph * a[2] + sph * a[3], -sph * a[2] + cph * a[3], a[4]};
  });
  b.maps = {bm};
  Box t1 = Box::unbounded(5);
  t1.lo[0] = -2.5;
  t1.hi[0] = 0.5;
  Box t2 = Box::unbounded(5);
  t2.lo[0] = -0.5;
  t2.hi[0] = 2.5;
  b.trivializations = {{"main", t1}, {"main", t2}};
  sc.bundle = b;

  sc.sample_chart = "main";
  sc.sample_box.lo = {-2, -3, -0.35, -0.35, -0.35};
  sc.sample_box.hi = {2, 3, 0.35, 0.35, 0.35};
  sc.future_ref = {0, 1, 0, 0, 0};
  return sc;
}

inline Scenario builtin_scenario(const std::string& name) {
  if (name == "minkowski5") return builtin_minkowski5();
  if (name == "flat_kk") return builtin_flat_kk();
  if (name == "warped_kk") return builtin_warped_kk();
  if (name == "product_r13_s1_s3") return builtin_product_r13_s1_s3();
  if (name == "u_periodic") return builtin_u_periodic();
  if (name == "twisted_phi") return builtin_twisted_phi();
  throw ParseError("unknown built-in scenario \"" + name + "\"");
}

inline bool is_builtin_scenario(const std::string& name) {
  return name == "minkowski5" || name == "flat_kk" || name == "warped_kk" ||
         name == "product_r13_s1_s3" || name == "u_periodic" || name == "twisted_phi";
}

}  // namespace mfb
