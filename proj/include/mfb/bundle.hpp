#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mfb/chart.hpp"
#include "mfb/errors.hpp"
#include "mfb/field.hpp"
#include "mfb/tensor_ops.hpp"

namespace mfb {

struct Trivialization {
  std::string chart;  // total chart id
  Box region;         // validity region in that chart's coordinates
};

// The bundle maps (pi, h, f) and the fiberwise inverse of Phi, expressed in
// one total chart. phi_inv takes (base coords, s coords, w coords) stacked.
struct BundleMaps {
  std::string chart;
  Box region;  // where these maps are the authoritative presentation
  SmoothMap pi;
  std::string base_chart;
  SmoothMap h;
  std::string s_chart;
  SmoothMap f;
  std::string w_chart;
  SmoothMap phi_inv;
};

// (pi, Phi=(h,f)) over a chart manifold, with the fiber factor manifolds.
// W may be zero-dimensional (plain Kaluza-Klein circle bundles).
struct MultiFiberBundle {
  ChartManifold base;
  ChartManifold S, W;
  int base_dim = 0, s_dim = 0, w_dim = 0;
  std::vector<BundleMaps> maps;  // first region containing the point wins
  std::vector<Trivialization> trivializations;
  std::vector<int> fiber_coords;  // product-type charts: coordinate slots spanning the fiber
  int s_orientation = +1;

  const BundleMaps& maps_at(const ManifoldPoint& p) const {
    for (const auto& m : maps)
      if (m.chart == p.chart && m.region.contains(p.coords)) return m;
    throw Error("bundle: no maps registered for chart \"" + p.chart + "\" at this point");
  }

  int total_dim() const { return base_dim + s_dim + w_dim; }
};

namespace detail {

template <class S>
Vec<S> concat(const Vec<S>& a, const Vec<S>& b, const Vec<S>& c) {
  Vec<S> r;
  r.reserve(a.size() + b.size() + c.size());
  r.insert(r.end(), a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  r.insert(r.end(), c.begin(), c.end());
  return r;
}

template <class S>
Vec<S> slice(const Vec<S>& v, int from, int count) {
  return Vec<S>(v.begin() + from, v.begin() + from + count);
}

inline Vec<double> to_scalar_vec(const VecD& v) { return v; }

template <class S>
Vec<S> lift(const VecD& v) {
  Vec<S> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = S(v[i]);
  return r;
}

}  // namespace detail

// ---- fibers ------------------------------------------------------------

// Parametrization of the S- or W-fiber through p, built from the defining
// inverse formulas: (h|_{S_p})^{-1}(u) = Phi^{-1}(u, f(p)) and the W analogue.
struct FiberParametrization {
  ManifoldPoint through;
  char which = 'S';
  int param_dim = 0;
  VecD center_param;       // fiber-factor chart coords of p
  VecD base_coords;        // pi(p)
  std::string image_chart; // total chart of the image coordinates
  std::string param_chart; // chart id on the fiber factor manifold
  SmoothMap map;           // param -> total chart coords
};

inline FiberParametrization fiber(const ChartManifold& M, const MultiFiberBundle& B,
                                  const ManifoldPoint& p, char which) {
  if (!M.contains(p)) throw PointOutsideDomain("fiber: point outside total manifold");
  const BundleMaps& bm = B.maps_at(p);
  VecD x = M.chart(p.chart).wrap(p.coords);
  VecD base = bm.pi(x);
  VecD hp = bm.h(x);
  VecD fp = bm.f(x);

  FiberParametrization out;
  out.through = {p.chart, x};
  out.which = which;
  out.base_coords = base;
  out.image_chart = p.chart;
  const SmoothMap* phi_inv = &bm.phi_inv;
  const int sd = B.s_dim, wd = B.w_dim;

  if (which == 'S') {
    out.param_dim = sd;
    out.center_param = hp;
    out.param_chart = bm.s_chart;
    out.map = SmoothMap::make<3>(sd, static_cast<int>(x.size()),
        [phi = *phi_inv, base, fp](const auto& t) {
          using S = typename std::decay_t<decltype(t)>::value_type;
          return phi(detail::concat(detail::lift<S>(base), t, detail::lift<S>(fp)));
        });
  } else {
    out.param_dim = wd;
    out.center_param = fp;
    out.param_chart = bm.w_chart;
    out.map = SmoothMap::make<3>(wd, static_cast<int>(x.size()),
        [phi = *phi_inv, base, hp](const auto& w) {
          using S = typename std::decay_t<decltype(w)>::value_type;
          return phi(detail::concat(detail::lift<S>(base), detail::lift<S>(hp), w));
        });
  }

  // Phi must restrict to a diffeomorphism on the fiber: probe the tangent map
  // of the corresponding factor map at the center.
  if (out.param_dim > 0) {
    Jet1 pj = eval_jet1(out.map, out.center_param);
    const SmoothMap& factor = which == 'S' ? bm.h : bm.f;
    Jet1 fj = eval_jet1(factor, x);
    MatD t(out.param_dim, out.param_dim);
    for (int a = 0; a < out.param_dim; ++a)
      for (int b = 0; b < out.param_dim; ++b) {
        double s = 0.0;
        for (int c = 0; c < static_cast<int>(x.size()); ++c) s += fj.jac(a, c) * pj.jac(c, b);
        t(a, b) = s;
      }
    if (std::abs(det(t)) < 1e-9)
      throw PhiNotInvertibleOnFiber("fiber: tangent map of the factor restriction is singular");
  }
  return out;
}

// Uniform parameter samples covering the fiber factor chart (full period for
// angles, a wide ball for stereographic coordinates).
inline std::vector<VecD> fiber_param_samples(const MultiFiberBundle& B,
                                             const FiberParametrization& fp, int count) {
  const ChartManifold& factor = fp.which == 'S' ? B.S : B.W;
  std::vector<VecD> out;
  if (fp.param_dim == 0) {
    out.push_back({});
    return out;
  }
  const Chart& ch = factor.chart(fp.param_chart);
  if (fp.param_dim == 1) {
    double period = ch.periods[0] > 0 ? ch.periods[0] : 2.0;
    double lo = ch.periods[0] > 0 ? ch.domain.lo[0] : fp.center_param[0] - 1.0;
    for (int i = 0; i < count; ++i) out.push_back({lo + period * (i + 0.5) / count});
    return out;
  }
  // low-discrepancy-ish ball samples for stereographic charts
  uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next = [&state]() {
    state ^= state << 13; state ^= state >> 7; state ^= state << 17;
    return (state >> 11) * (1.0 / 9007199254740992.0);
  };
  while (static_cast<int>(out.size()) < count) {
    VecD w(fp.param_dim);
    double r2 = 0.0;
    for (int d = 0; d < fp.param_dim; ++d) {
      w[d] = 5.0 * next() - 2.5;
      r2 += w[d] * w[d];
    }
    if (r2 <= 6.25) out.push_back(w);
  }
  return out;
}

// Sampled image of a fiber in total-chart coordinates.
inline std::vector<VecD> fiber_image(const MultiFiberBundle& B, const FiberParametrization& fp,
                                     int count) {
  std::vector<VecD> img;
  for (const VecD& t : fiber_param_samples(B, fp, count)) img.push_back(fp.map(t));
  return img;
}

// Symmetric sampled Hausdorff distance between point clouds, with the chart's
// periodic-aware coordinate distance.
inline double hausdorff(const Chart& ch, const std::vector<VecD>& a, const std::vector<VecD>& b) {
  auto one_sided = [&](const std::vector<VecD>& s, const std::vector<VecD>& t) {
    double worst = 0.0;
    for (const VecD& p : s) {
      double best = kUnbounded;
      for (const VecD& q : t) best = std::min(best, ch.distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

// ---- splitting ---------------------------------------------------------

// psi_p and its inverse, restricted to the pi-fiber of p.
struct Splitting {
  ManifoldPoint center;
  std::function<std::pair<ManifoldPoint, ManifoldPoint>(const ManifoldPoint&)> psi;
  std::function<ManifoldPoint(const ManifoldPoint&, const ManifoldPoint&)> psi_inv;
};

inline Splitting splitting(const ChartManifold& M, const MultiFiberBundle& B,
                           const ManifoldPoint& p) {
  const BundleMaps& bm = B.maps_at(p);
  VecD xp = M.chart(p.chart).wrap(p.coords);
  VecD base = bm.pi(xp);
  VecD hp = bm.h(xp);
  VecD fp = bm.f(xp);
  std::string chart_id = p.chart;

  Splitting s;
  s.center = {chart_id, xp};
  s.psi = [&M, bm, base, hp, fp, chart_id](const ManifoldPoint& y) {
    VecD xy = M.chart(chart_id).wrap(M.transition(y, chart_id).coords);
    VecD hy = bm.h(xy);
    VecD fy = bm.f(xy);
    ManifoldPoint a{chart_id, bm.phi_inv(detail::concat(base, hy, fp))};
    ManifoldPoint b{chart_id, bm.phi_inv(detail::concat(base, hp, fy))};
    return std::make_pair(a, b);
  };
  s.psi_inv = [&M, bm, base, chart_id](const ManifoldPoint& a, const ManifoldPoint& b) {
    VecD xa = M.chart(chart_id).wrap(M.transition(a, chart_id).coords);
    VecD xb = M.chart(chart_id).wrap(M.transition(b, chart_id).coords);
    VecD ha = bm.h(xa);
    VecD fb = bm.f(xb);
    return ManifoldPoint{chart_id, bm.phi_inv(detail::concat(base, ha, fb))};
  };
  return s;
}

// ---- adapted charts ------------------------------------------------------

// Chart centered at p with coordinates (x^i, u, w^k): base displacement, then
// the S- and W-factor displacements read through (h, f).
struct AdaptedChart {
  Chart chart;
  ManifoldPoint center;
  std::string total_chart;
  SmoothMap to_adapted;    // total coords -> adapted coords
  SmoothMap from_adapted;  // adapted coords -> total coords
};

inline AdaptedChart adapted_chart(const ChartManifold& M, const MultiFiberBundle& B,
                                  const ManifoldPoint& p) {
  bool trivialized = false;
  for (const auto& t : B.trivializations)
    if (t.chart == p.chart && t.region.contains(M.chart(p.chart).wrap(p.coords)))
      trivialized = true;
  if (!trivialized)
    throw NoTrivialization("adapted_chart: no registered trivializing neighborhood at p");

  const BundleMaps& bm = B.maps_at(p);
  VecD xp = M.chart(p.chart).wrap(p.coords);
  VecD base_p = bm.pi(xp);
  VecD hp = bm.h(xp);
  VecD fp = bm.f(xp);
  const int bd = B.base_dim, sd = B.s_dim, wd = B.w_dim;
  const int n = bd + sd + wd;

  // period data for wrapping factor differences
  VecD s_periods(sd, 0.0), s_lo(sd, 0.0);
  for (int k = 0; k < sd; ++k) {
    const Chart& sc = B.S.chart(bm.s_chart);
    s_periods[k] = sc.periods[k];
    s_lo[k] = sc.domain.lo[k];
  }

  AdaptedChart out;
  out.center = {p.chart, xp};
  out.total_chart = p.chart;

  out.to_adapted = SmoothMap::make<3>(n, n,
      [bm, base_p, hp, fp, bd, sd, wd, s_periods](const auto& q) {
        using S = typename std::decay_t<decltype(q)>::value_type;
        Vec<S> b = bm.pi(q);
        Vec<S> hs = bm.h(q);
        Vec<S> fs = bm.f(q);
        Vec<S> r(bd + sd + wd);
        for (int i = 0; i < bd; ++i) r[i] = b[i] - base_p[i];
        for (int k = 0; k < sd; ++k) {
          S d = hs[k] - hp[k];
          if (s_periods[k] > 0) d = wrap_periodic(d, -0.5 * s_periods[k], s_periods[k]);
          r[bd + k] = d;
        }
        for (int k = 0; k < wd; ++k) r[bd + sd + k] = fs[k] - fp[k];
        return r;
      });

  out.from_adapted = SmoothMap::make<3>(n, n,
      [bm, base_p, hp, fp, bd, sd, wd, s_periods, s_lo](const auto& a) {
        using S = typename std::decay_t<decltype(a)>::value_type;
        Vec<S> b(bd), hs(sd), fs(wd);
        for (int i = 0; i < bd; ++i) b[i] = a[i] + base_p[i];
        for (int k = 0; k < sd; ++k) {
          hs[k] = a[bd + k] + hp[k];
          if (s_periods[k] > 0) hs[k] = wrap_periodic(hs[k], s_lo[k], s_periods[k]);
        }
        for (int k = 0; k < wd; ++k) fs[k] = a[bd + sd + k] + fp[k];
        return bm.phi_inv(detail::concat(b, hs, fs));
      });

  Chart c;
  c.id = "adapted@" + p.chart;
  c.dim = n;
  c.domain = Box::cube(n, 2.0);
  c.periods.assign(n, 0.0);
  out.chart = c;
  return out;
}

// ---- horizontal projection ----------------------------------------------

struct HorizontalProjector {
  ManifoldPoint point;
  MatD fiber_basis;  // columns span T_x F_xbar (kernel of d pi)
  MatD horiz_basis;  // columns span H_x
  MatD projector;    // pr_H as an endomorphism matrix
  std::vector<int> horizontal_signature;
};

inline HorizontalProjector horizontal_projector(const ChartManifold& M,
                                                const MultiFiberBundle& B, const MetricField& g,
                                                const ManifoldPoint& p) {
  const BundleMaps& bm = B.maps_at(p);
  VecD x = M.chart(p.chart).wrap(p.coords);
  Jet1 pj = eval_jet1(bm.pi, x);
  MatD fb = null_space(pj.jac, 1e-9);  // n x fdim
  const int n = static_cast<int>(x.size());
  const int fd = fb.cols;

  MatD gm = g.matrix(p.chart, x);
  // Gram of g restricted to the fiber tangent space
  MatD gram(fd, fd);
  for (int a = 0; a < fd; ++a)
    for (int b = 0; b < fd; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += fb(i, a) * gm(i, j) * fb(j, b);
      gram(a, b) = s;
    }
  MatD gram_inv;
  try {
    gram_inv = inverse(gram);
  } catch (const DegenerateMetric&) {
    throw DegenerateFiberMetric("horizontal_projector: g restricted to the fiber is singular");
  }

  // P = I - B Gram^{-1} B^T g
  MatD btg(fd, n);
  for (int a = 0; a < fd; ++a)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += fb(i, a) * gm(i, j);
      btg(a, j) = s;
    }
  MatD proj = MatD::identity(n);
  MatD tmp = matmul(gram_inv, btg);  // fd x n
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < fd; ++a) s += fb(i, a) * tmp(a, j);
      proj(i, j) -= s;
    }

  HorizontalProjector out;
  out.point = {p.chart, x};
  out.fiber_basis = fb;
  out.projector = proj;
  out.horiz_basis = null_space(btg, 1e-9);
  MatD hg(out.horiz_basis.cols, out.horiz_basis.cols);
  for (int a = 0; a < out.horiz_basis.cols; ++a)
    for (int b = 0; b < out.horiz_basis.cols; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += out.horiz_basis(i, a) * gm(i, j) * out.horiz_basis(j, b);
      hg(a, b) = s;
    }
  out.horizontal_signature = sorted_signature(signature_of(hg));
  return out;
}

// Differentiable pr_H for product-type charts where the fiber tangent space is
// spanned by fixed coordinate directions. Used to build smooth horizontal
// fields; agrees with horizontal_projector on those charts.
template <class S>
Mat<S> coordinate_projector(const Mat<S>& g, const std::vector<int>& fiber_coords) {
  const int n = g.rows;
  const int fd = static_cast<int>(fiber_coords.size());
  Mat<S> gram(fd, fd);
  for (int a = 0; a < fd; ++a)
    for (int b = 0; b < fd; ++b) gram(a, b) = g(fiber_coords[a], fiber_coords[b]);
  Mat<S> gram_inv = inverse(gram);
  Mat<S> proj = Mat<S>::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S s(0.0);
      for (int a = 0; a < fd; ++a)
        for (int b = 0; b < fd; ++b)
          s = s + (i == fiber_coords[a] ? S(1.0) : S(0.0)) * gram_inv(a, b) *
                      g(fiber_coords[b], j);
      proj(i, j) = proj(i, j) - s;
    }
  return proj;
}

// ---- compatibility and orientation ---------------------------------------

struct SignatureTriple {
  std::vector<int> s, w, h;
};

struct CompatibilityReport {
  std::vector<SignatureTriple> per_sample;
  bool passes = true;
  int first_offender = -1, second_offender = -1;
  std::string detail;
};

// Signature of g restricted to S_x, W_x and H_x at every sample; passes iff
// each of the three is constant across the samples.
inline CompatibilityReport check_compatibility(const ChartManifold& M, const MultiFiberBundle& B,
                                               const MetricField& g,
                                               const std::vector<ManifoldPoint>& samples) {
  CompatibilityReport rep;
  for (const auto& p : samples) {
    SignatureTriple tri;
    VecD x = M.chart(p.chart).wrap(p.coords);
    MatD gm = g.matrix(p.chart, x);
    auto factor_signature = [&](char which, int dim) {
      if (dim == 0) return std::vector<int>{};
      FiberParametrization fp = fiber(M, B, p, which);
      Jet1 j = eval_jet1(fp.map, fp.center_param);
      MatD gram(dim, dim);
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          double s = 0.0;
          for (int i = 0; i < gm.rows; ++i)
            for (int jj = 0; jj < gm.rows; ++jj) s += j.jac(i, a) * gm(i, jj) * j.jac(jj, b);
          gram(a, b) = s;
        }
      try {
        return sorted_signature(signature_of(gram));
      } catch (const DegenerateMetric&) {
        throw DegenerateFiberMetric("check_compatibility: degenerate fiber restriction");
      }
    };
    tri.s = factor_signature('S', B.s_dim);
    tri.w = factor_signature('W', B.w_dim);
    tri.h = horizontal_projector(M, B, g, p).horizontal_signature;
    rep.per_sample.push_back(tri);
  }
  for (size_t i = 1; i < rep.per_sample.size(); ++i) {
    const auto& a = rep.per_sample[0];
    const auto& b = rep.per_sample[i];
    if (a.s != b.s || a.w != b.w || a.h != b.h) {
      rep.passes = false;
      rep.first_offender = 0;
      rep.second_offender = static_cast<int>(i);
      rep.detail = "fiber signature differs between samples 0 and " + std::to_string(i);
      break;
    }
  }
  return rep;
}

struct OrientationReport {
  bool s_orientation_ok = true;
  bool time_orientation_ok = true;
  bool time_checked = false;
  std::vector<double> time_inner_products;
  std::vector<std::string> failures;
};

// Pulled-back S-orientations of overlapping adapted charts must agree; with a
// metric, the pushforwards of the leading base coordinate direction must stay
// timelike with negative mutual inner products.
inline OrientationReport check_orientation(const ChartManifold& M, const MultiFiberBundle& B,
                                           const std::vector<AdaptedChart>& charts,
                                           const std::vector<ManifoldPoint>& samples,
                                           const MetricField* g = nullptr) {
  OrientationReport rep;
  rep.time_checked = g != nullptr;
  const int bd = B.base_dim, sd = B.s_dim;
  for (const auto& p : samples) {
    VecD x = M.chart(p.chart).wrap(p.coords);
    for (size_t i = 0; i < charts.size(); ++i) {
      for (size_t j = i + 1; j < charts.size(); ++j) {
        if (charts[i].total_chart != p.chart || charts[j].total_chart != p.chart) continue;
        auto direction = [&](const AdaptedChart& ac, int slot) {
          VecD a = ac.to_adapted(x);
          VecD dir(a.size(), 0.0);
          dir[slot] = 1.0;
          Vec<double> val, der;
          eval_dir(ac.from_adapted, a, dir, &val, &der);
          return der;
        };
        if (sd == 1) {
          VecD vi = direction(charts[i], bd);
          VecD vj = direction(charts[j], bd);
          double c = dot(vi, vj) / dot(vi, vi);
          if (!(c > 0)) {
            rep.s_orientation_ok = false;
            rep.failures.push_back("S-orientation reversed between adapted charts " +
                                   std::to_string(i) + " and " + std::to_string(j));
          }
        }
        if (g) {
          VecD wi = direction(charts[i], 0);
          VecD wj = direction(charts[j], 0);
          MatD gm = g->matrix(p.chart, x);
          double ip = inner(gm, wi, wj);
          rep.time_inner_products.push_back(ip);
          if (!(ip < 0)) {
            rep.time_orientation_ok = false;
            rep.failures.push_back("time orientation disagrees between adapted charts " +
                                   std::to_string(i) + " and " + std::to_string(j));
          }
        }
      }
    }
  }
  return rep;
}

// Necessary-condition certification that (pi, Phi) is a multi-fiber bundle at
// the sampled points: pi a submersion, Phi a fiberwise diffeomorphism at desk
// scale (invertible tangent map, injective on the sample grid).
struct BundleCheckReport {
  bool ok = true;
  std::string detail;
};

inline BundleCheckReport check_bundle(const ChartManifold& M, const MultiFiberBundle& B,
                                      const std::vector<ManifoldPoint>& samples) {
  BundleCheckReport rep;
  for (const auto& p : samples) {
    const BundleMaps& bm = B.maps_at(p);
    VecD x = M.chart(p.chart).wrap(p.coords);
    Jet1 pj = eval_jet1(bm.pi, x);
    Eigen::MatrixXd e(pj.jac.rows, pj.jac.cols);
    for (int i = 0; i < pj.jac.rows; ++i)
      for (int j = 0; j < pj.jac.cols; ++j) e(i, j) = pj.jac(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e);
    if (svd.singularValues().minCoeff() < 1e-9) {
      rep.ok = false;
      rep.detail = "pi fails the submersion rank test at a sample";
      return rep;
    }

    const int fd = B.s_dim + B.w_dim;
    if (fd == 0) continue;
    VecD base = bm.pi(x), hp = bm.h(x), fp = bm.f(x);
    // Phi restricted to the pi-fiber, parametrized through phi_inv
    SmoothMap phi_fiber = SmoothMap::make<1>(fd, fd,
        [bm, base, sd = B.s_dim, wd = B.w_dim](const auto& tw) {
          using S = typename std::decay_t<decltype(tw)>::value_type;
          Vec<S> t = detail::slice(tw, 0, sd);
          Vec<S> w = detail::slice(tw, sd, wd);
          Vec<S> q = bm.phi_inv(detail::concat(detail::lift<S>(base), t, w));
          Vec<S> hs = bm.h(q);
          Vec<S> fs = bm.f(q);
          Vec<S> r(hs);
          r.insert(r.end(), fs.begin(), fs.end());
          return r;
        });
    VecD center = hp;
    center.insert(center.end(), fp.begin(), fp.end());
    Jet1 fj = eval_jet1(phi_fiber, center);
    if (std::abs(det(fj.jac)) < 1e-9) {
      rep.ok = false;
      rep.detail = "Phi restricted to a fiber has a singular tangent map";
      return rep;
    }
  }
  return rep;
}

}  // namespace mfb
