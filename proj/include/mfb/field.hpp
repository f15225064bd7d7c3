#pragma once

#include <map>
#include <string>
#include <vector>

#include "mfb/chart.hpp"
#include "mfb/errors.hpp"
#include "mfb/linalg.hpp"
#include "mfb/smooth.hpp"

namespace mfb {

enum class Slot { Covariant, Contravariant };

// A tensor field given by chart-local component closures. A field always has
// a home chart; it may carry additional presentations for other charts
// (round-sphere metrics in both stereographic charts, say). Evaluation in a
// chart without its own presentation routes the point through one transition.
struct TensorFieldSpec {
  std::vector<Slot> variance;
  std::string chart;  // home chart
  int dim = 0;
  std::map<std::string, SmoothMap> components;  // by chart id, includes home

  int rank() const { return static_cast<int>(variance.size()); }
  int comp_count() const {
    int c = 1;
    for (int k = 0; k < rank(); ++k) c *= dim;
    return c;
  }

  static TensorFieldSpec make(std::vector<Slot> variance, std::string chart, int dim,
                              SmoothMap comps) {
    TensorFieldSpec f;
    f.variance = std::move(variance);
    f.dim = dim;
    f.chart = chart;
    f.components.emplace(std::move(chart), std::move(comps));
    return f;
  }

  bool has_chart(const std::string& id) const { return components.count(id) > 0; }

  const SmoothMap& map_for(const std::string& id) const {
    auto it = components.find(id);
    if (it == components.end())
      throw Error("field has no presentation in chart \"" + id + "\"");
    return it->second;
  }

  template <class S>
  Vec<S> eval(const std::string& chart_id, const Vec<S>& x) const {
    return map_for(chart_id)(x);
  }
};

// scalar / vector / one-form / two-tensor constructors
inline TensorFieldSpec scalar_field(std::string chart, int dim, SmoothMap f) {
  return TensorFieldSpec::make({}, std::move(chart), dim, std::move(f));
}
inline TensorFieldSpec vector_field(std::string chart, int dim, SmoothMap f) {
  return TensorFieldSpec::make({Slot::Contravariant}, std::move(chart), dim, std::move(f));
}
inline TensorFieldSpec one_form_field(std::string chart, int dim, SmoothMap f) {
  return TensorFieldSpec::make({Slot::Covariant}, std::move(chart), dim, std::move(f));
}
inline TensorFieldSpec two_cov_field(std::string chart, int dim, SmoothMap f) {
  return TensorFieldSpec::make({Slot::Covariant, Slot::Covariant}, std::move(chart), dim,
                               std::move(f));
}

struct TensorValue {
  VecD comps;                // flat, dim^rank
  MatD d1;                   // (comp, i)
  std::vector<double> d2;    // [(comp*n + i)*n + j]
  int n = 0;
  int order = 0;
  double second(int c, int i, int j) const {
    return d2[(static_cast<size_t>(c) * n + i) * n + j];
  }
};

enum class DiffMethod { Dual, FiniteDifference };

// Evaluate a field at a point with exact coordinate derivatives up to order 2.
// Components and partials are expressed in the chart the point ends up in
// (its own chart when the field has a presentation there, else the home chart
// after one transition).
inline TensorValue evaluate(const ChartManifold& M, const TensorFieldSpec& f,
                            const ManifoldPoint& p, int order,
                            DiffMethod method = DiffMethod::Dual) {
  ManifoldPoint q = p;
  if (!f.has_chart(q.chart)) q = M.transition(p, f.chart);  // may throw NoTransitionPath
  const Chart& ch = M.chart(q.chart);
  VecD x = ch.wrap(q.coords);
  if (!ch.contains(x))
    throw PointOutsideDomain("evaluate: point outside domain of chart \"" + q.chart + "\"");

  const SmoothMap& comp = f.map_for(q.chart);
  TensorValue out;
  out.n = f.dim;
  out.order = order;
  if (method == DiffMethod::Dual) {
    if (order == 0) {
      out.comps = comp(x);
    } else if (order == 1) {
      Jet1 j = eval_jet1(comp, x);
      out.comps = j.val;
      out.d1 = j.jac;
    } else {
      Jet2 j = eval_jet2(comp, x);
      out.comps = j.val;
      out.d1 = j.jac;
      out.d2 = j.hess;
    }
    return out;
  }

  // central finite differences, step 1e-5 (cross-check mode)
  const double h = 1e-5;
  out.comps = comp(x);
  const int m = static_cast<int>(out.comps.size());
  const int n = f.dim;
  if (order >= 1) {
    out.d1 = MatD(m, n);
    for (int i = 0; i < n; ++i) {
      VecD xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      VecD fp = comp(xp), fm = comp(xm);
      for (int k = 0; k < m; ++k) out.d1(k, i) = (fp[k] - fm[k]) / (2 * h);
    }
  }
  if (order >= 2) {
    out.d2.assign(static_cast<size_t>(m) * n * n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        VecD xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h; xpp[j] += h;
        xpm[i] += h; xpm[j] -= h;
        xmp[i] -= h; xmp[j] += h;
        xmm[i] -= h; xmm[j] -= h;
        VecD fpp = comp(xpp), fpm = comp(xpm), fmp = comp(xmp), fmm = comp(xmm);
        for (int k = 0; k < m; ++k)
          out.d2[(static_cast<size_t>(k) * n + i) * n + j] =
              (fpp[k] - fpm[k] - fmp[k] + fmm[k]) / (4 * h * h);
      }
    }
  }
  return out;
}

// Transport flat tensor components through a transition with Jacobian jac
// (jac = dy/dx) and its inverse. Contravariant slots pick up jac, covariant
// slots pick up jac^{-1} transposed in the usual way.
inline VecD transport_components(const std::vector<Slot>& variance, int dim, const VecD& comps,
                                 const MatD& jac, const MatD& jac_inv) {
  const int r = static_cast<int>(variance.size());
  int total = 1;
  for (int k = 0; k < r; ++k) total *= dim;
  VecD out(total, 0.0);
  std::vector<int> oi(r, 0), ii(r, 0);
  for (int o = 0; o < total; ++o) {
    int rem = o;
    for (int k = r - 1; k >= 0; --k) { oi[k] = rem % dim; rem /= dim; }
    double sum = 0.0;
    for (int in = 0; in < total; ++in) {
      int rem2 = in;
      for (int k = r - 1; k >= 0; --k) { ii[k] = rem2 % dim; rem2 /= dim; }
      double fac = comps[in];
      for (int k = 0; k < r; ++k) {
        if (variance[k] == Slot::Contravariant)
          fac *= jac(oi[k], ii[k]);        // v'^a = (dy^a/dx^b) v^b
        else
          fac *= jac_inv(ii[k], oi[k]);    // w'_a = (dx^b/dy^a) w_b
      }
      sum += fac;
    }
    out[o] = sum;
  }
  return out;
}

// ---- metric ------------------------------------------------------------

struct MetricField {
  TensorFieldSpec tensor;      // two covariant slots, symmetric
  std::vector<int> signature;  // declared multiset of +-1, any order

  const std::string& chart() const { return tensor.chart; }
  int dim() const { return tensor.dim; }

  template <class S>
  Mat<S> matrix(const std::string& chart_id, const Vec<S>& x) const {
    Vec<S> c = tensor.eval(chart_id, x);
    Mat<S> g(tensor.dim, tensor.dim);
    g.a = std::move(c);
    return g;
  }
};

inline std::vector<int> sorted_signature(std::vector<int> s) {
  std::sort(s.begin(), s.end());
  return s;
}

// Signs of the eigenvalues of the component matrix at a point.
inline std::vector<int> signature_of(const MatD& g, double degenerate_tol = 1e-10) {
  SymEigen eig = sym_eigen(g);
  std::vector<int> signs;
  for (double l : eig.values) {
    if (std::abs(l) < degenerate_tol)
      throw DegenerateMetric("signature: eigenvalue " + std::to_string(l) +
                             " below degeneracy threshold");
    signs.push_back(l < 0 ? -1 : 1);
  }
  return signs;
}

inline std::vector<int> signature_at(const ChartManifold& M, const MetricField& g,
                                     const ManifoldPoint& p) {
  TensorValue v = evaluate(M, g.tensor, p, 0);
  MatD m(g.dim(), g.dim());
  m.a = v.comps;
  return signature_of(m);
}

// symmetry / nondegeneracy / declared-signature check at one point
inline void check_metric_at(const ChartManifold& M, const MetricField& g,
                            const ManifoldPoint& p) {
  TensorValue v = evaluate(M, g.tensor, p, 0);
  const int n = g.dim();
  MatD m(n, n);
  m.a = v.comps;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-14)
        throw ValidationError("metric symmetry violated at sampled point");
  if (std::abs(det(m)) < 1e-10)
    throw DegenerateMetric("metric determinant below 1e-10 at sampled point");
  if (sorted_signature(signature_of(m)) != sorted_signature(g.signature))
    throw ValidationError("metric signature at sampled point differs from declaration");
}

}  // namespace mfb
