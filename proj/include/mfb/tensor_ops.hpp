#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mfb/curvature.hpp"
#include "mfb/field.hpp"

namespace mfb {

// Pointwise tensor calculus. All operations are expressed in one chart: the
// caller hands coordinates x in chart `ch` and every field involved must have
// a presentation there (scenario fields share the metric's home chart).

// Raise or lower one slot of flat tensor components with g / g^{-1}.
inline VecD musical(const MatD& g, const MatD& ginv, const VecD& comps,
                    const std::vector<Slot>& variance, int slot, bool raise) {
  const int n = g.rows;
  const int r = static_cast<int>(variance.size());
  int total = 1;
  for (int k = 0; k < r; ++k) total *= n;
  int stride = 1;
  for (int k = slot + 1; k < r; ++k) stride *= n;
  const MatD& m = raise ? ginv : g;
  VecD out(total, 0.0);
  for (int idx = 0; idx < total; ++idx) {
    int a = (idx / stride) % n;  // index in the named slot
    int base = idx - a * stride;
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += m(a, b) * comps[base + b * stride];
    out[idx] = s;
  }
  return out;
}

struct MetricAt {
  MatD g, ginv;
};

inline MetricAt metric_at(const MetricField& g, const std::string& ch, const VecD& x) {
  MetricAt m;
  m.g = g.matrix(ch, x);
  m.ginv = inverse(m.g);
  return m;
}

// directional derivative of a scalar field: V(f) at x, V given by components
inline double directional(const TensorFieldSpec& f, const std::string& ch, const VecD& x,
                          const VecD& v) {
  Jet1 j = eval_jet1(f.map_for(ch), x);
  double s = 0.0;
  for (size_t i = 0; i < v.size(); ++i) s += j.jac(0, static_cast<int>(i)) * v[i];
  return s;
}

// divergence of a vector field: div V = d_i V^i + Gamma^i_im V^m
inline double divergence_vec(const MetricField& g, const TensorFieldSpec& V,
                             const std::string& ch, const VecD& x) {
  Jet1 j = eval_jet1(V.map_for(ch), x);
  Arr3<double> gamma = christoffel(g.tensor.map_for(ch), x);
  const int n = g.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    s += j.jac(i, i);
    for (int m = 0; m < n; ++m) s += gamma(i, i, m) * j.val[m];
  }
  return s;
}

// divergence of a covariant 2-tensor field, returned index raised (vector):
// (div T)^j = nabla_i T^{ij} with T^{ij} = g^{ia} g^{jb} T_ab.
// The raising happens inside dual arithmetic so d_i T^{ij} is exact.
inline VecD divergence2(const MetricField& g, const TensorFieldSpec& T, const std::string& ch,
                        const VecD& x) {
  const int n = g.dim();
  Vec<D1> xs = seed_coords(x);
  Vec<D1> gd = g.tensor.eval(ch, xs);
  Vec<D1> td = T.eval(ch, xs);
  Mat<D1> gm(n, n), tm(n, n);
  gm.a = std::move(gd);
  tm.a = std::move(td);
  Mat<D1> ginv = inverse(gm);
  Mat<D1> tup = matmul(matmul(ginv, tm), ginv);  // T^{ij} = g^{ia} T_ab g^{bj}

  // Christoffels (values) from the already-evaluated metric jets
  Arr3<double> dg(n);
  MatD gv(n, n), ginvv(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      gv(a, b) = gm(a, b).v;
      ginvv(a, b) = ginv(a, b).v;
      for (int k = 0; k < n; ++k) dg(k, a, b) = gm(a, b).d[k];
    }
  Arr3<double> gamma(n);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ginvv(c, l) * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
        s *= 0.5;
        gamma(c, i, j) = s;
        gamma(c, j, i) = s;
      }

  VecD out(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += tup(i, j).d[i];
      for (int m = 0; m < n; ++m)
        s += gamma(i, i, m) * tup(m, j).v + gamma(j, i, m) * tup(i, m).v;
    }
    out[j] = s;
  }
  return out;
}

// Finite-difference variant of divergence2 for cross-checking the dual path.
// T is supplied as a plain matrix-valued function of the chart coordinates.
inline VecD divergence2_fd(const MetricField& g, const std::function<MatD(const VecD&)>& T,
                           const std::string& ch, const VecD& x, double h = 1e-5) {
  const int n = g.dim();
  MetricAt m = metric_at(g, ch, x);
  auto raise = [&](const VecD& at) {
    MatD t = T(at);
    MatD gi = inverse(g.matrix(ch, at));
    return matmul(matmul(gi, t), gi);
  };
  MatD tup = raise(x);
  std::vector<MatD> dtup;
  for (int i = 0; i < n; ++i) {
    VecD xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    MatD tp = raise(xp), tm = raise(xm);
    MatD d(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) d(a, b) = (tp(a, b) - tm(a, b)) / (2 * h);
    dtup.push_back(d);
  }
  Arr3<double> gamma = christoffel(g.tensor.map_for(ch), x);
  VecD out(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += dtup[i](i, j);
      for (int mm = 0; mm < n; ++mm)
        s += gamma(i, i, mm) * tup(mm, j) + gamma(j, i, mm) * tup(i, mm);
    }
    out[j] = s;
  }
  return out;
}

// (d omega)_ij = d_i omega_j - d_j omega_i
inline MatD exterior_d_1form(const TensorFieldSpec& omega, const std::string& ch, const VecD& x) {
  Jet1 j = eval_jet1(omega.map_for(ch), x);
  const int n = static_cast<int>(x.size());
  MatD F(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) F(i, k) = j.jac(k, i) - j.jac(i, k);
  return F;
}

// (dF)_ijk for an antisymmetric 2-form F: cyclic sum of first derivatives
inline Arr3<double> exterior_d_2form(const TensorFieldSpec& F, const std::string& ch,
                                     const VecD& x) {
  Jet1 j = eval_jet1(F.map_for(ch), x);
  const int n = static_cast<int>(x.size());
  Arr3<double> dF(n);
  auto dF_at = [&](int a, int b, int c) {
    return j.jac(b * n + c, a);  // d_a F_bc
  };
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      for (int k = 0; k < n; ++k)
        dF(i, jj, k) = dF_at(i, jj, k) + dF_at(jj, k, i) + dF_at(k, i, jj);
  return dF;
}

// Killing residual: (L_V g)_ij = V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k
inline MatD lie_metric(const MetricField& g, const TensorFieldSpec& V, const std::string& ch,
                       const VecD& x) {
  const int n = g.dim();
  Jet1 gj = eval_jet1(g.tensor.map_for(ch), x);
  Jet1 vj = eval_jet1(V.map_for(ch), x);
  MatD out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += vj.val[k] * gj.jac(i * n + j, k);
        s += gj.val[k * n + j] * vj.jac(k, i);
        s += gj.val[i * n + k] * vj.jac(k, j);
      }
      out(i, j) = s;
    }
  return out;
}

// (nabla_U V)^k = U^i d_i V^k + Gamma^k_ij U^i V^j, U given by components at x
inline VecD covariant_deriv_vec(const MetricField& g, const TensorFieldSpec& V,
                                const std::string& ch, const VecD& x, const VecD& u) {
  const int n = g.dim();
  Jet1 vj = eval_jet1(V.map_for(ch), x);
  Arr3<double> gamma = christoffel(g.tensor.map_for(ch), x);
  VecD out(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += u[i] * vj.jac(k, i);
      for (int j = 0; j < n; ++j) s += gamma(k, i, j) * u[i] * vj.val[j];
    }
    out[k] = s;
  }
  return out;
}

// (nabla_X X)^k for a vector field X
inline VecD covariant_accel(const MetricField& g, const TensorFieldSpec& X, const std::string& ch,
                            const VecD& x) {
  Jet1 xj = eval_jet1(X.map_for(ch), x);
  return covariant_deriv_vec(g, X, ch, x, xj.val);
}

// g(u, v) with component vectors at x
inline double inner(const MatD& g, const VecD& u, const VecD& v) {
  double s = 0.0;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) s += g(i, j) * u[i] * v[j];
  return s;
}

// (^eF(v))^k = g^{ka} F_ab v^b  (endomorphism associated to a 2-tensor)
inline VecD endo_apply(const MatD& ginv, const MatD& F, const VecD& v) {
  const int n = ginv.rows;
  VecD out(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s += ginv(k, a) * F(a, b) * v[b];
    out[k] = s;
  }
  return out;
}

}  // namespace mfb
