#pragma once

#include <vector>

#include "mfb/field.hpp"
#include "mfb/linalg.hpp"
#include "mfb/smooth.hpp"

namespace mfb {

// Rank-3 / rank-4 flat index helpers
template <class S>
struct Arr3 {
  int n = 0;
  std::vector<S> a;
  Arr3() = default;
  explicit Arr3(int n_) : n(n_), a(static_cast<size_t>(n_) * n_ * n_, S(0.0)) {}
  S& operator()(int i, int j, int k) { return a[(static_cast<size_t>(i) * n + j) * n + k]; }
  const S& operator()(int i, int j, int k) const {
    return a[(static_cast<size_t>(i) * n + j) * n + k];
  }
};

template <class S>
struct Arr4 {
  int n = 0;
  std::vector<S> a;
  Arr4() = default;
  explicit Arr4(int n_) : n(n_), a(static_cast<size_t>(n_) * n_ * n_ * n_, S(0.0)) {}
  S& operator()(int l, int i, int j, int k) {
    return a[((static_cast<size_t>(l) * n + i) * n + j) * n + k];
  }
  const S& operator()(int l, int i, int j, int k) const {
    return a[((static_cast<size_t>(l) * n + i) * n + j) * n + k];
  }
};

// Christoffel symbols of the second kind at x. Evaluates the metric one dual
// level up, so it is usable inside derivative pipelines (S = double or D1/D2).
// Optionally returns g and g^{-1} at x.
template <class S>
Arr3<S> christoffel(const SmoothMap& metric, const Vec<S>& x, Mat<S>* g_out = nullptr,
                    Mat<S>* ginv_out = nullptr) {
  const int n = static_cast<int>(x.size());
  Vec<Dual<S>> gd = metric(seed_coords(x));
  Mat<S> g(n, n);
  Arr3<S> dg(n);  // dg(k,a,b) = d_k g_ab
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Dual<S>& c = gd[static_cast<size_t>(a) * n + b];
      g(a, b) = c.v;
      for (int k = 0; k < n; ++k) dg(k, a, b) = c.d[k];
    }
  Mat<S> ginv = inverse(g);
  Arr3<S> gamma(n);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S s(0.0);
        for (int l = 0; l < n; ++l)
          s = s + ginv(c, l) * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
        s = s * 0.5;
        gamma(c, i, j) = s;
        gamma(c, j, i) = s;
      }
  if (g_out) *g_out = std::move(g);
  if (ginv_out) *ginv_out = std::move(ginv);
  return gamma;
}

template <class S>
struct CurvatureBundle {
  int n = 0;
  Mat<S> g, ginv;
  Arr3<S> gamma;          // Gamma^k_ij
  Arr4<S> riemann;        // R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + ...
  Mat<S> ricci;           // Ric_jk = R^i_ijk
  S scalar;               // S = g^jk Ric_jk
  Mat<S> einstein;        // G_ij = Ric_ij - S/2 g_ij
  Mat<S> einstein_endo;   // (^eG)^i_j = g^ik G_kj
};

// Full curvature data at x. The metric closure is evaluated two dual levels
// up; Christoffels are assembled in Dual<S> arithmetic so their derivatives
// come out exact and the Riemann tensor is plain S arithmetic after that.
template <class S>
CurvatureBundle<S> curvature(const SmoothMap& metric, const Vec<S>& x) {
  static_assert(ScalarLevel<S>::value <= 1,
                "curvature supports base scalars double and D1");
  using DS = Dual<S>;
  const int n = static_cast<int>(x.size());
  Vec<Dual<DS>> gg = metric(seed_coords2(x));

  Mat<DS> gmid(n, n);   // value g_ab, partials d_k g_ab
  Arr3<DS> dgd(n);      // value d_k g_ab, partials d_l d_k g_ab
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Dual<DS>& c = gg[static_cast<size_t>(a) * n + b];
      gmid(a, b) = c.v;
      for (int k = 0; k < n; ++k) dgd(k, a, b) = c.d[k];
    }
  Mat<DS> ginvd = inverse(gmid);

  Arr3<DS> gammad(n);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        DS s(0.0);
        for (int l = 0; l < n; ++l)
          s = s + ginvd(c, l) * (dgd(i, l, j) + dgd(j, l, i) - dgd(l, i, j));
        s = s * 0.5;
        gammad(c, i, j) = s;
        gammad(c, j, i) = s;
      }

  CurvatureBundle<S> out;
  out.n = n;
  out.g = Mat<S>(n, n);
  out.ginv = Mat<S>(n, n);
  out.gamma = Arr3<S>(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      out.g(a, b) = gmid(a, b).v;
      out.ginv(a, b) = ginvd(a, b).v;
    }
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.gamma(c, i, j) = gammad(c, i, j).v;

  out.riemann = Arr4<S>(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          S s = gammad(l, j, k).d[i] - gammad(l, i, k).d[j];
          for (int m = 0; m < n; ++m)
            s = s + out.gamma(l, i, m) * out.gamma(m, j, k) -
                out.gamma(l, j, m) * out.gamma(m, i, k);
          out.riemann(l, i, j, k) = s;
        }

  out.ricci = Mat<S>(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      S s(0.0);
      for (int i = 0; i < n; ++i) s = s + out.riemann(i, i, j, k);
      out.ricci(j, k) = s;
    }

  out.scalar = S(0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out.scalar = out.scalar + out.ginv(j, k) * out.ricci(j, k);

  out.einstein = Mat<S>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.einstein(i, j) = out.ricci(i, j) - 0.5 * out.scalar * out.g(i, j);

  out.einstein_endo = matmul(out.ginv, out.einstein);
  return out;
}

// Fully lowered Riemann tensor, upper slot lowered into the fourth position:
// Rlow(a,b,c,d) = g(R(e_a, e_b) e_c, e_d). Carries the classical pair
// symmetries; used by the invariant checks.
template <class S>
Arr4<S> lower_riemann(const CurvatureBundle<S>& cb) {
  const int n = cb.n;
  Arr4<S> low(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          S s(0.0);
          for (int m = 0; m < n; ++m) s = s + cb.g(m, d) * cb.riemann(m, a, b, c);
          low(a, b, c, d) = s;
        }
  return low;
}

}  // namespace mfb
