#pragma once

#include <functional>
#include <type_traits>

#include "mfb/dual.hpp"
#include "mfb/errors.hpp"
#include "mfb/linalg.hpp"

namespace mfb {

template <class S> struct ScalarLevel;
template <> struct ScalarLevel<double> { static constexpr int value = 0; };
template <> struct ScalarLevel<D1> { static constexpr int value = 1; };
template <> struct ScalarLevel<D2> { static constexpr int value = 2; };
template <> struct ScalarLevel<D3> { static constexpr int value = 3; };

// Identity-seeded lift: slot i tracks coords[i].
template <class S>
Vec<Dual<S>> seed_coords(const Vec<S>& x) {
  const int n = static_cast<int>(x.size());
  Vec<Dual<S>> out(n);
  for (int i = 0; i < n; ++i) out[i] = seed_var(x[i], i, n);
  return out;
}

// Doubly seeded lift for second derivatives in one evaluation.
template <class S>
Vec<Dual<Dual<S>>> seed_coords2(const Vec<S>& x) {
  const int n = static_cast<int>(x.size());
  Vec<Dual<Dual<S>>> out(n);
  for (int i = 0; i < n; ++i) {
    Dual<Dual<S>> xi;
    xi.v = seed_var(x[i], i, n);
    xi.n = n;
    xi.d[i] = Dual<S>(1.0);
    out[i] = xi;
  }
  return out;
}

// A smooth map R^in -> R^out, stored as one generic callable instantiated at
// every scalar level it supports. Fields, transition maps and bundle maps are
// all SmoothMaps; composing them is just capturing them in another generic
// lambda. Levels above `max_level` are rejected at runtime, which lets maps
// built from derivative pipelines (curvature, flows) cap their depth.
class SmoothMap {
 public:
  SmoothMap() = default;

  template <int MaxLevel = 3, class F>
  static SmoothMap make(int in_dim, int out_dim, F f) {
    static_assert(MaxLevel >= 0 && MaxLevel <= 3);
    SmoothMap m;
    m.in_ = in_dim;
    m.out_ = out_dim;
    m.max_level_ = MaxLevel;
    m.f0_ = f;
    if constexpr (MaxLevel >= 1) m.f1_ = f;
    if constexpr (MaxLevel >= 2) m.f2_ = f;
    if constexpr (MaxLevel >= 3) m.f3_ = f;
    return m;
  }

  bool valid() const { return static_cast<bool>(f0_); }
  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  int max_level() const { return max_level_; }

  template <class S>
  Vec<S> operator()(const Vec<S>& x) const {
    constexpr int L = ScalarLevel<S>::value;
    if constexpr (L == 0) {
      require(0);
      return f0_(x);
    } else if constexpr (L == 1) {
      require(1);
      return f1_(x);
    } else if constexpr (L == 2) {
      require(2);
      return f2_(x);
    } else {
      require(3);
      return f3_(x);
    }
  }

 private:
  void require(int level) const {
    if (!f0_ || level > max_level_)
      throw Error("SmoothMap: evaluation level " + std::to_string(level) +
                  " not available (max " + std::to_string(max_level_) + ")");
  }

  std::function<Vec<double>(const Vec<double>&)> f0_;
  std::function<Vec<D1>(const Vec<D1>&)> f1_;
  std::function<Vec<D2>(const Vec<D2>&)> f2_;
  std::function<Vec<D3>(const Vec<D3>&)> f3_;
  int in_ = 0, out_ = 0, max_level_ = 0;
};

// value + jacobian
struct Jet1 {
  VecD val;
  MatD jac;  // jac(k, i) = d f_k / d x_i
};

// value + jacobian + hessian
struct Jet2 {
  VecD val;
  MatD jac;
  std::vector<double> hess;  // [(k*n + i)*n + j]
  int out = 0, n = 0;
  double h(int k, int i, int j) const { return hess[(static_cast<size_t>(k) * n + i) * n + j]; }
};

inline Jet1 eval_jet1(const SmoothMap& f, const VecD& x) {
  const int n = static_cast<int>(x.size());
  Vec<D1> r = f(seed_coords(x));
  Jet1 out;
  const int m = static_cast<int>(r.size());
  out.val.resize(m);
  out.jac = MatD(m, n);
  for (int k = 0; k < m; ++k) {
    out.val[k] = r[k].v;
    for (int i = 0; i < n; ++i) out.jac(k, i) = r[k].d[i];
  }
  return out;
}

inline Jet2 eval_jet2(const SmoothMap& f, const VecD& x) {
  const int n = static_cast<int>(x.size());
  Vec<D2> r = f(seed_coords2(x));
  Jet2 out;
  const int m = static_cast<int>(r.size());
  out.out = m;
  out.n = n;
  out.val.resize(m);
  out.jac = MatD(m, n);
  out.hess.assign(static_cast<size_t>(m) * n * n, 0.0);
  for (int k = 0; k < m; ++k) {
    out.val[k] = r[k].v.v;
    for (int i = 0; i < n; ++i) {
      out.jac(k, i) = r[k].v.d[i];
      for (int j = 0; j < n; ++j)
        out.hess[(static_cast<size_t>(k) * n + i) * n + j] = r[k].d[i].d[j];
    }
  }
  return out;
}

// value and directional derivative along dir, at any base scalar
template <class S>
void eval_dir(const SmoothMap& f, const Vec<S>& x, const Vec<S>& dir,
              Vec<S>* val, Vec<S>* deriv) {
  const int n = static_cast<int>(x.size());
  Vec<Dual<S>> xs(n);
  for (int i = 0; i < n; ++i) {
    xs[i].v = x[i];
    xs[i].n = 1;
    xs[i].d[0] = dir[i];
  }
  Vec<Dual<S>> r = f(xs);
  const int m = static_cast<int>(r.size());
  if (val) {
    val->resize(m);
    for (int k = 0; k < m; ++k) (*val)[k] = r[k].v;
  }
  if (deriv) {
    deriv->resize(m);
    for (int k = 0; k < m; ++k) (*deriv)[k] = r[k].d[0];
  }
}

}  // namespace mfb
