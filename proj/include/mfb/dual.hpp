#pragma once

#include <array>
#include <cmath>

namespace mfb {

// Largest chart dimension the forward-mode scalars carry partials for.
inline constexpr int kMaxDim = 8;

// Forward-mode dual number with a fixed-capacity partial slot array.
// Nesting the type (Dual<Dual<double>>, ...) gives exact second and third
// coordinate derivatives; all chart dimensions share the same capacity so
// no allocation happens inside scalar arithmetic.
//
// Unused slots are value-initialized to zero, so mixed-width operands can
// always be combined by iterating to the wider width.
template <class T>
struct Dual {
  T v{};
  int n = 0;
  std::array<T, kMaxDim> d{};

  Dual() = default;
  Dual(double c) : v(c) {}  // constants carry no partials
};

using D0 = double;
using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

// ---- value extraction ------------------------------------------------

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.v); }

// ---- arithmetic ------------------------------------------------------

template <class T>
Dual<T> operator-(const Dual<T>& a) {
  Dual<T> r;
  r.v = -a.v;
  r.n = a.n;
  for (int i = 0; i < a.n; ++i) r.d[i] = -a.d[i];
  return r;
}

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v + b.v;
  r.n = a.n > b.n ? a.n : b.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v - b.v;
  r.n = a.n > b.n ? a.n : b.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v * b.v;
  r.n = a.n > b.n ? a.n : b.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v / b.v;
  r.n = a.n > b.n ? a.n : b.n;
  for (int i = 0; i < r.n; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
  return r;
}

// mixed scalar forms
template <class T> Dual<T> operator+(const Dual<T>& a, double c) { return a + Dual<T>(c); }
template <class T> Dual<T> operator+(double c, const Dual<T>& a) { return Dual<T>(c) + a; }
template <class T> Dual<T> operator-(const Dual<T>& a, double c) { return a - Dual<T>(c); }
template <class T> Dual<T> operator-(double c, const Dual<T>& a) { return Dual<T>(c) - a; }

template <class T>
Dual<T> operator*(const Dual<T>& a, double c) {
  Dual<T> r;
  r.v = a.v * c;
  r.n = a.n;
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] * c;
  return r;
}
template <class T> Dual<T> operator*(double c, const Dual<T>& a) { return a * c; }

template <class T>
Dual<T> operator/(const Dual<T>& a, double c) {
  Dual<T> r;
  r.v = a.v / c;
  r.n = a.n;
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] / c;
  return r;
}
template <class T> Dual<T> operator/(double c, const Dual<T>& a) { return Dual<T>(c) / a; }

template <class T> Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) { a = a + b; return a; }
template <class T> Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) { a = a - b; return a; }
template <class T> Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) { a = a * b; return a; }

// ---- elementary functions --------------------------------------------

template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::sin;
  using std::cos;
  Dual<T> r;
  r.v = sin(a.v);
  r.n = a.n;
  T c = cos(a.v);
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] * c;
  return r;
}

template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::sin;
  using std::cos;
  Dual<T> r;
  r.v = cos(a.v);
  r.n = a.n;
  T ms = -sin(a.v);
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] * ms;
  return r;
}

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  Dual<T> r;
  r.v = exp(a.v);
  r.n = a.n;
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] * r.v;
  return r;
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  Dual<T> r;
  r.v = sqrt(a.v);
  r.n = a.n;
  for (int i = 0; i < a.n; ++i) r.d[i] = a.d[i] / (2.0 * r.v);
  return r;
}

template <class T>
Dual<T> abs(const Dual<T>& a) {
  return value_of(a) < 0.0 ? -a : a;
}

// seed one variable: value x with unit partial in slot `slot` of `n`
template <class S>
Dual<S> seed_var(const S& x, int slot, int n) {
  Dual<S> r;
  r.v = x;
  r.n = n;
  r.d[slot] = S(1.0);
  return r;
}

}  // namespace mfb
