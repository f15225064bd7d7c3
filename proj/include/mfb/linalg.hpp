#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mfb/dual.hpp"
#include "mfb/errors.hpp"

namespace mfb {

template <class S>
using Vec = std::vector<S>;

using VecD = Vec<double>;

// Dense row-major matrix over any scalar (double or nested Dual).
template <class S>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<S> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, S(0.0)) {}

  S& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const S& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
    return m;
  }
};

using MatD = Mat<double>;

template <class S>
Vec<S> matvec(const Mat<S>& m, const Vec<S>& x) {
  Vec<S> y(m.rows, S(0.0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) y[i] = y[i] + m(i, j) * x[j];
  return y;
}

template <class S>
Mat<S> matmul(const Mat<S>& a, const Mat<S>& b) {
  Mat<S> c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k)
      for (int j = 0; j < b.cols; ++j) c(i, j) = c(i, j) + a(i, k) * b(k, j);
  return c;
}

template <class S>
Mat<S> transpose(const Mat<S>& m) {
  Mat<S> t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

template <class S>
S dot(const Vec<S>& a, const Vec<S>& b) {
  S s(0.0);
  for (size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

// g(u, v) for a metric component matrix
template <class S>
S bilinear(const Mat<S>& g, const Vec<S>& u, const Vec<S>& v) {
  S s(0.0);
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) s = s + g(i, j) * u[i] * v[j];
  return s;
}

inline double norm_inf(const VecD& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double norm_inf(const MatD& m) {
  double r = 0.0;
  for (double x : m.a) r = std::max(r, std::abs(x));
  return r;
}

// Gauss-Jordan inverse with partial pivoting on the value part.
// Works at every Dual level; that is what makes derivative-of-inverse exact.
template <class S>
Mat<S> inverse(const Mat<S>& m, double degenerate_tol = 1e-10) {
  const int n = m.rows;
  Mat<S> w = m;
  Mat<S> inv = Mat<S>::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(value_of(w(col, col)));
    for (int r = col + 1; r < n; ++r) {
      double cand = std::abs(value_of(w(r, col)));
      if (cand > best) { best = cand; piv = r; }
    }
    if (best < degenerate_tol)
      throw DegenerateMetric("matrix inverse: pivot below degeneracy threshold");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(w(col, j), w(piv, j));
        std::swap(inv(col, j), inv(piv, j));
      }
    }
    S p = w(col, col);
    for (int j = 0; j < n; ++j) {
      w(col, j) = w(col, j) / p;
      inv(col, j) = inv(col, j) / p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      S f = w(r, col);
      if (value_of(f) == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        w(r, j) = w(r, j) - f * w(col, j);
        inv(r, j) = inv(r, j) - f * inv(col, j);
      }
    }
  }
  return inv;
}

inline double det(const MatD& m) {
  Eigen::MatrixXd e(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
  return e.determinant();
}

struct SymEigen {
  VecD values;   // ascending
  MatD vectors;  // column k is the eigenvector of values[k]
};

inline SymEigen sym_eigen(const MatD& m) {
  Eigen::MatrixXd e(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) e(i, j) = 0.5 * (m(i, j) + m(j, i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e);
  SymEigen out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows);
  out.vectors = MatD(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out.vectors(i, j) = es.eigenvectors()(i, j);
  return out;
}

struct GeneralEigen {
  VecD values_re, values_im;
  MatD vectors_re;  // column k: real part of eigenvector k
  MatD vectors_im;
};

inline GeneralEigen general_eigen(const MatD& m) {
  Eigen::MatrixXd e(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> es(e);
  GeneralEigen out;
  const int n = m.rows;
  out.values_re.resize(n);
  out.values_im.resize(n);
  out.vectors_re = MatD(n, n);
  out.vectors_im = MatD(n, n);
  for (int k = 0; k < n; ++k) {
    out.values_re[k] = es.eigenvalues()(k).real();
    out.values_im[k] = es.eigenvalues()(k).imag();
    for (int i = 0; i < n; ++i) {
      out.vectors_re(i, k) = es.eigenvectors()(i, k).real();
      out.vectors_im(i, k) = es.eigenvectors()(i, k).imag();
    }
  }
  return out;
}

// Orthonormal basis of the null space of m (rows r, cols n), as columns.
inline MatD null_space(const MatD& m, double tol = 1e-9) {
  Eigen::MatrixXd e(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeFullV);
  int rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > tol) ++rank;
  const int n = m.cols;
  MatD out(n, n - rank);
  for (int j = rank; j < n; ++j)
    for (int i = 0; i < n; ++i) out(i, j - rank) = svd.matrixV()(i, j);
  return out;
}

// Least-squares solve (full column rank assumed).
inline VecD lstsq(const MatD& m, const VecD& b) {
  Eigen::MatrixXd e(m.rows, m.cols);
  Eigen::VectorXd eb(m.rows);
  for (int i = 0; i < m.rows; ++i) {
    eb(i) = b[i];
    for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
  }
  Eigen::VectorXd x = e.colPivHouseholderQr().solve(eb);
  return VecD(x.data(), x.data() + m.cols);
}

}  // namespace mfb
