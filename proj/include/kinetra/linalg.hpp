#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace kinetra {

inline constexpr int kMaxDim = 3;            // space dimension cap
inline constexpr int kMaxPhaseDim = 2 * kMaxDim;

/// Fixed-capacity vector in R^d, d <= kMaxDim.
struct Vec {
  int n = 0;
  std::array<double, kMaxDim> e{};

  Vec() = default;
  explicit Vec(int dim) : n(dim) {}
  Vec(std::initializer_list<double> xs) : n(static_cast<int>(xs.size())) {
    int i = 0;
    for (double x : xs) e[i++] = x;
  }

  double operator[](int i) const { return e[i]; }
  double& operator[](int i) { return e[i]; }
  int size() const { return n; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n; ++i) e[i] += o.e[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n; ++i) e[i] -= o.e[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n; ++i) e[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += e[i] * o.e[i];
    return s;
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double norm_inf() const {
    double m = 0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::fabs(e[i]));
    return m;
  }
  bool all_finite() const {
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(e[i])) return false;
    return true;
  }

  static Vec zero(int dim) { return Vec(dim); }
  static Vec constant(int dim, double c) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v.e[i] = c;
    return v;
  }
};

/// Fixed-capacity d x d matrix, row-major, d <= kMaxDim.
struct Mat {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> e{};

  Mat() = default;
  explicit Mat(int dim) : n(dim) {}

  double operator()(int i, int j) const { return e[i * kMaxDim + j]; }
  double& operator()(int i, int j) { return e[i * kMaxDim + j]; }
  int size() const { return n; }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (*this)(i, j) += o(i, j);
    return *this;
  }
  Mat& operator*=(double s) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (*this)(i, j) *= s;
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator*(double s, Mat a) { return a *= s; }

  Vec operator*(const Vec& v) const {
    Vec r(n);
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }
  Mat operator*(const Mat& o) const {
    Mat r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int k = 0; k < n; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }

  /// Max absolute entry; the matrix norm used for all Lipschitz and
  /// Gronwall bookkeeping in this project.
  double max_entry_norm() const {
    double m = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m = std::max(m, std::fabs((*this)(i, j)));
    return m;
  }

  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat zero(int dim) { return Mat(dim); }
};

/// Determinant by LU factorization with partial pivoting. `a` is n x n
/// row-major with row stride `stride` (pass n for a packed matrix); n <= 8.
inline double lu_determinant(const double* a, int n, int stride) {
  if (n < 1 || n > 8) throw std::invalid_argument("lu_determinant: n out of range");
  double m[8][8];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = a[i * stride + j];
  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(m[i][k]) > std::fabs(m[piv][k])) piv = i;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m[k][j], m[piv][j]);
      det = -det;
    }
    if (m[k][k] == 0.0) return 0.0;
    det *= m[k][k];
    for (int i = k + 1; i < n; ++i) {
      double f = m[i][k] / m[k][k];
      for (int j = k + 1; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

inline double lu_determinant(const Mat& m) { return lu_determinant(m.e.data(), m.n, kMaxDim); }

/// Determinant by full Leibniz expansion (sum over permutations); n <= 6.
/// Deliberately a different algorithm from lu_determinant so the two can
/// cross-check each other.
inline double leibniz_determinant(const double* a, int n, int stride) {
  if (n < 1 || n > 6) throw std::invalid_argument("leibniz_determinant: n out of range");
  int perm[6];
  for (int i = 0; i < n; ++i) perm[i] = i;
  double det = 0.0;
  // Iterate permutations in lexicographic order, tracking parity by
  // counting inversions explicitly (robust, n is tiny).
  while (true) {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double term = (inversions % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) term *= a[i * stride + perm[i]];
    det += term;
    // next_permutation, hand-rolled to keep this header light
    int i = n - 2;
    while (i >= 0 && perm[i] >= perm[i + 1]) --i;
    if (i < 0) break;
    int j = n - 1;
    while (perm[j] <= perm[i]) --j;
    std::swap(perm[i], perm[j]);
    for (int l = i + 1, r = n - 1; l < r; ++l, --r) std::swap(perm[l], perm[r]);
  }
  return det;
}

inline double leibniz_determinant(const Mat& m) {
  return leibniz_determinant(m.e.data(), m.n, kMaxDim);
}

/// Axis-aligned box in R^d.
struct Rect {
  Vec lo, hi;

  Rect() = default;
  Rect(Vec l, Vec h) : lo(l), hi(h) {
    if (l.size() != h.size()) throw std::invalid_argument("Rect: dim mismatch");
  }
  static Rect cube(int dim, double a, double b) {
    return Rect(Vec::constant(dim, a), Vec::constant(dim, b));
  }

  int dim() const { return lo.size(); }
  bool contains(const Vec& p) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
  double volume() const {
    double v = 1;
    for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
    return v;
  }
  Vec lengths() const {
    Vec l(dim());
    for (int i = 0; i < dim(); ++i) l[i] = hi[i] - lo[i];
    return l;
  }
  bool nondegenerate() const {
    for (int i = 0; i < dim(); ++i)
      if (!(hi[i] > lo[i])) return false;
    return dim() > 0;
  }
};

/// Rectangular phase-space window [x window] x [v window].
struct PhaseRect {
  Rect x, v;

  PhaseRect() = default;
  PhaseRect(Rect xr, Rect vr) : x(xr), v(vr) {
    if (xr.dim() != vr.dim()) throw std::invalid_argument("PhaseRect: dim mismatch");
  }
  static PhaseRect cube(int dim, double a, double b) {
    return PhaseRect(Rect::cube(dim, a, b), Rect::cube(dim, a, b));
  }

  int dim() const { return x.dim(); }
  bool contains(const Vec& px, const Vec& pv) const {
    return x.contains(px) && v.contains(pv);
  }
  double volume() const { return x.volume() * v.volume(); }
};

}  // namespace kinetra
