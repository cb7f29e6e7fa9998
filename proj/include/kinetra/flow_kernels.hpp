#pragma once

// Inner integration kernels for the characteristic system z' = (v, F(x,v)).
// The force dispatch happens once per trajectory batch, outside the step
// loops, so built-in fields integrate with straight-line arithmetic the
// compiler can vectorize. Everything here is an implementation detail of the
// flow/transport/dispersion modules.

#include <cmath>

#include "kinetra/fields.hpp"
#include "kinetra/linalg.hpp"

namespace kinetra::detail {

template <int D>
struct ZeroForce {
  void operator()(const double*, const double*, double* f) const {
    for (int c = 0; c < D; ++c) f[c] = 0.0;
  }
  template <int B>
  void lanes(const double*, const double*, double* fs, int nb) const {
    for (int c = 0; c < D; ++c)
      for (int l = 0; l < nb; ++l) fs[c * B + l] = 0.0;
  }
};

template <int D>
struct RepulsiveForce {
  void operator()(const double* x, const double*, double* f) const {
    for (int c = 0; c < D; ++c) f[c] = x[c];
  }
  template <int B>
  void lanes(const double* xs, const double*, double* fs, int nb) const {
    for (int c = 0; c < D; ++c)
      for (int l = 0; l < nb; ++l) fs[c * B + l] = xs[c * B + l];
  }
};

template <int D>
struct HarmonicForce {
  void operator()(const double* x, const double*, double* f) const {
    for (int c = 0; c < D; ++c) f[c] = -x[c];
  }
  template <int B>
  void lanes(const double* xs, const double*, double* fs, int nb) const {
    for (int c = 0; c < D; ++c)
      for (int l = 0; l < nb; ++l) fs[c * B + l] = -xs[c * B + l];
  }
};

struct Magnetic2DForce {
  double b;
  void operator()(const double*, const double* v, double* f) const {
    f[0] = b * v[1];
    f[1] = -b * v[0];
  }
  template <int B>
  void lanes(const double*, const double* vs, double* fs, int nb) const {
    for (int l = 0; l < nb; ++l) fs[l] = b * vs[B + l];
    for (int l = 0; l < nb; ++l) fs[B + l] = -b * vs[l];
  }
};

struct Magnetic3DForce {
  double b0, b1, b2;
  void operator()(const double*, const double* v, double* f) const {
    f[0] = v[1] * b2 - v[2] * b1;
    f[1] = v[2] * b0 - v[0] * b2;
    f[2] = v[0] * b1 - v[1] * b0;
  }
  template <int B>
  void lanes(const double*, const double* vs, double* fs, int nb) const {
    for (int l = 0; l < nb; ++l) fs[l] = vs[B + l] * b2 - vs[2 * B + l] * b1;
    for (int l = 0; l < nb; ++l) fs[B + l] = vs[2 * B + l] * b0 - vs[l] * b2;
    for (int l = 0; l < nb; ++l) fs[2 * B + l] = vs[l] * b1 - vs[B + l] * b0;
  }
};

template <int D>
struct CustomForce {
  const ForceField* field;
  void operator()(const double* x, const double* v, double* f) const {
    Vec xv(D), vv(D);
    for (int c = 0; c < D; ++c) {
      xv[c] = x[c];
      vv[c] = v[c];
    }
    Vec r = field->custom_eval(xv, vv);
    for (int c = 0; c < D; ++c) f[c] = r[c];
  }
  template <int B>
  void lanes(const double* xs, const double* vs, double* fs, int nb) const {
    Vec xv(D), vv(D);
    for (int l = 0; l < nb; ++l) {
      for (int c = 0; c < D; ++c) {
        xv[c] = xs[c * B + l];
        vv[c] = vs[c * B + l];
      }
      Vec r = field->custom_eval(xv, vv);
      for (int c = 0; c < D; ++c) fs[c * B + l] = r[c];
    }
  }
};

/// Calls fn(std::integral_constant<int, D>{}, force_functor).
template <class Fn>
decltype(auto) with_force_kernel(const ForceField& f, Fn&& fn) {
  using std::integral_constant;
  switch (f.kind) {
    case FieldKind::Zero:
      switch (f.dim) {
        case 1: return fn(integral_constant<int, 1>{}, ZeroForce<1>{});
        case 2: return fn(integral_constant<int, 2>{}, ZeroForce<2>{});
        default: return fn(integral_constant<int, 3>{}, ZeroForce<3>{});
      }
    case FieldKind::Repulsive:
      switch (f.dim) {
        case 1: return fn(integral_constant<int, 1>{}, RepulsiveForce<1>{});
        case 2: return fn(integral_constant<int, 2>{}, RepulsiveForce<2>{});
        default: return fn(integral_constant<int, 3>{}, RepulsiveForce<3>{});
      }
    case FieldKind::Harmonic:
      switch (f.dim) {
        case 1: return fn(integral_constant<int, 1>{}, HarmonicForce<1>{});
        case 2: return fn(integral_constant<int, 2>{}, HarmonicForce<2>{});
        default: return fn(integral_constant<int, 3>{}, HarmonicForce<3>{});
      }
    case FieldKind::Magnetic2D:
      return fn(integral_constant<int, 2>{}, Magnetic2DForce{f.b_scalar});
    case FieldKind::Magnetic3D:
      return fn(integral_constant<int, 3>{},
                Magnetic3DForce{f.b_vector[0], f.b_vector[1], f.b_vector[2]});
    default:
      switch (f.dim) {
        case 1: return fn(integral_constant<int, 1>{}, CustomForce<1>{&f});
        case 2: return fn(integral_constant<int, 2>{}, CustomForce<2>{&f});
        default: return fn(integral_constant<int, 3>{}, CustomForce<3>{&f});
      }
  }
}

/// One classical RK4 step of size h on y = [x(D), v(D)].
template <int D, class K>
inline void rk4_step(const K& force, double* y, double h) {
  constexpr int N = 2 * D;
  double k1[N], k2[N], k3[N], k4[N], t[N];

  auto rhs = [&force](const double* s, double* ds) {
    for (int c = 0; c < D; ++c) ds[c] = s[D + c];
    force(s, s + D, ds + D);
  };

  rhs(y, k1);
  for (int i = 0; i < N; ++i) t[i] = y[i] + 0.5 * h * k1[i];
  rhs(t, k2);
  for (int i = 0; i < N; ++i) t[i] = y[i] + 0.5 * h * k2[i];
  rhs(t, k3);
  for (int i = 0; i < N; ++i) t[i] = y[i] + h * k3[i];
  rhs(t, k4);
  for (int i = 0; i < N; ++i)
    y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

inline int step_count(double t, double h) {
  if (t == 0.0) return 0;
  // guard against ceil(1.0000000001) artifacts from repeated division
  return std::max(1, static_cast<int>(std::ceil(std::fabs(t) / h - 1e-9)));
}

/// Advances y over a signed duration with fixed steps of at most h_max.
/// Returns false (with *exit_time set) as soon as the state leaves `window`,
/// checked after every step; window == nullptr disables the check.
template <int D, class K>
inline bool advance(const K& force, double* y, double t_total, double h_max,
                    const PhaseRect* window = nullptr, double* exit_time = nullptr,
                    double t_offset = 0.0) {
  int n = step_count(t_total, h_max);
  if (n == 0) return true;
  double h = t_total / n;
  for (int s = 0; s < n; ++s) {
    rk4_step<D>(force, y, h);
    if (window) {
      bool inside = true;
      for (int c = 0; c < D && inside; ++c)
        inside = y[c] >= window->x.lo[c] && y[c] <= window->x.hi[c] &&
                 y[D + c] >= window->v.lo[c] && y[D + c] <= window->v.hi[c];
      if (!inside) {
        if (exit_time) *exit_time = t_offset + (s + 1) * h;
        return false;
      }
    }
  }
  return true;
}

/// SoA batch of backward/forward trajectories: component-major arrays with
/// compile-time lane stride B, xs[c*B + l], nb <= B live lanes.
template <int D, int B, class K>
inline void batch_rk4(const K& force, double* xs, double* vs, int nb, double t_total,
                      double h_max) {
  int n = step_count(t_total, h_max);
  if (n == 0) return;
  double h = t_total / n;
  const int NB = D * B;
  double ax[NB], av[NB];   // weighted stage accumulators
  double tx[NB], tv[NB];   // stage state
  double kx[NB], kv[NB];   // stage derivative

  for (int s = 0; s < n; ++s) {
    // k1
    for (int i = 0; i < D; ++i)
      for (int l = 0; l < nb; ++l) kx[i * B + l] = vs[i * B + l];
    force.template lanes<B>(xs, vs, kv, nb);
    for (int i = 0; i < D; ++i)
      for (int l = 0; l < nb; ++l) {
        ax[i * B + l] = kx[i * B + l];
        av[i * B + l] = kv[i * B + l];
        tx[i * B + l] = xs[i * B + l] + 0.5 * h * kx[i * B + l];
        tv[i * B + l] = vs[i * B + l] + 0.5 * h * kv[i * B + l];
      }
    // k2
    force.template lanes<B>(tx, tv, kv, nb);
    for (int i = 0; i < D; ++i)
      for (int l = 0; l < nb; ++l) {
        double dx = tv[i * B + l];
        ax[i * B + l] += 2.0 * dx;
        av[i * B + l] += 2.0 * kv[i * B + l];
        kx[i * B + l] = dx;
      }
    for (int i = 0; i < D; ++i)
      for (int l = 0; l < nb; ++l) {
        tx[i * B + l] = xs[i * B + l] + 0.5 * h * kx[i * B + l];
        tv[i * B + l] = vs[i * B + l] + 0.5 * h * kv[i * B + l];
      }
    // k3
    force.template lanes<B>(tx, tv, kv, nb);
    for (int i = 0; i < D; ++i)
      for (int l = 0; l < nb; ++l) {
        double dx = tv[i * B + l];
        ax[i * B + l] += 2.0 * dx;
        av[i * B + l] += 2.0 * kv[i * B + l];
        kx[i * B + l] = dx;
      }
    for (int i = 0; i < D; ++i)
      for (int l = 0; l < nb; ++l) {
        tx[i * B + l] = xs[i * B + l] + h * kx[i * B + l];
        tv[i * B + l] = vs[i * B + l] + h * kv[i * B + l];
      }
    // k4
    force.template lanes<B>(tx, tv, kv, nb);
    for (int i = 0; i < D; ++i)
      for (int l = 0; l < nb; ++l) {
        ax[i * B + l] += tv[i * B + l];
        av[i * B + l] += kv[i * B + l];
      }
    for (int i = 0; i < D; ++i)
      for (int l = 0; l < nb; ++l) {
        xs[i * B + l] += h / 6.0 * ax[i * B + l];
        vs[i * B + l] += h / 6.0 * av[i * B + l];
      }
  }
}

inline constexpr int kBatchLanes = 128;

}  // namespace kinetra::detail
