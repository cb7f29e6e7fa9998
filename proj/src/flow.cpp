#include "kinetra/flow.hpp"

#include <cmath>

namespace kinetra {

namespace {

void require_time(double t, const IntegratorConfig& cfg) {
  if (std::fabs(t) > cfg.max_time)
    throw std::invalid_argument("integration time exceeds cfg.max_time");
  if (!(cfg.step > 0)) throw std::invalid_argument("integrator step must be positive");
}

// Generic fixed-step RK4 over a packed state of length m with callable rhs.
template <class Rhs>
void rk4_generic(Rhs&& rhs, double* y, int m, double t, double h_max) {
  int n = detail::step_count(t, h_max);
  if (n == 0) return;
  double h = t / n;
  constexpr int M = kMaxPhaseDim + kMaxPhaseDim * kMaxPhaseDim;
  double k1[M], k2[M], k3[M], k4[M], tmp[M];
  for (int s = 0; s < n; ++s) {
    rhs(y, k1);
    for (int i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(tmp, k2);
    for (int i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(tmp, k3);
    for (int i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(tmp, k4);
    for (int i = 0; i < m; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

Vec vec_from(const double* p, int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = p[i];
  return v;
}

}  // namespace

PhasePoint integrate_flow(const ForceField& field, const PhasePoint& z0, double t,
                          const IntegratorConfig& cfg) {
  require_time(t, cfg);
  PhasePoint out{Vec(field.dim), Vec(field.dim)};
  detail::with_force_kernel(field, [&](auto dim, const auto& force) {
    constexpr int D = decltype(dim)::value;
    double y[2 * D];
    for (int c = 0; c < D; ++c) {
      y[c] = z0.x[c];
      y[D + c] = z0.v[c];
    }
    double exit_t = 0.0;
    const PhaseRect* win = cfg.safety_window ? &*cfg.safety_window : nullptr;
    if (!detail::advance<D>(force, y, t, cfg.step, win, &exit_t)) throw EscapeError(exit_t);
    for (int c = 0; c < D; ++c) {
      out.x[c] = y[c];
      out.v[c] = y[D + c];
    }
  });
  return out;
}

VariationalState integrate_variational(const ForceField& field, const PhasePoint& z0,
                                       double t, const IntegratorConfig& cfg) {
  require_time(t, cfg);
  const int d = field.dim;
  const int m = 2 * d + 2 * d * d;
  double y[kMaxPhaseDim + 2 * kMaxDim * kMaxDim];
  for (int c = 0; c < d; ++c) {
    y[c] = z0.x[c];
    y[d + c] = z0.v[c];
  }
  // jx(0) = 0, jv(0) = I
  double* jx = y + 2 * d;
  double* jv = y + 2 * d + d * d;
  for (int i = 0; i < d * d; ++i) jx[i] = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) jv[i * d + j] = (i == j) ? 1.0 : 0.0;

  const bool veldep = field.velocity_dependent;
  auto rhs = [&](const double* s, double* ds) {
    Vec x = vec_from(s, d), v = vec_from(s + d, d);
    Vec f = field.eval(x, v);
    for (int c = 0; c < d; ++c) {
      ds[c] = v[c];
      ds[d + c] = f[c];
    }
    Mat gx = field.jacobian_x(x, v);
    Mat gv = veldep ? field.jacobian_v(x, v) : Mat(d);
    const double* sjx = s + 2 * d;
    const double* sjv = s + 2 * d + d * d;
    double* djx = ds + 2 * d;
    double* djv = ds + 2 * d + d * d;
    for (int i = 0; i < d * d; ++i) djx[i] = sjv[i];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k) acc += gx(i, k) * sjx[k * d + j];
        if (veldep)
          for (int k = 0; k < d; ++k) acc += gv(i, k) * sjv[k * d + j];
        djv[i * d + j] = acc;
      }
  };
  rk4_generic(rhs, y, m, t, cfg.step);

  VariationalState out;
  out.z.x = vec_from(y, d);
  out.z.v = vec_from(y + d, d);
  if (cfg.safety_window && !cfg.safety_window->contains(out.z.x, out.z.v))
    throw EscapeError(std::fabs(t));
  out.jx = Mat(d);
  out.jv = Mat(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      out.jx(i, j) = jx[i * d + j];
      out.jv(i, j) = jv[i * d + j];
    }
  return out;
}

PhasePoint closed_form_flow(FieldKind kind, const PhasePoint& z0, double t) {
  const int d = z0.x.size();
  PhasePoint out{Vec(d), Vec(d)};
  switch (kind) {
    case FieldKind::Zero:
      for (int c = 0; c < d; ++c) {
        out.x[c] = z0.x[c] + t * z0.v[c];
        out.v[c] = z0.v[c];
      }
      return out;
    case FieldKind::Harmonic: {
      double ct = std::cos(t), st = std::sin(t);
      for (int c = 0; c < d; ++c) {
        out.x[c] = z0.x[c] * ct + z0.v[c] * st;
        out.v[c] = z0.v[c] * ct - z0.x[c] * st;
      }
      return out;
    }
    case FieldKind::Repulsive: {
      double ch = std::cosh(t), sh = std::sinh(t);
      for (int c = 0; c < d; ++c) {
        out.x[c] = z0.x[c] * ch + z0.v[c] * sh;
        out.v[c] = z0.v[c] * ch + z0.x[c] * sh;
      }
      return out;
    }
    default:
      throw std::invalid_argument("closed_form_flow: no closed form for this kind");
  }
}

double group_defect(const ForceField& field, const PhasePoint& z0, double t, double s,
                    const IntegratorConfig& cfg) {
  PhasePoint direct = integrate_flow(field, z0, t + s, cfg);
  PhasePoint staged = integrate_flow(field, integrate_flow(field, z0, s, cfg), t, cfg);
  double acc = 0.0;
  for (int c = 0; c < field.dim; ++c) {
    double dx = direct.x[c] - staged.x[c];
    double dv = direct.v[c] - staged.v[c];
    acc += dx * dx + dv * dv;
  }
  return std::sqrt(acc);
}

double volume_defect(const ForceField& field, const PhasePoint& z0, double t,
                     const IntegratorConfig& cfg) {
  require_time(t, cfg);
  const int d = field.dim;
  const int n = 2 * d;
  const int m = n + n * n;
  double y[kMaxPhaseDim + kMaxPhaseDim * kMaxPhaseDim];
  for (int c = 0; c < d; ++c) {
    y[c] = z0.x[c];
    y[d + c] = z0.v[c];
  }
  double* mono = y + n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mono[i * n + j] = (i == j) ? 1.0 : 0.0;

  const bool veldep = field.velocity_dependent;
  auto rhs = [&](const double* st, double* ds) {
    Vec x = vec_from(st, d), v = vec_from(st + d, d);
    Vec f = field.eval(x, v);
    for (int c = 0; c < d; ++c) {
      ds[c] = v[c];
      ds[d + c] = f[c];
    }
    Mat gx = field.jacobian_x(x, v);
    Mat gv = veldep ? field.jacobian_v(x, v) : Mat(d);
    const double* sm = st + n;
    double* dm = ds + n;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < n; ++j) dm[i * n + j] = sm[(d + i) * n + j];
    for (int a = 0; a < d; ++a)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int b = 0; b < d; ++b) acc += gx(a, b) * sm[b * n + j];
        if (veldep)
          for (int b = 0; b < d; ++b) acc += gv(a, b) * sm[(d + b) * n + j];
        dm[(d + a) * n + j] = acc;
      }
  };
  rk4_generic(rhs, y, m, t, cfg.step);
  return std::fabs(lu_determinant(mono, n, n) - 1.0);
}

PhaseRect inflated_window(const PhaseRect& window, const ForceField& field, double t) {
  const int d = window.dim();
  double v_max = 0.0;
  for (int c = 0; c < d; ++c)
    v_max = std::max(v_max, std::max(std::fabs(window.v.lo[c]), std::fabs(window.v.hi[c])));
  // crude sup of |F| over the window corners and center
  double f_max = 0.0;
  Vec xs[3] = {window.x.lo, window.x.hi, 0.5 * (window.x.lo + window.x.hi)};
  Vec vs[3] = {window.v.lo, window.v.hi, 0.5 * (window.v.lo + window.v.hi)};
  for (const Vec& x : xs)
    for (const Vec& v : vs) f_max = std::max(f_max, field.eval(x, v).norm_inf());
  double pad = std::fabs(t) * (v_max + std::fabs(t) * f_max);
  PhaseRect out = window;
  for (int c = 0; c < d; ++c) {
    out.x.lo[c] -= pad;
    out.x.hi[c] += pad;
    out.v.lo[c] -= pad;
    out.v.hi[c] += pad;
  }
  return out;
}

}  // namespace kinetra
