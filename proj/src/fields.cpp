#include "kinetra/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace kinetra {

std::string field_kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::Zero: return "zero";
    case FieldKind::Repulsive: return "repulsive";
    case FieldKind::Harmonic: return "harmonic";
    case FieldKind::Magnetic2D: return "magnetic2d";
    case FieldKind::Magnetic3D: return "magnetic3d";
    case FieldKind::Custom: return "custom";
  }
  return "unknown";
}

FieldKind field_kind_from_name(const std::string& name) {
  if (name == "zero") return FieldKind::Zero;
  if (name == "repulsive") return FieldKind::Repulsive;
  if (name == "harmonic") return FieldKind::Harmonic;
  if (name == "magnetic2d") return FieldKind::Magnetic2D;
  if (name == "magnetic3d") return FieldKind::Magnetic3D;
  if (name == "custom") return FieldKind::Custom;
  throw std::invalid_argument("unknown field kind: " + name);
}

Vec ForceField::eval(const Vec& x, const Vec& v) const {
  Vec f(dim);
  switch (kind) {
    case FieldKind::Zero:
      break;
    case FieldKind::Repulsive:
      for (int i = 0; i < dim; ++i) f[i] = x[i];
      break;
    case FieldKind::Harmonic:
      for (int i = 0; i < dim; ++i) f[i] = -x[i];
      break;
    case FieldKind::Magnetic2D:
      f[0] = b_scalar * v[1];
      f[1] = -b_scalar * v[0];
      break;
    case FieldKind::Magnetic3D:
      // F = v x B
      f[0] = v[1] * b_vector[2] - v[2] * b_vector[1];
      f[1] = v[2] * b_vector[0] - v[0] * b_vector[2];
      f[2] = v[0] * b_vector[1] - v[1] * b_vector[0];
      break;
    case FieldKind::Custom:
      return custom_eval(x, v);
  }
  return f;
}

bool ForceField::has_analytic_jacobians() const {
  if (kind != FieldKind::Custom) return true;
  bool jx = static_cast<bool>(custom_jac_x);
  bool jv = !velocity_dependent || static_cast<bool>(custom_jac_v);
  return jx && jv;
}

Mat ForceField::jacobian_x(const Vec& x, const Vec& v) const {
  Mat j(dim);
  switch (kind) {
    case FieldKind::Zero:
    case FieldKind::Magnetic2D:
    case FieldKind::Magnetic3D:
      return j;
    case FieldKind::Repulsive:
      return Mat::identity(dim);
    case FieldKind::Harmonic: {
      Mat m = Mat::identity(dim);
      return -1.0 * m;
    }
    case FieldKind::Custom:
      break;
  }
  if (custom_jac_x) return custom_jac_x(x, v);
  // central differences, column i = dF/dx_i
  for (int i = 0; i < dim; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h_fd;
    xm[i] -= h_fd;
    Vec fp = custom_eval(xp, v), fm = custom_eval(xm, v);
    for (int r = 0; r < dim; ++r) j(r, i) = (fp[r] - fm[r]) / (2.0 * h_fd);
  }
  return j;
}

Mat ForceField::jacobian_v(const Vec& x, const Vec& v) const {
  Mat j(dim);
  switch (kind) {
    case FieldKind::Zero:
    case FieldKind::Repulsive:
    case FieldKind::Harmonic:
      return j;
    case FieldKind::Magnetic2D:
      j(0, 1) = b_scalar;
      j(1, 0) = -b_scalar;
      return j;
    case FieldKind::Magnetic3D:
      j(0, 1) = b_vector[2];
      j(0, 2) = -b_vector[1];
      j(1, 0) = -b_vector[2];
      j(1, 2) = b_vector[0];
      j(2, 0) = b_vector[1];
      j(2, 1) = -b_vector[0];
      return j;
    case FieldKind::Custom:
      break;
  }
  if (!velocity_dependent) return j;
  if (custom_jac_v) return custom_jac_v(x, v);
  for (int i = 0; i < dim; ++i) {
    Vec vp = v, vm = v;
    vp[i] += h_fd;
    vm[i] -= h_fd;
    Vec fp = custom_eval(x, vp), fm = custom_eval(x, vm);
    for (int r = 0; r < dim; ++r) j(r, i) = (fp[r] - fm[r]) / (2.0 * h_fd);
  }
  return j;
}

ForceField make_builtin(FieldKind kind, int dim, const FieldParams& params) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("make_builtin: dim out of range");
  if (kind == FieldKind::Magnetic2D && dim != 2)
    throw std::invalid_argument("make_builtin: Magnetic2D requires dim = 2");
  if (kind == FieldKind::Magnetic3D && dim != 3)
    throw std::invalid_argument("make_builtin: Magnetic3D requires dim = 3");
  if (kind == FieldKind::Custom)
    throw std::invalid_argument("make_builtin: use make_custom for custom fields");

  ForceField f;
  f.kind = kind;
  f.dim = dim;
  f.b_scalar = params.b;
  f.b_vector = params.b_vector;
  f.velocity_dependent = (kind == FieldKind::Magnetic2D || kind == FieldKind::Magnetic3D);
  switch (kind) {
    case FieldKind::Zero:
    case FieldKind::Magnetic2D:
    case FieldKind::Magnetic3D:
      f.lipschitz_bound = 0.0;  // grad_x F vanishes identically
      break;
    case FieldKind::Repulsive:
    case FieldKind::Harmonic:
      f.lipschitz_bound = 1.0;
      break;
    default:
      break;
  }
  return f;
}

ForceField make_custom(int dim, std::function<Vec(const Vec&, const Vec&)> eval,
                       bool velocity_dependent, double lipschitz_bound,
                       std::function<Mat(const Vec&, const Vec&)> jac_x,
                       std::function<Mat(const Vec&, const Vec&)> jac_v) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("make_custom: dim out of range");
  if (!eval) throw std::invalid_argument("make_custom: eval callable required");
  ForceField f;
  f.kind = FieldKind::Custom;
  f.dim = dim;
  f.velocity_dependent = velocity_dependent;
  f.lipschitz_bound = lipschitz_bound;
  f.custom_eval = std::move(eval);
  f.custom_jac_x = std::move(jac_x);
  f.custom_jac_v = std::move(jac_v);
  return f;
}

DivergenceReport check_divergence_free_v(const ForceField& field,
                                         std::span<const PhasePoint> samples) {
  DivergenceReport rep;
  rep.tolerance = field.has_analytic_jacobians() ? 1e-10 : 10.0 * field.h_fd;
  if (!field.velocity_dependent) {
    rep.max_abs_div = 0.0;
    rep.pass = true;
    return rep;
  }
  for (const auto& p : samples) {
    Mat jv = field.jacobian_v(p.x, p.v);
    double tr = 0;
    for (int i = 0; i < field.dim; ++i) tr += jv(i, i);
    rep.max_abs_div = std::max(rep.max_abs_div, std::fabs(tr));
  }
  rep.pass = rep.max_abs_div <= rep.tolerance;
  return rep;
}

LipschitzEstimate estimate_lipschitz(const ForceField& field, const Rect& window,
                                     int n_samples) {
  if (!window.nondegenerate()) throw std::invalid_argument("estimate_lipschitz: empty window");
  if (n_samples < 1) throw std::invalid_argument("estimate_lipschitz: n_samples < 1");
  int d = window.dim();
  int per_axis = std::max(2, static_cast<int>(std::floor(std::pow(double(n_samples), 1.0 / d))));
  if (d == 1) per_axis = std::max(2, n_samples);

  LipschitzEstimate est;
  est.samples_per_axis = per_axis;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis;
  Vec len = window.lengths();
  for (long flat = 0; flat < total; ++flat) {
    Vec x(d);
    long rem = flat;
    for (int i = d - 1; i >= 0; --i) {
      int idx = static_cast<int>(rem % per_axis);
      rem /= per_axis;
      x[i] = window.lo[i] + len[i] * idx / (per_axis - 1);
    }
    est.value = std::max(est.value, field.jacobian_x(x).max_entry_norm());
  }
  return est;
}

}  // namespace kinetra
