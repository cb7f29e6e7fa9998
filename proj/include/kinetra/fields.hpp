#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kinetra/linalg.hpp"

namespace kinetra {

enum class FieldKind { Zero, Repulsive, Harmonic, Magnetic2D, Magnetic3D, Custom };

std::string field_kind_name(FieldKind k);
FieldKind field_kind_from_name(const std::string& name);

struct FieldParams {
  double b = 1.0;                 // Magnetic2D: scalar field strength
  Vec b_vector = {0.0, 0.0, 1.0}; // Magnetic3D: constant B vector
};

/// A force field F(x) or F(x,v) with Jacobian access and a Lipschitz bound
/// (max-entry norm of grad_x F over the working window). Built-in kinds carry
/// exact analytic Jacobians; custom fields fall back to central finite
/// differences with step h_fd.
///
/// Evaluation is pure and stateless after construction; concurrent calls are
/// safe.
struct ForceField {
  FieldKind kind = FieldKind::Zero;
  int dim = 1;
  bool velocity_dependent = false;
  double lipschitz_bound = 0.0;
  double h_fd = 1e-5;

  double b_scalar = 1.0;
  Vec b_vector;

  std::function<Vec(const Vec& x, const Vec& v)> custom_eval;
  std::function<Mat(const Vec& x, const Vec& v)> custom_jac_x;
  std::function<Mat(const Vec& x, const Vec& v)> custom_jac_v;

  Vec eval(const Vec& x, const Vec& v) const;
  /// grad_x F; v is ignored by x-only fields.
  Mat jacobian_x(const Vec& x, const Vec& v) const;
  Mat jacobian_x(const Vec& x) const { return jacobian_x(x, Vec::zero(dim)); }
  /// grad_v F; identically zero for x-only fields.
  Mat jacobian_v(const Vec& x, const Vec& v) const;

  bool has_analytic_jacobians() const;
};

ForceField make_builtin(FieldKind kind, int dim, const FieldParams& params = {});

/// Wraps a user callable. Jacobian callables are optional; when absent they
/// are approximated by central differences with step h_fd. The Lipschitz
/// bound may be 0 here and estimated later via estimate_lipschitz.
ForceField make_custom(int dim,
                       std::function<Vec(const Vec&, const Vec&)> eval,
                       bool velocity_dependent,
                       double lipschitz_bound = 0.0,
                       std::function<Mat(const Vec&, const Vec&)> jac_x = nullptr,
                       std::function<Mat(const Vec&, const Vec&)> jac_v = nullptr);

struct PhasePoint {
  Vec x, v;
};

struct DivergenceReport {
  double max_abs_div = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Max |trace grad_v F| over the samples. x-only fields pass trivially.
/// Tolerance: 1e-10 with analytic Jacobians, 10*h_fd with finite differences.
DivergenceReport check_divergence_free_v(const ForceField& field,
                                         std::span<const PhasePoint> samples);

struct LipschitzEstimate {
  double value = 0.0;       // lower estimate of sup ||grad_x F|| (max-entry norm)
  int samples_per_axis = 0; // sampling resolution actually used
};

/// Max-entry norm of grad_x F over a uniform sample grid (endpoints included)
/// covering the window; n_samples is the total sample budget.
LipschitzEstimate estimate_lipschitz(const ForceField& field, const Rect& window,
                                     int n_samples);

}  // namespace kinetra
