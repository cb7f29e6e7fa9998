#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "kinetra/fields.hpp"
#include "kinetra/flow_kernels.hpp"
#include "kinetra/linalg.hpp"

namespace kinetra {

struct IntegratorConfig {
  enum class Scheme { RK4 };
  double step = 1e-3;
  Scheme scheme = Scheme::RK4;
  double max_time = 100.0;
  /// When set, trajectories leaving this window raise EscapeError; escape is
  /// an error, never a silent clamp.
  std::optional<PhaseRect> safety_window;
};

class EscapeError : public std::runtime_error {
 public:
  double exit_time;
  explicit EscapeError(double t)
      : std::runtime_error("trajectory left the safety window at |t| = " + std::to_string(t)),
        exit_time(t) {}
};

/// Sensitivity of the flow with respect to the initial velocity:
/// jx = d X / d v0, jv = d V / d v0, with jx(0) = 0 and jv(0) = I.
struct VariationalState {
  PhasePoint z;
  Mat jx, jv;
};

/// Z(t; z0) by fixed-step classical RK4 on (x', v') = (v, F(x, v)).
/// Negative t integrates backward; the flow is a group, so the backward map
/// is the inverse of the forward one.
PhasePoint integrate_flow(const ForceField& field, const PhasePoint& z0, double t,
                          const IntegratorConfig& cfg);

/// Flow plus the variational blocks: jx' = jv, jv' = grad_x F . jx
/// (+ grad_v F . jv for velocity-dependent fields). For t < 0 the jx block is
/// the backward sensitivity d_v X(-|t|; x, v) directly.
VariationalState integrate_variational(const ForceField& field, const PhasePoint& z0,
                                       double t, const IntegratorConfig& cfg);

/// Exact flows of the three potential fields (componentwise in any dimension):
/// Zero       (x + t v, v)
/// Harmonic   (x cos t + v sin t, v cos t - x sin t)
/// Repulsive  (x cosh t + v sinh t, v cosh t + x sinh t)
PhasePoint closed_form_flow(FieldKind kind, const PhasePoint& z0, double t);

/// | Z(t+s; z0) - Z(t; Z(s; z0)) |, Euclidean on concatenated coordinates.
double group_defect(const ForceField& field, const PhasePoint& z0, double t, double s,
                    const IntegratorConfig& cfg);

/// |det M(t) - 1| where M is the full 2d x 2d monodromy matrix. Liouville:
/// div(v, F) = 0 makes the exact flow volume preserving; this measures the
/// discretization error instead of hiding it.
double volume_defect(const ForceField& field, const PhasePoint& z0, double t,
                     const IntegratorConfig& cfg);

/// Safety window for grid transports: the phase window inflated by the flow
/// excursion budget |t| * (v_max + |t| * F_max).
PhaseRect inflated_window(const PhaseRect& window, const ForceField& field, double t);

/// Follows one backward trajectory across an ascending list of times,
/// invoking on_time(k, foot) at each; the trajectory is continued between
/// times rather than restarted, so a whole sweep costs one integration.
template <class OnTime>
void sweep_backward(const ForceField& field, const PhasePoint& z0,
                    std::span<const double> times, const IntegratorConfig& cfg,
                    OnTime&& on_time) {
  detail::with_force_kernel(field, [&](auto dim, const auto& force) {
    constexpr int D = decltype(dim)::value;
    double y[2 * D];
    for (int c = 0; c < D; ++c) {
      y[c] = z0.x[c];
      y[D + c] = z0.v[c];
    }
    double prev = 0.0;
    for (size_t k = 0; k < times.size(); ++k) {
      double exit_t = 0.0;
      const PhaseRect* win = cfg.safety_window ? &*cfg.safety_window : nullptr;
      if (!detail::advance<D>(force, y, -(times[k] - prev), cfg.step, win, &exit_t, prev))
        throw EscapeError(exit_t);
      prev = times[k];
      PhasePoint foot{Vec(D), Vec(D)};
      for (int c = 0; c < D; ++c) {
        foot.x[c] = y[c];
        foot.v[c] = y[D + c];
      }
      on_time(k, foot);
    }
  });
}

}  // namespace kinetra
