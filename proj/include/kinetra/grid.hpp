#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kinetra/fields.hpp"
#include "kinetra/linalg.hpp"

namespace kinetra {

/// A uniform cell-centered tensor grid over a rectangular phase-space window:
/// nx points per x axis, nv points per v axis. All integrals over such grids
/// are midpoint Riemann sums.
struct GridSpec {
  PhaseRect window;
  int nx = 64;
  int nv = 64;

  int dim() const { return window.dim(); }
  long nx_total() const {
    long t = 1;
    for (int i = 0; i < dim(); ++i) t *= nx;
    return t;
  }
  long nv_total() const {
    long t = 1;
    for (int i = 0; i < dim(); ++i) t *= nv;
    return t;
  }
  double dx(int axis) const { return (window.x.hi[axis] - window.x.lo[axis]) / nx; }
  double dv(int axis) const { return (window.v.hi[axis] - window.v.lo[axis]) / nv; }
  double cell_volume_x() const {
    double v = 1;
    for (int i = 0; i < dim(); ++i) v *= dx(i);
    return v;
  }
  double cell_volume_v() const {
    double v = 1;
    for (int i = 0; i < dim(); ++i) v *= dv(i);
    return v;
  }
  Vec x_node(long flat) const {
    const int d = dim();
    Vec p(d);
    for (int i = d - 1; i >= 0; --i) {
      p[i] = window.x.lo[i] + (flat % nx + 0.5) * dx(i);
      flat /= nx;
    }
    return p;
  }
  Vec v_node(long flat) const {
    const int d = dim();
    Vec p(d);
    for (int i = d - 1; i >= 0; --i) {
      p[i] = window.v.lo[i] + (flat % nv + 0.5) * dv(i);
      flat /= nv;
    }
    return p;
  }
  /// max per-axis spacing, the resolution scale used in slack formulas
  double max_dx() const {
    double m = 0;
    for (int i = 0; i < dim(); ++i) m = std::max(m, dx(i));
    return m;
  }
  double max_dv() const {
    double m = 0;
    for (int i = 0; i < dim(); ++i) m = std::max(m, dv(i));
    return m;
  }
};

/// Values of f at the cell centers of a GridSpec, x axes outermost:
/// flat index = ix_flat * nv_total + iv_flat.
class PhaseGridFunction {
 public:
  GridSpec spec;
  std::vector<double> values;

  PhaseGridFunction() = default;
  PhaseGridFunction(GridSpec s, std::vector<double> vals);

  static PhaseGridFunction sample(const GridSpec& spec,
                                  const std::function<double(const Vec&, const Vec&)>& fn);

  double mass() const { return mass_; }  // cached at construction
  double riemann_mass() const;           // recomputed, for invariant checks

  double at(long ix, long iv) const { return values[ix * spec.nv_total() + iv]; }
  double& at(long ix, long iv) { return values[ix * spec.nv_total() + iv]; }

 private:
  double mass_ = 0.0;
};

/// Initial data: an evaluatable profile clamped to zero outside its support
/// window, so indicator data stays exactly {0,1}-valued along characteristics.
struct InitialData {
  std::function<double(const Vec& x, const Vec& v)> fn;
  PhaseRect support_window;
  /// Set when the data is exactly the indicator of a phase box; fast paths in
  /// the verifiers use the box directly.
  std::optional<PhaseRect> indicator_box;

  double operator()(const Vec& x, const Vec& v) const {
    if (!support_window.contains(x, v)) return 0.0;
    return fn(x, v);
  }

  static InitialData indicator(const PhaseRect& box);
  static InitialData analytic(std::function<double(const Vec&, const Vec&)> f,
                              const PhaseRect& support);
  /// Nearest-cell lookup of an existing grid function (zero outside its window).
  static InitialData from_grid(std::shared_ptr<const PhaseGridFunction> g);
};

/// Velocity test function, C^1 with compact support in B(0, support_radius).
struct TestFunction {
  std::function<double(const Vec& v)> eval;
  std::function<Vec(const Vec& v)> grad;
  double support_radius = 1.0;
};

/// Psi(v) = (1 - |v|^2 / R^2)^2 inside B(0,R); C^1 across the boundary.
TestFunction bump_test_function(double radius);
/// Psi = 1 on B(0,R), 0 outside (not C^1; for plain moments and norms).
TestFunction indicator_test_function(double radius);

/// Separable smooth bump in phase space, b(u) = (1-u^2)^4 on |u|<1 per axis:
/// value, analytic gradients, and the transport derivative v.grad_x + F.grad_v
/// needed by the duality checks.
struct SmoothBump {
  Vec center_x, center_v;
  double radius_x = 1.0, radius_v = 1.0;
  double amplitude = 1.0;

  double value(const Vec& x, const Vec& v) const;
  Vec grad_x(const Vec& x, const Vec& v) const;
  Vec grad_v(const Vec& x, const Vec& v) const;
  double transport_derivative(const ForceField& field, const Vec& x, const Vec& v) const;

  PhaseRect support() const;
  InitialData as_initial_data() const;
};

/// A function on the x grid alone (velocity moments, densities).
struct XGridFunction {
  Rect window;
  int n = 0;
  std::vector<double> values;

  int dim() const { return window.dim(); }
  long total() const {
    long t = 1;
    for (int i = 0; i < dim(); ++i) t *= n;
    return t;
  }
  double dx(int axis) const { return (window.hi[axis] - window.lo[axis]) / n; }
  double cell_volume() const {
    double v = 1;
    for (int i = 0; i < dim(); ++i) v *= dx(i);
    return v;
  }
  Vec node(long flat) const {
    const int d = dim();
    Vec p(d);
    for (int i = d - 1; i >= 0; --i) {
      p[i] = window.lo[i] + (flat % n + 0.5) * dx(i);
      flat /= n;
    }
    return p;
  }
  static XGridFunction sample(const Rect& window, int n,
                              const std::function<double(const Vec&)>& fn);
};

/// Container format: one JSON header line {dim, window, nx, nv}, then values
/// in row-major order (x axes outermost), one per line.
void save_phase_grid(const std::string& path, const PhaseGridFunction& f);
PhaseGridFunction load_phase_grid(const std::string& path);

/// CSV rows x_1,...,x_d,value.
void save_x_grid_csv(const std::string& path, const XGridFunction& rho,
                     const std::string& header_comment = "");

}  // namespace kinetra
