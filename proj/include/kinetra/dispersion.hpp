#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kinetra/fields.hpp"
#include "kinetra/flow.hpp"
#include "kinetra/grid.hpp"

namespace kinetra {

/// max over x nodes of the v Riemann sum of |f|.
double norm_linf_l1(const PhaseGridFunction& f);
/// x Riemann sum of the max over v nodes of |f|.
double norm_l1_linf(const PhaseGridFunction& f);

/// The unique positive root T of (d!/3) M T^2 e^(M T^2 / 2) = 1, the
/// computable lower bound for the maximal mixing time; +infinity when M = 0.
/// Bisection on the strictly increasing left-hand side.
double mixing_time_lower_bound(double M, int d, double tol = 1e-13);

/// Largest t with int_0^t (t-s) s e^(s^2 M/2) M ds <= t/2, the time up to
/// which the backward x-map is guaranteed (t/2)-injective in v; +infinity
/// when M = 0.
double injectivity_time_bound(double M, double tol = 1e-12);

/// Sharp per-kind mixing factors from the explicitly solvable flows, as a cap
/// on measured_norm * t^d / norm0: 1 for free transport, (t/sin t)^d for the
/// harmonic potential, (t/sinh t)^d for the repulsive one.
double sharp_mixing_factor(FieldKind kind, double t, int d);

/// Discretization allowance on the ratio measured/bound for indicator data:
/// staircase error of fiber Riemann counts (<= 2d dv per fiber, fibers live in
/// the unit v-box) plus the x resolution of the L1_x(Linf_v) norm.
double dispersion_grid_slack(int d, double dx, double dv, double t, double coeff = 1.0);

struct MixingReport {
  double tau_used = 0.0;     // regime boundary T actually applied
  double norm0 = 0.0;        // discrete L1_x(Linf_v) norm of f0
  double slack_coeff = 1.0;
  std::vector<double> times, measured, bound, ratio, slack;
  std::vector<bool> pass;       // ratio <= 1 + slack
  std::vector<bool> in_regime;  // t <= tau_used
  /// gate over guaranteed-regime times only
  bool all_pass_in_regime() const;
};

/// Transports f0 to every requested time (one continued backward sweep per
/// grid node) and compares the measured mixed norm against 2 |t|^-d norm0.
MixingReport verify_dispersion(const ForceField& field, const InitialData& f0,
                               std::span<const double> times, const GridSpec& grid,
                               const IntegratorConfig& cfg, double slack_coeff = 1.0);

struct JacobianReport {
  double lipschitz_used = 0.0;
  std::vector<double> times;
  std::vector<double> det_inv;             // max over samples of 1/|det jx(-t)|
  std::vector<double> det_bound;           // 2 |t|^-d
  std::vector<double> gronwall_norm;       // max over samples, max-entry norm of jx
  std::vector<double> gronwall_bound;      // t e^(t^2 M / 2)
  std::vector<double> injectivity_margin;  // min over sample pairs sharing an x
  std::vector<double> injectivity_bound;   // t/2
  std::vector<bool> det_pass, gronwall_pass;
  bool all_pass() const;
};

/// Integrates backward variational states at every sample and time (times
/// ascending; each sample's augmented trajectory is continued across the
/// sweep). A singular jx (|det| < 1e-14) reports det_inv = +infinity, a bound
/// violation rather than a crash. Pairs of samples sharing the same x feed
/// the injectivity margin.
JacobianReport jacobian_bounds(const ForceField& field, std::span<const PhasePoint> samples,
                               std::span<const double> times, const IntegratorConfig& cfg);

/// min over pairs v != v' of |X(-t;x,v') - X(-t;x,v)| / |v - v'|.
double injectivity_margin(const ForceField& field, const Vec& x,
                          std::span<const Vec> v_samples, double t,
                          const IntegratorConfig& cfg);

struct DetPerturbationReport {
  int dim = 0;
  int trials = 0;
  double eps = 0.0;
  long violations = 0;        // det(I+A) < 1 - d! ||A||_inf
  double min_margin = 0.0;    // min of det(I+A) - (1 - d! ||A||_inf)
  double max_lu_leibniz_gap = 0.0;  // LU vs Leibniz determinant, d <= 4
  bool pass() const { return violations == 0; }
};

/// Random matrices with max-entry norm <= eps test the determinant
/// perturbation bound det(I+A) >= 1 - d! ||A||_inf. Requires eps within the
/// smallness regime eps <= 1/(2 d d!).
DetPerturbationReport det_perturbation_check(int d, int trials, double eps, uint64_t seed);

}  // namespace kinetra
