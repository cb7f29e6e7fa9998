#pragma once

#include "kinetra/fields.hpp"
#include "kinetra/flow.hpp"
#include "kinetra/grid.hpp"

namespace kinetra {

/// Semi-Lagrangian solution of the Cauchy problem
///   d_t f + v.grad_x f + F.grad_v f = 0,  f(0) = f0:
/// every grid node gets f0 evaluated at the backward foot Z(-t; x, v), so the
/// transport is exact up to the ODE error, with no numerical diffusion.
PhaseGridFunction solve_cauchy(const ForceField& field, const InitialData& f0, double t,
                               const GridSpec& grid, const IntegratorConfig& cfg);

/// Resolvent of lambda + v.grad_x + F.grad_v at lambda > 0:
///   (R_lambda g)(x,v) = int_0^inf e^(-lambda s) g(Z(-s; x, v)) ds,
/// computed by composite trapezoid on [0, S] with the truncation tail and the
/// quadrature error each kept at or below tail_tol (relative to sup |g|).
PhaseGridFunction resolvent(const ForceField& field, const InitialData& g, double lambda,
                            const GridSpec& grid, const IntegratorConfig& cfg,
                            double tail_tol = 1e-8);

/// rho(x) = sum_v f(x,v) Psi(v) dv (midpoint Riemann sum over the v grid).
XGridFunction velocity_moment(const PhaseGridFunction& f, const TestFunction& psi);

/// Green/duality residual for compactly supported f:
///   | II f Phi0  -  ( II f Phi(t) - int_0^t II Phi(s) (v.grad_x f + F.grad_v f) ds ) |
/// with Phi(s) the transported Phi0 and the time integral a composite
/// trapezoid over n_slices. `df` holds the values of v.grad_x f + F.grad_v f
/// on the same grid as f.
double duality_check(const ForceField& field, const PhaseGridFunction& f,
                     const PhaseGridFunction& df, const InitialData& phi0, double t,
                     int n_slices, const IntegratorConfig& cfg);

/// Discrete H^s seminorm of rho on its window treated as a torus:
///   ( sum_xi (1 + |xi|^2)^s |rho_hat(xi)|^2 )^(1/2),
/// with xi the discrete frequencies scaled by 2*pi/window-length and rho_hat
/// normalized so that s = 0 reproduces the discrete L2 norm.
double sobolev_seminorm(const XGridFunction& rho, double s);

}  // namespace kinetra
