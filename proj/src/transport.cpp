#include "kinetra/transport.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "kinetra/parallel.hpp"

namespace kinetra {

namespace {

void require_field_grid(const ForceField& field, const GridSpec& grid) {
  if (field.dim != grid.dim())
    throw std::invalid_argument("field dimension does not match grid dimension");
}

// f0 evaluation at a backward foot stored as raw state y = [x, v].
template <int D>
inline double eval_initial(const InitialData& f0, const double* y) {
  if (f0.indicator_box) {
    const PhaseRect& b = *f0.indicator_box;
    for (int c = 0; c < D; ++c) {
      if (y[c] < b.x.lo[c] || y[c] > b.x.hi[c]) return 0.0;
      if (y[D + c] < b.v.lo[c] || y[D + c] > b.v.hi[c]) return 0.0;
    }
    return 1.0;
  }
  Vec x(D), v(D);
  for (int c = 0; c < D; ++c) {
    x[c] = y[c];
    v[c] = y[D + c];
  }
  return f0(x, v);
}

}  // namespace

PhaseGridFunction solve_cauchy(const ForceField& field, const InitialData& f0, double t,
                               const GridSpec& grid, const IntegratorConfig& cfg) {
  require_field_grid(field, grid);
  if (std::fabs(t) > cfg.max_time)
    throw std::invalid_argument("solve_cauchy: |t| exceeds cfg.max_time");
  const long NX = grid.nx_total(), NV = grid.nv_total();
  std::vector<double> vals(NX * NV);

  detail::with_force_kernel(field, [&](auto dimc, const auto& force) {
    constexpr int D = decltype(dimc)::value;
    constexpr int B = detail::kBatchLanes;
    parallel_for(NX, [&](long ix) {
      Vec x = grid.x_node(ix);
      if (!cfg.safety_window) {
        double xs[D * B], vs[D * B];
        for (long base = 0; base < NV; base += B) {
          int nb = static_cast<int>(std::min<long>(B, NV - base));
          for (int l = 0; l < nb; ++l) {
            Vec v = grid.v_node(base + l);
            for (int c = 0; c < D; ++c) {
              xs[c * B + l] = x[c];
              vs[c * B + l] = v[c];
            }
          }
          detail::batch_rk4<D, B>(force, xs, vs, nb, -t, cfg.step);
          for (int l = 0; l < nb; ++l) {
            double y[2 * D];
            for (int c = 0; c < D; ++c) {
              y[c] = xs[c * B + l];
              y[D + c] = vs[c * B + l];
            }
            vals[ix * NV + base + l] = eval_initial<D>(f0, y);
          }
        }
      } else {
        const PhaseRect* win = &*cfg.safety_window;
        for (long iv = 0; iv < NV; ++iv) {
          double y[2 * D];
          Vec v = grid.v_node(iv);
          for (int c = 0; c < D; ++c) {
            y[c] = x[c];
            y[D + c] = v[c];
          }
          double exit_t = 0.0;
          if (!detail::advance<D>(force, y, -t, cfg.step, win, &exit_t))
            throw EscapeError(exit_t);
          vals[ix * NV + iv] = eval_initial<D>(f0, y);
        }
      }
    });
  });
  return PhaseGridFunction(grid, std::move(vals));
}

PhaseGridFunction resolvent(const ForceField& field, const InitialData& g, double lambda,
                            const GridSpec& grid, const IntegratorConfig& cfg,
                            double tail_tol) {
  require_field_grid(field, grid);
  if (!(lambda > 0)) throw std::invalid_argument("resolvent: lambda must be positive");
  if (!(tail_tol > 0)) throw std::invalid_argument("resolvent: tail_tol must be positive");
  const long NX = grid.nx_total(), NV = grid.nv_total();

  double g_sup = 0.0;
  for (long ix = 0; ix < NX; ++ix) {
    Vec x = grid.x_node(ix);
    for (long iv = 0; iv < NV; ++iv)
      g_sup = std::max(g_sup, std::fabs(g(x, grid.v_node(iv))));
  }
  std::vector<double> vals(NX * NV, 0.0);
  if (g_sup > 0.0) {
    // S makes the truncated tail g_sup e^(-lambda S) / lambda equal tail_tol;
    // h keeps the trapezoid error at the same level (envelope curvature model
    // h^2 lambda g_sup / 12 with a factor-2 margin for the composition with
    // the flow).
    double S = std::log(g_sup / (lambda * tail_tol)) / lambda;
    if (S > 0.0) {
      double h = std::min(cfg.step, std::sqrt(6.0 * tail_tol / (lambda * g_sup)));
      int n = std::max(16, detail::step_count(S, h));
      double hs = S / n;
      detail::with_force_kernel(field, [&](auto dimc, const auto& force) {
        constexpr int D = decltype(dimc)::value;
        const PhaseRect* win = cfg.safety_window ? &*cfg.safety_window : nullptr;
        parallel_for(NX, [&](long ix) {
          Vec x = grid.x_node(ix);
          for (long iv = 0; iv < NV; ++iv) {
            Vec v = grid.v_node(iv);
            double y[2 * D];
            for (int c = 0; c < D; ++c) {
              y[c] = x[c];
              y[D + c] = v[c];
            }
            double acc = 0.5 * eval_initial<D>(g, y);
            for (int j = 1; j <= n; ++j) {
              double exit_t = 0.0;
              if (!detail::advance<D>(force, y, -hs, hs, win, &exit_t, (j - 1) * hs))
                throw EscapeError(exit_t);
              double w = (j == n) ? 0.5 : 1.0;
              acc += w * std::exp(-lambda * j * hs) * eval_initial<D>(g, y);
            }
            vals[ix * NV + iv] = acc * hs;
          }
        });
      });
    }
  }
  return PhaseGridFunction(grid, std::move(vals));
}

XGridFunction velocity_moment(const PhaseGridFunction& f, const TestFunction& psi) {
  const GridSpec& s = f.spec;
  XGridFunction rho;
  rho.window = s.window.x;
  rho.n = s.nx;
  rho.values.assign(s.nx_total(), 0.0);
  const long NV = s.nv_total();
  const double dv = s.cell_volume_v();
  std::vector<double> psi_vals(NV);
  for (long iv = 0; iv < NV; ++iv) psi_vals[iv] = psi.eval(s.v_node(iv));
  for (long ix = 0; ix < s.nx_total(); ++ix) {
    double acc = 0.0;
    for (long iv = 0; iv < NV; ++iv) acc += f.at(ix, iv) * psi_vals[iv];
    rho.values[ix] = acc * dv;
  }
  return rho;
}

double duality_check(const ForceField& field, const PhaseGridFunction& f,
                     const PhaseGridFunction& df, const InitialData& phi0, double t,
                     int n_slices, const IntegratorConfig& cfg) {
  require_field_grid(field, f.spec);
  if (f.values.size() != df.values.size() || f.spec.nx != df.spec.nx ||
      f.spec.nv != df.spec.nv)
    throw std::invalid_argument("duality_check: f and df must live on the same grid");
  if (n_slices < 1) throw std::invalid_argument("duality_check: n_slices < 1");
  if (t == 0.0) {
    // Phi(0) = Phi0 and the time integral is empty; the identity is exact.
    return 0.0;
  }

  const GridSpec& grid = f.spec;
  const long NX = grid.nx_total(), NV = grid.nv_total();
  const double vol = grid.cell_volume_x() * grid.cell_volume_v();
  const int nt = n_slices;

  std::vector<double> slice_times(nt);
  for (int j = 1; j <= nt; ++j) slice_times[j - 1] = t * j / nt;

  // per-x partial sums, reduced serially afterwards so results do not depend
  // on the worker count
  std::vector<double> part_time((nt + 1) * NX, 0.0);
  std::vector<double> part_final(NX, 0.0);
  std::vector<double> part_lhs(NX, 0.0);

  parallel_for(NX, [&](long ix) {
    Vec x = grid.x_node(ix);
    for (long iv = 0; iv < NV; ++iv) {
      double fv = f.at(ix, iv);
      double dfv = df.at(ix, iv);
      if (fv == 0.0 && dfv == 0.0) continue;
      Vec v = grid.v_node(iv);
      double phi_here = phi0(x, v);
      part_lhs[ix] += fv * phi_here;
      part_time[0 * NX + ix] += phi_here * dfv;
      sweep_backward(field, PhasePoint{x, v}, slice_times, cfg,
                     [&](size_t k, const PhasePoint& foot) {
                       double phi_s = phi0(foot.x, foot.v);
                       part_time[(k + 1) * NX + ix] += phi_s * dfv;
                       if (k + 1 == static_cast<size_t>(nt)) part_final[ix] += fv * phi_s;
                     });
    }
  });

  double lhs = 0.0, final_term = 0.0;
  for (long ix = 0; ix < NX; ++ix) {
    lhs += part_lhs[ix];
    final_term += part_final[ix];
  }
  lhs *= vol;
  final_term *= vol;

  double ds = t / nt;
  double time_integral = 0.0;
  for (int j = 0; j <= nt; ++j) {
    double w = (j == 0 || j == nt) ? 0.5 : 1.0;
    double slice = 0.0;
    for (long ix = 0; ix < NX; ++ix) slice += part_time[j * NX + ix];
    time_integral += w * slice;
  }
  time_integral *= ds * vol;

  return std::fabs(lhs - (final_term - time_integral));
}

double sobolev_seminorm(const XGridFunction& rho, double s) {
  const int d = rho.dim();
  const int n = rho.n;
  const long total = rho.total();
  std::vector<std::complex<double>> spec(rho.values.begin(), rho.values.end());
  std::vector<std::complex<double>> line(n), out(n);

  // separable DFT, one axis at a time; sizes here are small enough that the
  // O(n^2) per-line transform is not worth an FFT dependency
  const double two_pi = 2.0 * 3.14159265358979323846;
  long stride = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    long n_lines = total / n;
    for (long lineno = 0; lineno < n_lines; ++lineno) {
      // decompose lineno into (outer, inner) around this axis
      long inner = lineno % stride;
      long outer = lineno / stride;
      long base = outer * stride * n + inner;
      for (int k = 0; k < n; ++k) line[k] = spec[base + k * stride];
      for (int k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < n; ++j) {
          double ang = -two_pi * k * j / n;
          acc += line[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc / double(n);
      }
      for (int k = 0; k < n; ++k) spec[base + k * stride] = out[k];
    }
    stride *= n;
  }

  double vol = rho.window.volume();
  double acc = 0.0;
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    double xi2 = 0.0;
    for (int axis = d - 1; axis >= 0; --axis) {
      int k = static_cast<int>(rem % n);
      rem /= n;
      int signed_k = (k <= n / 2) ? k : k - n;
      double xi = two_pi * signed_k / (rho.window.hi[axis] - rho.window.lo[axis]);
      xi2 += xi * xi;
    }
    acc += std::pow(1.0 + xi2, s) * std::norm(spec[flat]);
  }
  return std::sqrt(vol * acc);
}

}  // namespace kinetra
