#include "kinetra/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace kinetra {

PhaseGridFunction::PhaseGridFunction(GridSpec s, std::vector<double> vals)
    : spec(s), values(std::move(vals)) {
  if (!spec.window.x.nondegenerate() || !spec.window.v.nondegenerate())
    throw std::invalid_argument("PhaseGridFunction: degenerate window");
  if (spec.nx < 1 || spec.nv < 1)
    throw std::invalid_argument("PhaseGridFunction: grid sizes must be positive");
  if (static_cast<long>(values.size()) != spec.nx_total() * spec.nv_total())
    throw std::invalid_argument("PhaseGridFunction: value count does not match grid");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("PhaseGridFunction: nonfinite value");
  mass_ = riemann_mass();
}

double PhaseGridFunction::riemann_mass() const {
  double cell = spec.cell_volume_x() * spec.cell_volume_v();
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * cell;
}

PhaseGridFunction PhaseGridFunction::sample(
    const GridSpec& spec, const std::function<double(const Vec&, const Vec&)>& fn) {
  std::vector<double> vals(spec.nx_total() * spec.nv_total());
  long nv_total = spec.nv_total();
  for (long ix = 0; ix < spec.nx_total(); ++ix) {
    Vec x = spec.x_node(ix);
    for (long iv = 0; iv < nv_total; ++iv) vals[ix * nv_total + iv] = fn(x, spec.v_node(iv));
  }
  return PhaseGridFunction(spec, std::move(vals));
}

InitialData InitialData::indicator(const PhaseRect& box) {
  InitialData d;
  d.support_window = box;
  d.indicator_box = box;
  d.fn = [](const Vec&, const Vec&) { return 1.0; };
  return d;
}

InitialData InitialData::analytic(std::function<double(const Vec&, const Vec&)> f,
                                  const PhaseRect& support) {
  InitialData d;
  d.fn = std::move(f);
  d.support_window = support;
  return d;
}

InitialData InitialData::from_grid(std::shared_ptr<const PhaseGridFunction> g) {
  InitialData d;
  d.support_window = g->spec.window;
  d.fn = [g](const Vec& x, const Vec& v) {
    const GridSpec& s = g->spec;
    long ix = 0, iv = 0;
    for (int i = 0; i < s.dim(); ++i) {
      long cx = static_cast<long>(std::floor((x[i] - s.window.x.lo[i]) / s.dx(i)));
      long cv = static_cast<long>(std::floor((v[i] - s.window.v.lo[i]) / s.dv(i)));
      cx = std::min<long>(std::max<long>(cx, 0), s.nx - 1);
      cv = std::min<long>(std::max<long>(cv, 0), s.nv - 1);
      ix = ix * s.nx + cx;
      iv = iv * s.nv + cv;
    }
    return g->at(ix, iv);
  };
  return d;
}

TestFunction bump_test_function(double radius) {
  TestFunction t;
  t.support_radius = radius;
  t.eval = [radius](const Vec& v) {
    double r2 = v.dot(v) / (radius * radius);
    if (r2 >= 1.0) return 0.0;
    double w = 1.0 - r2;
    return w * w;
  };
  t.grad = [radius](const Vec& v) {
    Vec g(v.size());
    double r2 = v.dot(v) / (radius * radius);
    if (r2 >= 1.0) return g;
    double w = 1.0 - r2;
    for (int i = 0; i < v.size(); ++i) g[i] = -4.0 * w * v[i] / (radius * radius);
    return g;
  };
  return t;
}

TestFunction indicator_test_function(double radius) {
  TestFunction t;
  t.support_radius = radius;
  t.eval = [radius](const Vec& v) { return v.dot(v) <= radius * radius ? 1.0 : 0.0; };
  t.grad = [](const Vec& v) { return Vec::zero(v.size()); };
  return t;
}

namespace {
inline double bump1(double u) {
  double w = 1.0 - u * u;
  if (w <= 0.0) return 0.0;
  double w2 = w * w;
  return w2 * w2;
}
inline double bump1_deriv(double u) {
  double w = 1.0 - u * u;
  if (w <= 0.0) return 0.0;
  return -8.0 * u * w * w * w;
}
}  // namespace

double SmoothBump::value(const Vec& x, const Vec& v) const {
  double p = amplitude;
  for (int i = 0; i < x.size(); ++i) p *= bump1((x[i] - center_x[i]) / radius_x);
  for (int i = 0; i < v.size(); ++i) p *= bump1((v[i] - center_v[i]) / radius_v);
  return p;
}

Vec SmoothBump::grad_x(const Vec& x, const Vec& v) const {
  const int d = x.size();
  Vec g(d);
  for (int i = 0; i < d; ++i) {
    double p = amplitude;
    for (int j = 0; j < d; ++j) {
      double u = (x[j] - center_x[j]) / radius_x;
      p *= (j == i) ? bump1_deriv(u) / radius_x : bump1(u);
    }
    for (int j = 0; j < d; ++j) p *= bump1((v[j] - center_v[j]) / radius_v);
    g[i] = p;
  }
  return g;
}

Vec SmoothBump::grad_v(const Vec& x, const Vec& v) const {
  const int d = v.size();
  Vec g(d);
  for (int i = 0; i < d; ++i) {
    double p = amplitude;
    for (int j = 0; j < d; ++j) p *= bump1((x[j] - center_x[j]) / radius_x);
    for (int j = 0; j < d; ++j) {
      double u = (v[j] - center_v[j]) / radius_v;
      p *= (j == i) ? bump1_deriv(u) / radius_v : bump1(u);
    }
    g[i] = p;
  }
  return g;
}

double SmoothBump::transport_derivative(const ForceField& field, const Vec& x,
                                        const Vec& v) const {
  return v.dot(grad_x(x, v)) + field.eval(x, v).dot(grad_v(x, v));
}

PhaseRect SmoothBump::support() const {
  const int d = center_x.size();
  Rect xr(center_x - Vec::constant(d, radius_x), center_x + Vec::constant(d, radius_x));
  Rect vr(center_v - Vec::constant(d, radius_v), center_v + Vec::constant(d, radius_v));
  return PhaseRect(xr, vr);
}

InitialData SmoothBump::as_initial_data() const {
  SmoothBump copy = *this;
  return InitialData::analytic(
      [copy](const Vec& x, const Vec& v) { return copy.value(x, v); }, support());
}

XGridFunction XGridFunction::sample(const Rect& window, int n,
                                    const std::function<double(const Vec&)>& fn) {
  XGridFunction g;
  g.window = window;
  g.n = n;
  g.values.resize(g.total());
  for (long i = 0; i < g.total(); ++i) g.values[i] = fn(g.node(i));
  return g;
}

namespace {

nlohmann::json rect_to_json(const Rect& r) {
  nlohmann::json axes = nlohmann::json::array();
  for (int i = 0; i < r.dim(); ++i) axes.push_back({r.lo[i], r.hi[i]});
  return axes;
}

Rect rect_from_json(const nlohmann::json& j) {
  Vec lo(static_cast<int>(j.size())), hi(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    lo[static_cast<int>(i)] = j[i][0].get<double>();
    hi[static_cast<int>(i)] = j[i][1].get<double>();
  }
  return Rect(lo, hi);
}

}  // namespace

void save_phase_grid(const std::string& path, const PhaseGridFunction& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  nlohmann::json header = {
      {"dim", f.spec.dim()},
      {"window", {{"x", rect_to_json(f.spec.window.x)}, {"v", rect_to_json(f.spec.window.v)}}},
      {"nx", f.spec.nx},
      {"nv", f.spec.nv},
  };
  out << header.dump() << "\n";
  char buf[40];
  for (double v : f.values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

PhaseGridFunction load_phase_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty grid file: " + path);
  nlohmann::json header = nlohmann::json::parse(line);
  GridSpec spec;
  spec.window = PhaseRect(rect_from_json(header["window"]["x"]),
                          rect_from_json(header["window"]["v"]));
  spec.nx = header["nx"].get<int>();
  spec.nv = header["nv"].get<int>();
  std::vector<double> vals;
  vals.reserve(spec.nx_total() * spec.nv_total());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    vals.push_back(std::stod(line));
  }
  return PhaseGridFunction(spec, std::move(vals));
}

void save_x_grid_csv(const std::string& path, const XGridFunction& rho,
                     const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  char buf[40];
  for (long i = 0; i < rho.total(); ++i) {
    Vec x = rho.node(i);
    for (int c = 0; c < rho.dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g,", x[c]);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", rho.values[i]);
    out << buf;
  }
}

}  // namespace kinetra
