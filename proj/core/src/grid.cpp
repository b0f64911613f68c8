#include "carleman/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace carleman {

void GridSpec::validate() const {
  if (num_points < 16) throw std::invalid_argument("GridSpec: num_points must be >= 16");
  if (!(r_max > 0)) throw std::invalid_argument("GridSpec: r_max must be > 0");
  if (dimension < 1) throw std::invalid_argument("GridSpec: dimension must be >= 1");
  if (!radial && dimension != 1)
    throw std::invalid_argument("GridSpec: line grids require dimension 1");
}

std::vector<double> GridSpec::quad_weights() const {
  std::vector<double> w(num_points);
  const double h = spacing();
  if (!radial) {
    for (int i = 0; i < num_points; ++i) w[i] = h;
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
  }
  const int n = dimension;
  auto cell_volume = [&](double lo, double hi) {
    return (std::pow(hi, n) - std::pow(lo, n)) / n;
  };
  for (int i = 0; i < num_points; ++i) {
    const double r = node(i);
    const double lo = std::max(0.0, r - 0.5 * h);
    const double hi = std::min(r_max, r + 0.5 * h);
    w[i] = cell_volume(lo, hi);
  }
  return w;
}

ScalarField ScalarField::sample(const GridSpec& g,
                                const std::function<cplx(double)>& fn,
                                bool truncate) {
  g.validate();
  ScalarField f{g, std::vector<cplx>(g.num_points)};
  for (int i = 0; i < g.num_points; ++i) f.values[i] = fn(g.node(i));
  if (truncate) {
    f.values.back() = 0.0;
    if (!g.radial) f.values.front() = 0.0;
  }
  return f;
}

void ScalarField::validate() const {
  grid.validate();
  if (static_cast<int>(values.size()) != grid.num_points)
    throw std::invalid_argument("ScalarField: values length mismatch");
}

SpaceTimeField SpaceTimeField::sample(const GridSpec& g, double t0, double dt,
                                      int nt,
                                      const std::function<cplx(double, double)>& fn,
                                      bool truncate) {
  g.validate();
  if (nt < 2 || !(dt > 0))
    throw std::invalid_argument("SpaceTimeField: need nt >= 2 and dt > 0");
  SpaceTimeField f;
  f.grid = g;
  f.t0 = t0;
  f.dt = dt;
  f.num_times = nt;
  f.values.resize(static_cast<std::size_t>(nt) * g.num_points);
  for (int it = 0; it < nt; ++it) {
    const double t = t0 + it * dt;
    auto s = f.slice(it);
    for (int i = 0; i < g.num_points; ++i) s[i] = fn(t, g.node(i));
    if (truncate) {
      s[g.num_points - 1] = 0.0;
      if (!g.radial) s[0] = 0.0;
    }
  }
  return f;
}

void SpaceTimeField::validate() const {
  grid.validate();
  if (num_times < 2 || !(dt > 0))
    throw std::invalid_argument("SpaceTimeField: need num_times >= 2 and dt > 0");
  if (values.size() != static_cast<std::size_t>(num_times) * grid.num_points)
    throw std::invalid_argument("SpaceTimeField: values length mismatch");
}

cplx inner_product(std::span<const double> w, std::span<const cplx> f,
                   std::span<const cplx> g) {
  std::vector<cplx> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    terms[i] = w[i] * f[i] * std::conj(g[i]);
  return pairwise_sum(std::span<const cplx>(terms));
}

double norm_sq(std::span<const double> w, std::span<const cplx> f) {
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = w[i] * std::norm(f[i]);
  return pairwise_sum(std::span<const double>(terms));
}

std::vector<cplx> gradient(const GridSpec& g, std::span<const cplx> f) {
  const int n = g.num_points;
  const double h = g.spacing();
  std::vector<cplx> d(n);
  for (int i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

double boundary_support_fraction(const GridSpec& g, std::span<const cplx> f) {
  const int n = g.num_points;
  const int margin = 10;
  double global = 0.0, edge = 0.0;
  for (int i = 0; i < n; ++i) global = std::max(global, std::abs(f[i]));
  if (global == 0.0) return 0.0;
  for (int i = std::max(0, n - margin - 1); i < n; ++i)
    edge = std::max(edge, std::abs(f[i]));
  if (!g.radial) {
    for (int i = 0; i < std::min(n, margin + 1); ++i)
      edge = std::max(edge, std::abs(f[i]));
  }
  return edge / global;
}

namespace {

SpaceTimeField diff_in_time(const SpaceTimeField& f, int order) {
  f.validate();
  const int need = order == 1 ? 3 : 4;
  if (f.num_times < need)
    throw std::invalid_argument("time derivative: too few time slices");
  SpaceTimeField d = f;
  const int nt = f.num_times;
  const int nx = f.grid.num_points;
  const double k = f.dt;
  for (int it = 0; it < nt; ++it) {
    auto out = d.slice(it);
    if (order == 1) {
      if (it == 0) {
        auto a = f.slice(0), b = f.slice(1), c = f.slice(2);
        for (int i = 0; i < nx; ++i) out[i] = (-3.0 * a[i] + 4.0 * b[i] - c[i]) / (2.0 * k);
      } else if (it == nt - 1) {
        auto a = f.slice(nt - 1), b = f.slice(nt - 2), c = f.slice(nt - 3);
        for (int i = 0; i < nx; ++i) out[i] = (3.0 * a[i] - 4.0 * b[i] + c[i]) / (2.0 * k);
      } else {
        auto a = f.slice(it + 1), b = f.slice(it - 1);
        for (int i = 0; i < nx; ++i) out[i] = (a[i] - b[i]) / (2.0 * k);
      }
    } else {
      if (it == 0) {
        auto a = f.slice(0), b = f.slice(1), c = f.slice(2), e = f.slice(3);
        for (int i = 0; i < nx; ++i)
          out[i] = (2.0 * a[i] - 5.0 * b[i] + 4.0 * c[i] - e[i]) / (k * k);
      } else if (it == nt - 1) {
        auto a = f.slice(nt - 1), b = f.slice(nt - 2), c = f.slice(nt - 3), e = f.slice(nt - 4);
        for (int i = 0; i < nx; ++i)
          out[i] = (2.0 * a[i] - 5.0 * b[i] + 4.0 * c[i] - e[i]) / (k * k);
      } else {
        auto a = f.slice(it + 1), b = f.slice(it), c = f.slice(it - 1);
        for (int i = 0; i < nx; ++i) out[i] = (a[i] - 2.0 * b[i] + c[i]) / (k * k);
      }
    }
  }
  return d;
}

}  // namespace

SpaceTimeField time_derivative(const SpaceTimeField& f) { return diff_in_time(f, 1); }
SpaceTimeField second_time_derivative(const SpaceTimeField& f) { return diff_in_time(f, 2); }

std::vector<double> time_weights(const SpaceTimeField& f) {
  std::vector<double> w(f.num_times, f.dt);
  w.front() = 0.5 * f.dt;
  w.back() = 0.5 * f.dt;
  return w;
}

}  // namespace carleman
