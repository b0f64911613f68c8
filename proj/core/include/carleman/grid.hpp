#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "carleman/numerics.hpp"

namespace carleman {

// Spatial sampling domain. Two layouts are supported:
//  - line (radial=false, dimension must be 1): nodes on [-r_max, r_max],
//  - radial sector (radial=true, dimension n >= 1): nodes on [0, r_max] with
//    the measure r^{n-1} dr and the even-symmetry condition at r = 0.
// Fields are Dirichlet-truncated at the outer boundary.
struct GridSpec {
  int dimension = 1;
  bool radial = false;
  double r_max = 10.0;
  int num_points = 1001;

  double extent() const { return radial ? r_max : 2.0 * r_max; }
  double spacing() const { return extent() / (num_points - 1); }
  double node(int i) const {
    return radial ? i * spacing() : -r_max + i * spacing();
  }
  double radius(int i) const {
    const double x = node(i);
    return x < 0 ? -x : x;
  }
  // Cell-volume quadrature weights for the grid measure (line: trapezoid,
  // radial: exact volume of each half-open cell in r^{n-1} dr). These same
  // weights define the discrete inner product used by every operator, which
  // is what makes the discrete symmetry/skew-symmetry checks exact.
  std::vector<double> quad_weights() const;

  void validate() const;  // throws std::invalid_argument
  bool operator==(const GridSpec&) const = default;
};

struct ScalarField {
  GridSpec grid;
  std::vector<cplx> values;

  // Samples fn at the nodes; the outermost node(s) are zeroed (Dirichlet
  // truncation) unless truncate is false.
  static ScalarField sample(const GridSpec& g,
                            const std::function<cplx(double)>& fn,
                            bool truncate = true);
  void validate() const;
};

struct SpaceTimeField {
  GridSpec grid;
  double t0 = 0.0;
  double dt = 0.0;
  int num_times = 0;
  std::vector<cplx> values;  // time-major: values[it*num_points + ix]

  double time(int it) const { return t0 + it * dt; }
  std::span<const cplx> slice(int it) const {
    return {values.data() + static_cast<std::size_t>(it) * grid.num_points,
            static_cast<std::size_t>(grid.num_points)};
  }
  std::span<cplx> slice(int it) {
    return {values.data() + static_cast<std::size_t>(it) * grid.num_points,
            static_cast<std::size_t>(grid.num_points)};
  }
  static SpaceTimeField sample(const GridSpec& g, double t0, double dt, int nt,
                               const std::function<cplx(double, double)>& fn,
                               bool truncate = true);
  void validate() const;
};

// Discrete hermitian product <f,g> = sum_i w_i f_i conj(g_i) and norms in the
// grid measure.
cplx inner_product(std::span<const double> w, std::span<const cplx> f,
                   std::span<const cplx> g);
double norm_sq(std::span<const double> w, std::span<const cplx> f);

// Centered first difference (second-order one-sided at the ends).
std::vector<cplx> gradient(const GridSpec& g, std::span<const cplx> f);

// Max |f| over the 10h margin next to the outer boundary, relative to the
// global max; used to enforce "interior supported" preconditions.
double boundary_support_fraction(const GridSpec& g, std::span<const cplx> f);

// Time differentiation of a space-time field (centered interior, one-sided
// second-order stencils at the window ends).
SpaceTimeField time_derivative(const SpaceTimeField& f);
SpaceTimeField second_time_derivative(const SpaceTimeField& f);

// Trapezoid weights in time.
std::vector<double> time_weights(const SpaceTimeField& f);

}  // namespace carleman
