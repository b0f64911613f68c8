#pragma once

#include <cstdint>
#include <vector>

#include "carleman/grid.hpp"

namespace carleman {

// Seeded smooth compactly-supported test bump
//   f(t,x) = b((x-c)/sx) b((t-tc)/st) exp(i(kx + om t + theta)),
// where b is the standard mollifier profile exp(1 - 1/(1 - s^2)) on |s| < 1.
// Compact support keeps every suite field interior-supported exactly.
struct BumpSpec {
  double center = 0;     // spatial center (signed on line grids)
  double width = 1;      // spatial support half-width
  double tcenter = 0;
  double twidth = 1;     // <= 0: no time envelope
  double wavenumber = 0;
  double omega = 0;
  double theta = 0;
  cplx eval(double t, double x) const;
  cplx eval_space(double x) const { return eval(tcenter, x); }
};

struct SuiteParams {
  int count = 20;
  std::uint64_t seed = 20240101;
  // Fractions of R_max, following the recorded suite convention.
  double center_lo = 0.2, center_hi = 0.6;
  double width_lo = 0.05, width_hi = 0.2;
  bool signed_centers = true;  // line grids draw the side at random
};

std::vector<BumpSpec> make_bump_specs(const GridSpec& grid, const SuiteParams& p,
                                      double t0 = 0.0, double t1 = 0.0);

std::vector<ScalarField> make_bump_suite(const GridSpec& grid, const SuiteParams& p);

std::vector<SpaceTimeField> make_spacetime_suite(const GridSpec& grid, double t0,
                                                 double dt, int num_times,
                                                 const SuiteParams& p);

}  // namespace carleman
