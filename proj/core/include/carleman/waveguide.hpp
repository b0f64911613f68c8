#pragma once

#include <span>
#include <string>
#include <vector>

#include "carleman/grid.hpp"
#include "carleman/potentials.hpp"

namespace carleman {

struct EigenPair {
  double lambda_e = 0;     // Lap Q - lambda_e Q = V Q, lambda_e > 0
  ScalarField Q;           // normalized to ||Q|| = 1 in the grid measure
  double residual_norm = 0;
};

struct StationaryResult {
  std::vector<EigenPair> pairs;  // bound states only (lambda_e > 0)
  int matrix_modes_found = 0;    // lowest eigenvalues examined
  std::string note;              // set when no bound state exists
};

// Discretizes -Lap + V as a symmetric tridiagonal matrix (Dirichlet at the
// outer boundary, even-symmetry flux at r = 0 for radial grids), brackets the
// lowest num_modes eigenvalues by bisection on Sturm sign counts and recovers
// eigenvectors by shifted inverse iteration.
StationaryResult solve_stationary(const PotentialSpec& V, const GridSpec& grid,
                                  int num_modes);

enum class Phase { Cosine, Sine };

struct WaveguideSolution {
  EigenPair pair;
  Phase phase = Phase::Cosine;
  SpaceTimeField as_field(double t0, double dt, int num_times) const;
};

WaveguideSolution build_waveguide(EigenPair pair, Phase phase);

struct PdeResidualReport {
  double residual_norm = 0;   // ||(d_t^2 + Lap)u - Vu|| / ||u|| on interior nodes
  double min_margin = 0;      // min of |Vu| + |W.(d_t,grad)u| - |(d_t^2+Lap)u|
  double negative_fraction = 0;
};

PdeResidualReport pde_residual(const SpaceTimeField& u, const PotentialSpec& V);

struct DecayReport {
  double fitted_rate = 0;  // slope of log|Q| against -r^p
  double p_used = 0;
  double window_lo = 0, window_hi = 0;
  double goodness = 0;     // rms residual of the linear fit
  bool window_shrunk = false;
};

// Least-squares fit of log |Q| against -r^p on the far-field window. Nodes
// with underflowing |Q| or a sign change relative to the window start shrink
// the window (reported).
DecayReport measure_decay(const ScalarField& Q, double p, double window_lo,
                          double window_hi);

struct BetaClassification {
  double beta = 0;
  std::string classification;  // "convergent" | "divergent" | "indeterminate"
  std::vector<double> radii;
  std::vector<double> log_integral;  // log I(beta, R), sup over time slices
};

struct WeightedNormScan {
  double p = 0;
  std::vector<BetaClassification> betas;
  double beta_star_lo = 0, beta_star_hi = 0;
  bool bracket_found = false;
  double increment_tol = 1e-6;   // convergent: relative increment below this
  double growth_factor = 2.0;    // divergent: at least this per doubling
};

// I(beta, R) = sup_t int_{|x|<=R} exp(beta |x|^p) |u|^2 dx, accumulated in
// log space; classification looks at the last radius doubling.
WeightedNormScan weighted_norm_scan(const SpaceTimeField& u, double p,
                                    std::span<const double> betas,
                                    std::span<const double> radii);

}  // namespace carleman
