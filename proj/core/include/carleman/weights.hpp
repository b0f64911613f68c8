#pragma once

#include <array>
#include <string>

namespace carleman {

enum class WeightKind { LogLinear, PowerLaw };

// Inner-branch polynomial a1 r^2 + a2 r^4 + a3 r^6 + a4 r^8 and the outer
// additive constant a5. The junction sits at r = 1 for both weight families.
struct WeightCoefficients {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double a5 = 0;
  double junction_radius = 1.0;
};

// Weight value and derivatives through order four at one radius.
struct WeightJet {
  double phi = 0, phi1 = 0, phi2 = 0, phi3 = 0, phi4 = 0;
};

// Radial Carleman weight. LogLinear has the outer branch
//   phi(r) = 3r - int_1^r ds/(1+log s) + a5,
// PowerLaw (exponent p in (1, 4/3]) the outer branch r^p + a5. Both are
// glued to the inner polynomial with a C^4 junction at r = 1.
struct Weight {
  WeightKind kind = WeightKind::LogLinear;
  WeightCoefficients coeffs;
  double p = 0.0;               // PowerLaw only
  double linear_bound_M = 0.0;  // least M with phi <= M * max(r, r^p) on the scanned range
  double certified_r_max = 0.0; // stamped by certify_weight on success

  WeightJet jet(double r) const;  // throws std::invalid_argument for r < 0
  // Radial Hessian quadratic form grad(phi) D2phi grad(phi) = phi''(phi')^2,
  // evaluated from the jet, never re-discretized.
  double quad_form(double r) const;
  // Bi-Laplacian of the radial weight in the given dimension, with the even
  // r -> 0 limit built in.
  double bilaplacian(double r, int dimension) const;

  // Branch evaluations used for junction residuals.
  WeightJet inner_jet(double r) const;
  WeightJet outer_jet(double r) const;
};

struct WeightCertificate {
  std::array<double, 5> c4_residuals{};  // value and derivatives 1..4 at r = 1
  double convexity_margin = 0;           // min phi'' over the grid
  // min over the grid of phi''(phi')^2 divided by the expected lower-bound
  // profile (r^2 inside the unit ball; the outer profile of the family), i.e.
  // the empirical constant in that bound.
  double hessian_quad_lower = 0;
  double bilap_sup = 0;                  // sup |phi''''| (radial-line bi-Laplacian)
  double bilap_tail_constant = 0;        // sup_{r>1} of |phi''''| / outer decay profile
  double tangential_margin = 0;          // min (phi'/r - phi''); reported, not gating
  double positivity_min = 0;             // min of phi over grid nodes r > 0
  double linear_bound_M = 0;
  double r_max = 0;
  double grid_spacing = 0;
  bool pass = false;
  std::string failing_field;  // empty when pass
  double failing_location = 0;
};

// Solves the 5x5 jet-matching system for the LogLinear weight: derivatives
// 1..4 of the inner polynomial match the outer jet (., 2, 1, -3, 14) at r=1
// and the value fixes a5.
WeightCoefficients solve_log_weight_coefficients();

Weight build_log_weight();
// alpha in [0, 1/2); the exponent is p = (4 - 2 alpha) / 3.
Weight build_power_weight(double alpha);

// Evaluates jets on the grid {0, h, ..., R_max} and fills every certificate
// field. Requires R_max > 1 and h <= 1e-3 * R_max. On success stamps
// w.certified_r_max.
WeightCertificate certify_weight(Weight& w, double r_max, double h);

// Power-law exponent map.
double power_law_exponent(double alpha);

}  // namespace carleman
