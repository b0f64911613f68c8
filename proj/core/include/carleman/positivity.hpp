#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "carleman/operators.hpp"

namespace carleman {

// The seven signed integrals of the commutator-plus-multiplier quadratic form
//   <[S,A]f,f> + Re<(S+A)f, psi f> = A + B + C + D + E + F + G,
// with C split at |x| = epsilon into the ball part C1 and the exterior C2.
// Everything is evaluated from exact weight jets.
struct TermDecomposition {
  double A = 0;  //  4 lambda   int phi'' |grad f|^2
  double B = 0;  //  4 lambda^3 int |f|^2 phi''(phi')^2
  double C = 0;  // -lambda     int |f|^2 Lap^2 phi
  double D = 0;  //             int psi |grad f|^2
  double E = 0;  // -1/2        int |f|^2 Lap psi
  double F = 0;  // -lambda^2   int |f|^2 psi (phi')^2
  double G = 0;  // -lambda     int |f|^2 phi' psi'
  double C1 = 0, C2 = 0;
  double total() const { return A + B + C + D + E + F + G; }
};

TermDecomposition term_decomposition(const ScalarField& f, const OperatorBundle& b,
                                     double epsilon);

struct PositivityReport {
  double lhs = 0;    // decomposition total
  double denom = 0;  // lambda int phi''|grad f|^2 + lambda^3 int |f|^2 phi''(phi')^2
  double ratio = 0;  // largest C with lhs >= C * denom
  bool vacuous = false;
  bool pass = false;  // ratio >= 0.01 (or vacuous)
};

PositivityReport verify_positivity(const ScalarField& f, const OperatorBundle& b,
                                   double epsilon);

struct PoincareReport {
  double mass_in_ball = 0;    // int chi^2 |f|^2
  double grad_chi_f = 0;      // int |grad(chi f)|^2
  double grad_f_ball = 0;     // int_{|x|<=2eps} |grad f|^2
  double shell_mass = 0;      // int_{eps<=|x|<=2eps} |f|^2
  double c_one_term = 0;      // mass <= c eps^2 grad_chi_f
  double c_two_term = 0;      // mass <= c (eps^2 grad_f_ball + shell_mass)
  double epsilon = 0;
};

PoincareReport localized_poincare_check(const ScalarField& f, double epsilon);

struct ThresholdCell {
  double lambda = 0, delta = 0;
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0;  // min over the suite
  double min_constant = 0;
  bool pass = false;  // all four >= 0.01
};

struct ThresholdReport {
  std::vector<ThresholdCell> cells;  // lambda-major order
  double lambda_hat0 = 0;            // least lambda passing at the smallest delta
  bool lambda_found = false;
  double delta_star = 0;             // greatest delta passing at the largest lambda
  bool delta_found = false;
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0;  // constants at (lambda_hat0, min delta)
  double pointwise_bound_min = 0;    // min (lam phi''(phi')^2 - psi (phi')^2)/(phi''(phi')^2), top cell
  int suite_size = 0;
  double epsilon_rule = 0;           // epsilon = lambda^{-1/2}
};

// Scans the absorption inequalities for the first-order, zero-order, and
// multiplier terms over the (lambda, delta) grids, with epsilon = lambda^{-1/2}
// and the Cauchy-Schwarz constant 3 from the three-way source split.
ThresholdReport scan_thresholds(const PotentialSpec& pot, const Weight& w,
                                const GridSpec& grid,
                                std::span<const double> lambdas,
                                std::span<const double> deltas,
                                std::span<const ScalarField> suite);

// Exterior-ball absorption: (B + C2) / (lambda^3 int_{|x|>=eps} |f|^2 phi''(phi')^2).
double exterior_absorption_constant(const ScalarField& f, const OperatorBundle& b,
                                    double epsilon);

// Zero-order variant: (4 lambda^3 int qf |f|^2 - 2 lambda int phi'(d_r V2)_- |f|^2)
// over lambda^3 int qf |f|^2; requires the bundle to carry V2.
double repulsive_absorption_constant(const ScalarField& f, const OperatorBundle& b);

}  // namespace carleman
