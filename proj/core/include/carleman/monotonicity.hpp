#pragma once

#include <optional>
#include <vector>

#include "carleman/operators.hpp"

namespace carleman {

// Signed accounting of every term in the monotonicity estimate
//   1/2 <[S,A]f,f> + int psi|df/dt|^2 + 1/2 |Af|^2 + Re<(S+A)f, psi f>
//     <= int |(d^2/dt^2 - (S+A))f|^2 + 1/2 int psi^2 |f|^2 + boundary,
// all integrated over the time window. The commutator is evaluated as the
// operator composition SA - AS, so the spatial part of the estimate is exact
// discrete algebra; the tolerance covers the time discretization.
struct CarlemanLedger {
  double commutator_term = 0;  // 1/2 <[S,A]f,f> dt
  double psi_dt_term = 0;      // psi |d_t f|^2
  double af_term = 0;          // 1/2 |Af|^2
  double cross_term = 0;       // Re <(S+A)f, psi f>
  double rhs_source = 0;       // |(d_t^2 - (S+A))f|^2
  double psi_sq_term = 0;      // 1/2 psi^2 |f|^2
  // The estimate's boundary term is an absolute value evaluated between the
  // window ends; both readings are computed and the larger one enters the
  // margin.
  double boundary_diff_of_abs = 0;  // |X(T1)| - |X(T0)|
  double boundary_abs_of_diff = 0;  // |X(T1) - X(T0)|
  double boundary_term = 0;
  double margin = 0;  // RHS - LHS
  double tol = 0;     // 100 (h^2 + k^2) max(1, field energy)
  double field_energy = 0;
  bool pass = false;
};

CarlemanLedger evaluate_ledger(const SpaceTimeField& f, const OperatorBundle& b,
                               const SpaceTimeField* source = nullptr);

// Max over interior times of the normalized defect in the derivative identity
//   1/2<[S,A]f,f> + <psi d_t f, d_t f> + <Af,Af> + Re<psi f,(S+A)f>
//     = -Re<Af,s> - Re<psi f,s> + d/dt Re(<Af,d_t f> + <psi f,d_t f>).
double verify_identity(const SpaceTimeField& f, const OperatorBundle& b);

struct HTrace {
  std::vector<double> times;
  std::vector<double> H;              // |d_t f|^2 - <Sf,f> + <psi f,f>
  std::vector<double> Hdot_analytic;  // pairing form of dH/dt
  std::vector<double> Hdot_numeric;   // centered difference of H
};

HTrace h_trace(const SpaceTimeField& f, const OperatorBundle& b);

// Radial cutoff: identically 1 inside radius R, supported inside 2R, with a
// quintic smoothstep transition. The realizable derivative bounds are
// |chi'| <= 1.875/R and |chi''| <= 5.7735/R^2; no C^1 profile that drops from
// 1 to 0 over a width-R shell can do better than sup|chi''| >= 4/R^2.
struct CutoffSpec {
  double R = 1.0;
  double chi(double r) const;
  double dchi(double r) const;      // radial derivative (<= 0 on the shell)
  double lap_chi(double r, int dimension) const;
};

struct CutoffReport {
  double max_grad_times_R = 0;   // sup |grad chi| * R over the grid
  double max_lap_times_R2 = 0;   // sup |Lap chi| * R^2 over the grid
  bool grad_bound_2_ok = false;  // sup |grad chi| <= 2/R
  bool lap_bound_2_ok = false;   // sup |Lap chi| <= 2/R^2 (unattainable; reported)
  bool plateau_ok = false;       // chi == 1 inside R, == 0 outside 2R
};

CutoffReport check_cutoff(const CutoffSpec& c, const GridSpec& g);

struct LocalizedLedger {
  CarlemanLedger ledger;        // ledger of chi_R f with the enlarged source
  double annulus_mass = 0;      // int int_{R<=|x|<=2R} |f|^2 phi''(phi')^2
  double annulus_grad = 0;      // int int_{R<=|x|<=2R} phi'' |grad f|^2
  double weighted_rhs = 0;      // (1+log R)^2/R * (lambda^2 * mass + grad)
  CutoffReport cutoff;
};

// Ledger of f_R = chi_R f. The source is the pointwise majorant
//   chi |s(f)| + |f| |Lap chi - 2 lambda grad phi . grad chi - Wt . grad chi|
//   + 2 |grad chi . grad f|
// with s(f) the centered-difference source of f, so it reduces to the plain
// ledger when the cutoff is invisible on the support of f.
LocalizedLedger localized_ledger(const SpaceTimeField& f, const OperatorBundle& b,
                                 const CutoffSpec& cutoff,
                                 const PotentialSpec* pot = nullptr);

struct SequenceReport {
  std::vector<double> times;
  std::vector<double> g;  // int (psi|d_t f|^2 + lambda phi''|grad f|^2 + lambda^3 |f|^2 phi''(phi')^2) dx
  double time_integral = 0;
  std::vector<int> local_min_indices;
  double pairing_sup = 0;           // sup_t |<Af,d_t f> + <psi f,d_t f>|
  double pairing_over_g_sup = 0;    // empirical constant relating the two
};

SequenceReport boundary_sequence_scan(const SpaceTimeField& f, const OperatorBundle& b);

}  // namespace carleman
