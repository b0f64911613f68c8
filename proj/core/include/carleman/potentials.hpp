#pragma once

#include <functional>
#include <string>

#include "carleman/grid.hpp"

namespace carleman {

// 1/cosh without the cosh overflow: dies only when exp(-|x|) underflows
// (|x| ~ 745), not where cosh overflows (|x| ~ 710).
double sech(double x);

// Potential data for the perturbed equation: scalar V, first-order vector W
// (time component first; only its magnitude and the radial component of the
// spatial part enter any estimate), and the optional zero-order part V2 whose
// radial derivative is sign-split. Decay metadata (C_decay, alpha) declares
// the envelope |V| <= C_decay (1+|x|^2)^(-alpha/2).
struct PotentialSpec {
  std::string name = "zero";
  std::function<cplx(double t, double x)> V;
  std::function<double(double t, double x)> W_mag;      // |W(t,x)|
  std::function<double(double t, double x)> Wt_radial;  // radial component of the spatial part
  std::function<double(double x)> V2;
  bool has_W = false;
  bool has_V2 = false;
  bool time_independent = true;
  double C_decay = 0.0;
  double alpha = 0.0;
  double w_C_decay = 0.0;
  double w_alpha = 0.0;

  // Largest sampled |V(t,x)| (1+|x|^2)^{alpha/2} over the grid; the declared
  // envelope holds iff this is <= C_decay (same check for W).
  double measured_envelope_V(const GridSpec& g, double t = 0.0) const;
  double measured_envelope_W(const GridSpec& g, double t = 0.0) const;
  bool decay_declaration_holds(const GridSpec& g, double t = 0.0) const;
};

PotentialSpec zero_potential();
// V(x) = -depth sech(x / width)^2; declared envelope uses alpha = 2.
PotentialSpec sech_well(double depth, double width);
// V(x) = C (1 + x^2)^{-alpha/2}.
PotentialSpec power_envelope(double C, double alpha);
// Adds an envelope first-order term: |W| = Wt_radial = C_w (1+x^2)^{-alpha_w/2}.
PotentialSpec with_w_envelope(PotentialSpec base, double C_w, double alpha_w);
// Adds a zero-order radial part V2.
PotentialSpec with_v2(PotentialSpec base, std::function<double(double)> v2);

}  // namespace carleman
