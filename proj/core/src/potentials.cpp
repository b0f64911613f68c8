#include "carleman/potentials.hpp"

#include <cmath>

namespace carleman {

double sech(double x) {
  const double a = std::abs(x);
  const double e = std::exp(-a);
  return 2.0 * e / (1.0 + e * e);
}

double PotentialSpec::measured_envelope_V(const GridSpec& g, double t) const {
  if (!V) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < g.num_points; ++i) {
    const double x = g.node(i);
    worst = std::max(worst,
                     std::abs(V(t, x)) * std::pow(1.0 + x * x, 0.5 * alpha));
  }
  return worst;
}

double PotentialSpec::measured_envelope_W(const GridSpec& g, double t) const {
  if (!has_W) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < g.num_points; ++i) {
    const double x = g.node(i);
    worst = std::max(worst,
                     std::abs(W_mag(t, x)) * std::pow(1.0 + x * x, 0.5 * w_alpha));
  }
  return worst;
}

bool PotentialSpec::decay_declaration_holds(const GridSpec& g, double t) const {
  const double tol = 1e-12;
  if (V && measured_envelope_V(g, t) > C_decay * (1.0 + tol) + tol) return false;
  if (has_W && measured_envelope_W(g, t) > w_C_decay * (1.0 + tol) + tol) return false;
  return true;
}

PotentialSpec zero_potential() {
  PotentialSpec p;
  p.name = "zero";
  p.V = [](double, double) { return cplx(0.0, 0.0); };
  p.C_decay = 0.0;
  p.alpha = 0.0;
  return p;
}

PotentialSpec sech_well(double depth, double width) {
  PotentialSpec p;
  p.name = "sech-well";
  p.V = [depth, width](double, double x) {
    const double s = sech(x / width);
    return cplx(-depth * s * s, 0.0);
  };
  p.alpha = 2.0;
  // sech(x/w)^2 (1+x^2) is maximal near |x| ~ w; sample once at construction.
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double x = 10.0 * width * i / 4000.0;
    const double s = sech(x / width);
    worst = std::max(worst, depth * s * s * (1.0 + x * x));
  }
  p.C_decay = worst;
  return p;
}

PotentialSpec power_envelope(double C, double alpha) {
  PotentialSpec p;
  p.name = "power-envelope";
  p.V = [C, alpha](double, double x) {
    return cplx(C * std::pow(1.0 + x * x, -0.5 * alpha), 0.0);
  };
  p.C_decay = C;
  p.alpha = alpha;
  return p;
}

PotentialSpec with_w_envelope(PotentialSpec base, double C_w, double alpha_w) {
  base.has_W = true;
  base.w_C_decay = C_w;
  base.w_alpha = alpha_w;
  base.W_mag = [C_w, alpha_w](double, double x) {
    return C_w * std::pow(1.0 + x * x, -0.5 * alpha_w);
  };
  base.Wt_radial = base.W_mag;
  return base;
}

PotentialSpec with_v2(PotentialSpec base, std::function<double(double)> v2) {
  base.has_V2 = true;
  base.V2 = std::move(v2);
  return base;
}

}  // namespace carleman
