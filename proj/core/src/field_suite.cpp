#include "carleman/field_suite.hpp"

#include <cmath>

namespace carleman {

namespace {

double mollifier(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

// splitmix64; deterministic across platforms, unlike the std distributions.
struct Rng {
  std::uint64_t state;
  double uniform() {  // in [0, 1)
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

}  // namespace

cplx BumpSpec::eval(double t, double x) const {
  // Compact mollifier in space (interior support is exact); smooth Gaussian
  // envelope in time, where no support condition is needed and moderate
  // derivatives keep time-discretization errors in their asymptotic regime.
  double amp = mollifier((x - center) / width);
  if (twidth > 0.0) {
    const double v = (t - tcenter) / twidth;
    amp *= std::exp(-0.5 * v * v);
  }
  if (amp == 0.0) return cplx(0.0);
  const double phase = wavenumber * x + omega * t + theta;
  return amp * cplx(std::cos(phase), std::sin(phase));
}

std::vector<BumpSpec> make_bump_specs(const GridSpec& grid, const SuiteParams& p,
                                      double t0, double t1) {
  Rng rng{p.seed};
  const double R = grid.r_max;
  std::vector<BumpSpec> specs;
  specs.reserve(p.count);
  for (int i = 0; i < p.count; ++i) {
    BumpSpec s;
    double c = rng.uniform(p.center_lo * R, p.center_hi * R);
    if (!grid.radial && p.signed_centers && rng.uniform() < 0.5) c = -c;
    s.center = c;
    s.width = rng.uniform(p.width_lo * R, p.width_hi * R);
    // Keep the support strictly inside the interior margin.
    const double room = 0.85 * R - std::abs(s.center);
    s.width = std::min(s.width, std::max(0.02 * R, room));
    s.wavenumber = rng.uniform(0.0, 2.0);
    s.theta = rng.uniform(0.0, 2.0 * M_PI);
    if (t1 > t0) {
      s.tcenter = 0.5 * (t0 + t1);
      s.twidth = (t1 - t0) * rng.uniform(0.25, 0.4);
      s.omega = rng.uniform(0.0, 2.0);
    } else {
      s.twidth = 0.0;
    }
    specs.push_back(s);
  }
  return specs;
}

std::vector<ScalarField> make_bump_suite(const GridSpec& grid, const SuiteParams& p) {
  const auto specs = make_bump_specs(grid, p);
  std::vector<ScalarField> out;
  out.reserve(specs.size());
  for (const BumpSpec& s : specs)
    out.push_back(ScalarField::sample(grid, [&s](double x) { return s.eval_space(x); }));
  return out;
}

std::vector<SpaceTimeField> make_spacetime_suite(const GridSpec& grid, double t0,
                                                 double dt, int num_times,
                                                 const SuiteParams& p) {
  const double t1 = t0 + dt * (num_times - 1);
  const auto specs = make_bump_specs(grid, p, t0, t1);
  std::vector<SpaceTimeField> out;
  out.reserve(specs.size());
  for (const BumpSpec& s : specs)
    out.push_back(SpaceTimeField::sample(
        grid, t0, dt, num_times,
        [&s](double t, double x) { return s.eval(t, x); }));
  return out;
}

}  // namespace carleman
