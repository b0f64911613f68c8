#include "carleman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "carleman/numerics.hpp"

namespace carleman {

namespace {

constexpr double kOuterIntegralTol = 1e-12;

// Solves a small dense system by Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<std::vector<double>> A,
                                std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    if (A[piv][c] == 0.0)
      throw std::runtime_error("jet-matching system is singular (internal bug)");
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0.0) continue;
      const double fac = A[r][c] / A[c][c];
      for (int k = c; k < n; ++k) A[r][k] -= fac * A[c][k];
      b[r] -= fac * b[c];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

// Derivative-matching matrix of the even octic r^2, r^4, r^6, r^8 at r = 1.
std::vector<std::vector<double>> jet_matrix() {
  return {{2, 4, 6, 8}, {2, 12, 30, 56}, {0, 24, 120, 336}, {0, 24, 360, 1680}};
}

WeightCoefficients match_inner_to(double value, double d1, double d2, double d3,
                                  double d4) {
  const std::vector<double> a = solve_dense(jet_matrix(), {d1, d2, d3, d4});
  WeightCoefficients c;
  c.a1 = a[0];
  c.a2 = a[1];
  c.a3 = a[2];
  c.a4 = a[3];
  // Outer value at the junction is (value + a5); the inner value fixes a5.
  c.a5 = (c.a1 + c.a2 + c.a3 + c.a4) - value;
  return c;
}

// int_1^r ds/(1+log s), cached per radius batch free: adaptive quadrature at
// 1e-12 absolute tolerance every call.
double outer_log_integral(double r) {
  if (r == 1.0) return 0.0;
  return integrate_adaptive([](double s) { return 1.0 / (1.0 + std::log(s)); },
                            1.0, r, kOuterIntegralTol);
}

double scan_linear_bound(const Weight& w, double r_hi) {
  // sup of phi / max(r, r^p) on (0, r_hi]; the LogLinear limit at infinity
  // is 3, so that floor is kept.
  double m = (w.kind == WeightKind::LogLinear) ? 3.0 : 0.0;
  const int samples = 4096;
  for (int i = 1; i <= samples; ++i) {
    const double r = r_hi * i / samples;
    const double denom =
        (w.kind == WeightKind::PowerLaw) ? std::max(r, std::pow(r, w.p)) : r;
    m = std::max(m, w.jet(r).phi / denom);
  }
  return m;
}

}  // namespace

double power_law_exponent(double alpha) {
  if (!(alpha >= 0.0) || !(alpha < 0.5))
    throw std::invalid_argument("power weight: alpha must lie in [0, 1/2)");
  return (4.0 - 2.0 * alpha) / 3.0;
}

WeightJet Weight::inner_jet(double r) const {
  const auto& c = coeffs;
  const double r2 = r * r;
  WeightJet j;
  j.phi = ((c.a4 * r2 + c.a3) * r2 + c.a2) * r2 * r2 + c.a1 * r2;
  j.phi1 = ((8 * c.a4 * r2 + 6 * c.a3) * r2 + 4 * c.a2) * r2 * r + 2 * c.a1 * r;
  j.phi2 = ((56 * c.a4 * r2 + 30 * c.a3) * r2 + 12 * c.a2) * r2 + 2 * c.a1;
  j.phi3 = ((336 * c.a4 * r2 + 120 * c.a3) * r2 + 24 * c.a2) * r;
  j.phi4 = (1680 * c.a4 * r2 + 360 * c.a3) * r2 + 24 * c.a2;
  return j;
}

WeightJet Weight::outer_jet(double r) const {
  WeightJet j;
  if (kind == WeightKind::LogLinear) {
    const double L = std::log(r);
    const double u = 1.0 + L;
    j.phi = 3.0 * r - outer_log_integral(r) + coeffs.a5;
    j.phi1 = 3.0 - 1.0 / u;
    j.phi2 = 1.0 / (r * u * u);
    j.phi3 = -(3.0 + L) / (r * r * u * u * u);
    j.phi4 = (2.0 * u * u + 6.0 * u + 6.0) / (r * r * r * u * u * u * u);
  } else {
    const double rp = std::pow(r, p);
    j.phi = rp + coeffs.a5;
    j.phi1 = p * rp / r;
    j.phi2 = p * (p - 1.0) * rp / (r * r);
    j.phi3 = p * (p - 1.0) * (p - 2.0) * rp / (r * r * r);
    j.phi4 = p * (p - 1.0) * (p - 2.0) * (p - 3.0) * rp / (r * r * r * r);
  }
  return j;
}

WeightJet Weight::jet(double r) const {
  if (r < 0.0) throw std::invalid_argument("weight jet: negative radius");
  return r <= coeffs.junction_radius ? inner_jet(r) : outer_jet(r);
}

double Weight::quad_form(double r) const {
  const WeightJet j = jet(r);
  return j.phi2 * j.phi1 * j.phi1;
}

double Weight::bilaplacian(double r, int dimension) const {
  const int n = dimension;
  if (r == 0.0) {
    // Even expansion phi = c2 r^2 + c4 r^4 + ...: Lap^2 phi(0) = 8n(n+2)c4,
    // and phi''''(0) = 24 c4.
    const double c4 = inner_jet(0.0).phi4 / 24.0;
    return 8.0 * n * (n + 2) * c4;
  }
  const WeightJet j = jet(r);
  const double nm1 = n - 1.0;
  return j.phi4 + 2.0 * nm1 * j.phi3 / r +
         nm1 * (n - 3.0) * (j.phi2 / (r * r) - j.phi1 / (r * r * r));
}

WeightCoefficients solve_log_weight_coefficients() {
  // Outer jet at the junction: phi'(1)=2, phi''(1)=1; differentiating the
  // outer phi'' once and twice gives phi'''(1)=-3 and phi''''(1)=14. The
  // outer value there is 3 + a5.
  return match_inner_to(3.0, 2.0, 1.0, -3.0, 14.0);
}

Weight build_log_weight() {
  Weight w;
  w.kind = WeightKind::LogLinear;
  w.coeffs = solve_log_weight_coefficients();
  w.linear_bound_M = scan_linear_bound(w, 64.0);
  return w;
}

Weight build_power_weight(double alpha) {
  const double p = power_law_exponent(alpha);
  Weight w;
  w.kind = WeightKind::PowerLaw;
  w.p = p;
  const double d1 = p;
  const double d2 = p * (p - 1);
  const double d3 = p * (p - 1) * (p - 2);
  const double d4 = p * (p - 1) * (p - 2) * (p - 3);
  w.coeffs = match_inner_to(1.0, d1, d2, d3, d4);
  w.linear_bound_M = scan_linear_bound(w, 64.0);
  return w;
}

WeightCertificate certify_weight(Weight& w, double r_max, double h) {
  if (!(r_max > 1.0)) throw std::invalid_argument("certify_weight: R_max must exceed 1");
  if (!(h > 0.0) || h > 1e-3 * r_max)
    throw std::invalid_argument("certify_weight: need 0 < h <= 1e-3 * R_max");

  WeightCertificate cert;
  cert.r_max = r_max;
  cert.grid_spacing = h;
  cert.linear_bound_M = w.linear_bound_M;

  {
    const WeightJet in = w.inner_jet(1.0);
    const WeightJet out = w.outer_jet(1.0);
    cert.c4_residuals = {std::abs(in.phi - out.phi), std::abs(in.phi1 - out.phi1),
                         std::abs(in.phi2 - out.phi2), std::abs(in.phi3 - out.phi3),
                         std::abs(in.phi4 - out.phi4)};
  }

  const std::size_t count = static_cast<std::size_t>(std::floor(r_max / h)) + 1;
  // The expected lower-bound profile for phi''(phi')^2 on each sub-range.
  auto quad_shape = [&](double r) {
    if (r <= 1.0) return r * r;
    if (w.kind == WeightKind::LogLinear) {
      const double u = 1.0 + std::log(r);
      return 1.0 / (r * u * u);
    }
    return std::pow(r, 3.0 * w.p - 4.0);
  };
  auto bilap_shape = [&](double r) {
    return (w.kind == WeightKind::LogLinear) ? 1.0 / (r * r * r)
                                             : std::pow(r, w.p - 4.0);
  };

  struct Partial {
    double conv_min = 1e300, conv_at = 0;
    double quad_min = 1e300, quad_at = 0;
    double tang_min = 1e300;
    double bilap_max = 0, tail_max = 0;
    double phi_min = 1e300, phi_min_at = 0;
  };
  const std::size_t chunks = std::max<std::size_t>(1, thread_cap());
  std::vector<Partial> parts(chunks);
  const std::size_t chunk_len = (count + chunks - 1) / chunks;
  parallel_for(chunks, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      Partial& p = parts[c];
      const std::size_t lo = c * chunk_len;
      const std::size_t hi = std::min(count, lo + chunk_len);
      for (std::size_t i = lo; i < hi; ++i) {
        const double r = i * h;
        const WeightJet j = w.jet(r);
        if (j.phi2 < p.conv_min) {
          p.conv_min = j.phi2;
          p.conv_at = r;
        }
        const double q = (r == 0.0) ? j.phi2 * j.phi2 * j.phi2
                                    : j.phi2 * j.phi1 * j.phi1 / quad_shape(r);
        if (q < p.quad_min) {
          p.quad_min = q;
          p.quad_at = r;
        }
        const double tang = (r == 0.0) ? 0.0 : j.phi1 / r - j.phi2;
        p.tang_min = std::min(p.tang_min, tang);
        const double bl = std::abs(w.bilaplacian(r, 1));
        p.bilap_max = std::max(p.bilap_max, bl);
        if (r > 1.0) p.tail_max = std::max(p.tail_max, bl / bilap_shape(r));
        if (r > 0.0 && j.phi < p.phi_min) {
          p.phi_min = j.phi;
          p.phi_min_at = r;
        }
      }
    }
  });
  Partial total;
  for (const Partial& p : parts) {
    if (p.conv_min < total.conv_min) {
      total.conv_min = p.conv_min;
      total.conv_at = p.conv_at;
    }
    if (p.quad_min < total.quad_min) {
      total.quad_min = p.quad_min;
      total.quad_at = p.quad_at;
    }
    total.tang_min = std::min(total.tang_min, p.tang_min);
    total.bilap_max = std::max(total.bilap_max, p.bilap_max);
    total.tail_max = std::max(total.tail_max, p.tail_max);
    if (p.phi_min < total.phi_min) {
      total.phi_min = p.phi_min;
      total.phi_min_at = p.phi_min_at;
    }
  }

  cert.convexity_margin = total.conv_min;
  cert.hessian_quad_lower = total.quad_min;
  cert.tangential_margin = total.tang_min;
  cert.bilap_sup = total.bilap_max;
  cert.bilap_tail_constant = total.tail_max;
  cert.positivity_min = total.phi_min;

  cert.pass = true;
  for (int k = 0; k < 5; ++k) {
    if (!(cert.c4_residuals[k] <= 1e-10)) {
      cert.pass = false;
      cert.failing_field = "c4_residuals[" + std::to_string(k) + "]";
      cert.failing_location = 1.0;
      break;
    }
  }
  if (cert.pass && !(cert.convexity_margin > 0.0)) {
    cert.pass = false;
    cert.failing_field = "convexity_margin";
    cert.failing_location = total.conv_at;
  }
  if (cert.pass && !(cert.hessian_quad_lower > 0.0)) {
    cert.pass = false;
    cert.failing_field = "hessian_quad_lower";
    cert.failing_location = total.quad_at;
  }
  if (cert.pass && !(cert.positivity_min > 0.0)) {
    cert.pass = false;
    cert.failing_field = "positivity_min";
    cert.failing_location = total.phi_min_at;
  }

  if (cert.pass) w.certified_r_max = std::max(w.certified_r_max, r_max);
  return cert;
}

}  // namespace carleman
