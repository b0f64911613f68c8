#include "carleman/waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace carleman {

namespace {

// Symmetric tridiagonal eigenproblem helpers (diagonal d, off-diagonal e).
struct Tridiag {
  std::vector<double> d;
  std::vector<double> e;  // e[i] couples i and i+1
};

// Number of eigenvalues strictly below x (Sturm sign count via the shifted
// LDL^T recurrence, with the usual guard against vanishing pivots).
int sturm_count(const Tridiag& T, double x) {
  const int n = static_cast<int>(T.d.size());
  int count = 0;
  double q = T.d[0] - x;
  if (q < 0) ++count;
  for (int i = 1; i < n; ++i) {
    double denom = q;
    if (denom == 0.0) denom = 1e-300;
    q = T.d[i] - x - T.e[i - 1] * T.e[i - 1] / denom;
    if (q < 0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (k is 1-based) by bisection.
double bisect_eigenvalue(const Tridiag& T, int k, double lo, double hi) {
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(T, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Solves (T - mu I) x = b by tridiagonal LU with partial pivoting.
std::vector<double> shifted_solve(const Tridiag& T, double mu,
                                  std::vector<double> b) {
  const int n = static_cast<int>(T.d.size());
  std::vector<double> diag(n), upper1(n, 0.0), upper2(n, 0.0), lower(n, 0.0);
  for (int i = 0; i < n; ++i) diag[i] = T.d[i] - mu;
  for (int i = 0; i + 1 < n; ++i) {
    upper1[i] = T.e[i];
    lower[i] = T.e[i];
  }
  // Forward elimination with row swaps; fill-in appears on the second
  // superdiagonal.
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(lower[i]) > std::abs(diag[i])) {
      std::swap(diag[i], lower[i]);
      std::swap(upper1[i], diag[i + 1]);
      std::swap(upper2[i], upper1[i + 1]);
      std::swap(b[i], b[i + 1]);
    }
    if (diag[i] == 0.0) diag[i] = 1e-300;
    const double m = lower[i] / diag[i];
    diag[i + 1] -= m * upper1[i];
    upper1[i + 1] -= m * upper2[i];
    b[i + 1] -= m * b[i];
  }
  if (diag[n - 1] == 0.0) diag[n - 1] = 1e-300;
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double v = b[i];
    if (i + 1 < n) v -= upper1[i] * x[i + 1];
    if (i + 2 < n) v -= upper2[i] * x[i + 2];
    x[i] = v / diag[i];
  }
  return x;
}

}  // namespace

StationaryResult solve_stationary(const PotentialSpec& V, const GridSpec& grid,
                                  int num_modes) {
  grid.validate();
  if (num_modes < 1) throw std::invalid_argument("solve_stationary: num_modes >= 1");
  if (!V.time_independent)
    throw std::invalid_argument("solve_stationary: potential must be time-independent");

  const int n = grid.num_points;
  const double h = grid.spacing();
  const auto w = grid.quad_weights();

  // Unknowns exclude Dirichlet nodes: the outer boundary always, and the left
  // boundary on line grids. Radial grids keep the r = 0 node (even symmetry).
  const int lo = grid.radial ? 0 : 1;
  const int hi = n - 1;  // exclusive
  const int m = hi - lo;
  if (m < 8) throw std::invalid_argument("solve_stationary: grid too small");

  // Flux coefficients a_{i+1/2} shared by -Lap in divergence form; the
  // symmetrized matrix is D^{1/2} M D^{-1/2} with D = diag(w).
  std::vector<double> face(n, 1.0);
  if (grid.radial) {
    for (int i = 0; i + 1 < n; ++i) {
      const double rm = 0.5 * (grid.node(i) + grid.node(i + 1));
      face[i] = std::pow(rm, grid.dimension - 1);
    }
  }
  Tridiag T;
  T.d.resize(m);
  T.e.assign(std::max(0, m - 1), 0.0);
  for (int i = lo; i < hi; ++i) {
    const double a_left = (i == 0) ? 0.0 : face[i - 1];
    const double a_right = face[i];
    double vr;
    {
      const cplx vc = V.V ? V.V(0.0, grid.node(i)) : cplx(0.0);
      if (std::abs(vc.imag()) > 1e-12 * (1.0 + std::abs(vc.real())))
        throw std::invalid_argument("solve_stationary: potential must be real");
      vr = vc.real();
    }
    // Line grids: the Dirichlet ghost faces keep coefficient 1.
    const double al = (!grid.radial && i == lo) ? 1.0 : a_left;
    T.d[i - lo] = (al + a_right) / (w[i] * h) + vr;
    if (i + 1 < hi) T.e[i - lo] = -a_right / (h * std::sqrt(w[i] * w[i + 1]));
  }

  // Gershgorin bounds.
  double glo = T.d[0], ghi = T.d[0];
  for (int i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(T.e[i - 1]) : 0.0) +
                     (i + 1 < m ? std::abs(T.e[i]) : 0.0);
    glo = std::min(glo, T.d[i] - r);
    ghi = std::max(ghi, T.d[i] + r);
  }

  StationaryResult res;
  res.matrix_modes_found = std::min(num_modes, m);
  for (int k = 1; k <= res.matrix_modes_found; ++k) {
    const double mu = bisect_eigenvalue(T, k, glo, ghi);
    if (!(mu < 0.0)) break;  // only bound states below the essential spectrum
    // Inverse iteration in the symmetrized basis.
    std::vector<double> v(m);
    std::uint64_t state = 0x9E3779B97F4A7C15ull + 0x1000193ull * k;
    for (int i = 0; i < m; ++i) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      v[i] = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    for (int it = 0; it < 4; ++it) {
      v = shifted_solve(T, mu, std::move(v));
      double nrm = 0.0;
      for (double x : v) nrm += x * x;
      nrm = std::sqrt(nrm);
      for (double& x : v) x /= nrm;
    }
    // Back to nodal values: Q_i = v_i / sqrt(w_i), embedded with Dirichlet
    // zeros; sign fixed by the largest component.
    EigenPair pair;
    pair.lambda_e = -mu;
    pair.Q.grid = grid;
    pair.Q.values.assign(n, cplx(0.0));
    int imax = 0;
    for (int i = 1; i < m; ++i)
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    const double sign = v[imax] >= 0 ? 1.0 : -1.0;
    for (int i = 0; i < m; ++i)
      pair.Q.values[i + lo] = sign * v[i] / std::sqrt(w[i + lo]);
    // ||Q||_w = 1 holds by construction; residual in the same norm.
    {
      std::vector<double> rterms(m);
      for (int i = 0; i < m; ++i) {
        double tv = (T.d[i] - mu) * v[i];
        if (i > 0) tv += T.e[i - 1] * v[i - 1];
        if (i + 1 < m) tv += T.e[i] * v[i + 1];
        rterms[i] = tv * tv;
      }
      pair.residual_norm = std::sqrt(pairwise_sum(std::span<const double>(rterms)));
    }
    res.pairs.push_back(std::move(pair));
  }
  if (res.pairs.empty()) res.note = "no positive-lambda_e mode found";
  return res;
}

SpaceTimeField WaveguideSolution::as_field(double t0, double dt, int num_times) const {
  SpaceTimeField f;
  f.grid = pair.Q.grid;
  f.t0 = t0;
  f.dt = dt;
  f.num_times = num_times;
  f.values.resize(static_cast<std::size_t>(num_times) * f.grid.num_points);
  const double root = std::sqrt(pair.lambda_e);
  for (int it = 0; it < num_times; ++it) {
    const double t = t0 + it * dt;
    const double amp = phase == Phase::Cosine ? std::cos(t * root) : std::sin(t * root);
    auto s = f.slice(it);
    for (int i = 0; i < f.grid.num_points; ++i) s[i] = amp * pair.Q.values[i];
  }
  return f;
}

WaveguideSolution build_waveguide(EigenPair pair, Phase phase) {
  if (!(pair.lambda_e > 0))
    throw std::invalid_argument("build_waveguide: lambda_e must be positive");
  return WaveguideSolution{std::move(pair), phase};
}

PdeResidualReport pde_residual(const SpaceTimeField& u, const PotentialSpec& V) {
  u.validate();
  if (u.num_times < 5) throw std::invalid_argument("pde_residual: need >= 5 time slices");
  const int nt = u.num_times;
  const int nx = u.grid.num_points;
  const double h = u.grid.spacing();
  const auto w = u.grid.quad_weights();
  const SpaceTimeField utt = second_time_derivative(u);
  const SpaceTimeField ut = time_derivative(u);

  // Interior in both time and the spatial stencil.
  std::vector<double> res_terms, u_terms;
  double min_margin = 1e300;
  std::int64_t neg = 0, total = 0;
  for (int it = 1; it + 1 < nt; ++it) {
    const double t = u.time(it);
    const auto us = u.slice(it);
    const auto utts = utt.slice(it);
    const auto uts = ut.slice(it);
    const auto grad = gradient(u.grid, us);
    for (int i = 1; i + 1 < nx; ++i) {
      // Radial grids: Laplacian with the even-symmetry face at r = 0 is only
      // needed at i = 0, which this interior loop skips.
      cplx lap;
      if (u.grid.radial) {
        const double r = u.grid.node(i);
        lap = (us[i + 1] - 2.0 * us[i] + us[i - 1]) / (h * h) +
              (u.grid.dimension - 1.0) / r * (us[i + 1] - us[i - 1]) / (2.0 * h);
      } else {
        lap = (us[i + 1] - 2.0 * us[i] + us[i - 1]) / (h * h);
      }
      const cplx vu = (V.V ? V.V(t, u.grid.node(i)) : cplx(0.0)) * us[i];
      const cplx op = utts[i] + lap;
      res_terms.push_back(w[i] * std::norm(op - vu));
      u_terms.push_back(w[i] * std::norm(us[i]));
      double wterm = 0.0;
      if (V.has_W)
        wterm = V.W_mag(t, u.grid.node(i)) * (std::abs(uts[i]) + std::abs(grad[i]));
      const double margin = std::abs(vu) + wterm - std::abs(op);
      min_margin = std::min(min_margin, margin);
      if (margin < 0) ++neg;
      ++total;
    }
  }
  PdeResidualReport rep;
  const double un = std::sqrt(pairwise_sum(std::span<const double>(u_terms)));
  rep.residual_norm =
      std::sqrt(pairwise_sum(std::span<const double>(res_terms))) / std::max(un, 1e-300);
  rep.min_margin = min_margin;
  rep.negative_fraction = total ? static_cast<double>(neg) / total : 0.0;
  return rep;
}

DecayReport measure_decay(const ScalarField& Q, double p, double window_lo,
                          double window_hi) {
  Q.validate();
  if (!(p > 0)) throw std::invalid_argument("measure_decay: p must be positive");
  if (!(window_lo < window_hi))
    throw std::invalid_argument("measure_decay: empty window");

  DecayReport rep;
  rep.p_used = p;
  std::vector<double> xs, ys;
  int start_sign = 0;
  double hi_used = window_hi;
  for (int i = 0; i < Q.grid.num_points; ++i) {
    const double r = Q.grid.radius(i);
    if (Q.grid.node(i) < 0) continue;  // fit the right half on line grids
    if (r < window_lo || r > window_hi) continue;
    const double re = Q.values[i].real();
    const double a = std::abs(Q.values[i]);
    const int sgn = re > 0 ? 1 : (re < 0 ? -1 : 0);
    if (a < 1e-290 || (start_sign != 0 && sgn != 0 && sgn != start_sign)) {
      rep.window_shrunk = true;
      hi_used = r;
      break;
    }
    if (start_sign == 0) start_sign = sgn;
    xs.push_back(-std::pow(r, p));
    ys.push_back(std::log(a));
  }
  if (xs.size() < 4) throw std::invalid_argument("measure_decay: window too small");
  rep.window_lo = window_lo;
  rep.window_hi = rep.window_shrunk ? hi_used : window_hi;
  rep.fitted_rate = fit_slope(xs, ys);
  // rms of the fit residual
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / xs.size(), my = sy / ys.size();
  const double b0 = my - rep.fitted_rate * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (b0 + rep.fitted_rate * xs[i]);
    ss += e * e;
  }
  rep.goodness = std::sqrt(ss / xs.size());
  return rep;
}

WeightedNormScan weighted_norm_scan(const SpaceTimeField& u, double p,
                                    std::span<const double> betas,
                                    std::span<const double> radii) {
  u.validate();
  if (betas.empty() || radii.empty())
    throw std::invalid_argument("weighted_norm_scan: empty beta or radius grid");
  std::vector<double> rs(radii.begin(), radii.end());
  std::sort(rs.begin(), rs.end());
  const int nt = u.num_times;
  const int nx = u.grid.num_points;
  const auto w = u.grid.quad_weights();

  // Node order sorted by radius, for streaming prefix accumulation.
  std::vector<int> order(nx);
  for (int i = 0; i < nx; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return u.grid.radius(a) < u.grid.radius(b);
  });

  WeightedNormScan scan;
  scan.p = p;
  scan.betas.resize(betas.size());

  parallel_for(betas.size(), [&](std::size_t b0, std::size_t b1) {
    for (std::size_t bi = b0; bi < b1; ++bi) {
      const double beta = betas[bi];
      BetaClassification& bc = scan.betas[bi];
      bc.beta = beta;
      bc.radii = rs;
      bc.log_integral.assign(rs.size(), -std::numeric_limits<double>::infinity());
      for (int it = 0; it < nt; ++it) {
        const auto us = u.slice(it);
        LogAccumulator acc;
        std::size_t ri = 0;
        for (int oi = 0; oi < nx && ri < rs.size(); ++oi) {
          const int i = order[oi];
          const double r = u.grid.radius(i);
          while (ri < rs.size() && r > rs[ri]) {
            bc.log_integral[ri] = std::max(bc.log_integral[ri], acc.log_sum());
            ++ri;
          }
          if (ri >= rs.size()) break;
          const double a = std::abs(us[i]);
          if (a > 0.0 && w[i] > 0.0)
            acc.add(beta * std::pow(r, p) + 2.0 * std::log(a) + std::log(w[i]));
        }
        while (ri < rs.size()) {
          bc.log_integral[ri] = std::max(bc.log_integral[ri], acc.log_sum());
          ++ri;
        }
      }
      // Classification on the last radius doubling present in the grid.
      const double r_last = rs.back();
      int half_idx = -1;
      for (std::size_t i = 0; i < rs.size(); ++i)
        if (std::abs(rs[i] - 0.5 * r_last) <= 1e-9 * r_last) half_idx = static_cast<int>(i);
      if (half_idx < 0) {
        bc.classification = "indeterminate";
        continue;
      }
      const double la = bc.log_integral[half_idx];
      const double lb = bc.log_integral.back();
      if (std::isinf(la) && std::isinf(lb)) {
        bc.classification = "convergent";  // identically zero mass
        continue;
      }
      const double dlog = lb - la;
      if (dlog >= std::log(scan.growth_factor))
        bc.classification = "divergent";
      else if (dlog <= std::log1p(scan.increment_tol))
        bc.classification = "convergent";
      else
        bc.classification = "indeterminate";
    }
  });

  // Bracket between the largest convergent and smallest divergent beta.
  bool have_lo = false, have_hi = false;
  for (const auto& bc : scan.betas) {
    if (bc.classification == "convergent" &&
        (!have_lo || bc.beta > scan.beta_star_lo)) {
      scan.beta_star_lo = bc.beta;
      have_lo = true;
    }
    if (bc.classification == "divergent" &&
        (!have_hi || bc.beta < scan.beta_star_hi)) {
      scan.beta_star_hi = bc.beta;
      have_hi = true;
    }
  }
  scan.bracket_found = have_lo && have_hi && scan.beta_star_lo < scan.beta_star_hi;
  return scan;
}

}  // namespace carleman
