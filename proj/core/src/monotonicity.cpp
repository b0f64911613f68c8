#include "carleman/monotonicity.hpp"

#include <cmath>
#include <stdexcept>

namespace carleman {

namespace {

struct SliceWork {
  std::vector<cplx> af, sf, spa, s;
};

void check_pair(const SpaceTimeField& f, const OperatorBundle& b, int min_slices) {
  f.validate();
  if (!(f.grid == b.grid()))
    throw std::invalid_argument("space-time field and bundle grids differ");
  if (f.num_times < min_slices)
    throw std::invalid_argument("too few time slices");
}

// X(t) = <Af, d_t f> + <psi f, d_t f> (complex pairing).
cplx pairing(const OperatorBundle& b, std::span<const cplx> f,
             std::span<const cplx> ft) {
  const auto w = b.quad_weights();
  auto af = b.A(f);
  std::vector<cplx> psif(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) psif[i] = b.psi(i) * f[i];
  return inner_product(w, af, ft) + inner_product(w, psif, ft);
}

}  // namespace

CarlemanLedger evaluate_ledger(const SpaceTimeField& f, const OperatorBundle& b,
                               const SpaceTimeField* source) {
  check_pair(f, b, 5);
  if (source) {
    source->validate();
    if (!(source->grid == f.grid) || source->num_times != f.num_times)
      throw std::invalid_argument("evaluate_ledger: source shape mismatch");
  }
  const int nt = f.num_times;
  const int nx = f.grid.num_points;
  const auto w = b.quad_weights();
  const auto wt = time_weights(f);
  const double h = f.grid.spacing();
  const double k = f.dt;

  const SpaceTimeField ft = time_derivative(f);
  const SpaceTimeField ftt = second_time_derivative(f);

  std::vector<double> comm_t(nt), psidt_t(nt), af_t(nt), cross_t(nt), src_t(nt),
      psisq_t(nt), energy_t(nt);
  for (int it = 0; it < nt; ++it) {
    const auto fs = f.slice(it);
    const auto fts = ft.slice(it);
    std::vector<cplx> comm(nx), af(nx), spa(nx), s(nx);
    b.apply_commutator_discrete(fs, comm);
    b.apply_A(fs, af);
    b.apply_S_plus_A(fs, spa);
    if (source) {
      const auto ss = source->slice(it);
      for (int i = 0; i < nx; ++i) s[i] = ss[i];
    } else {
      const auto ftts = ftt.slice(it);
      for (int i = 0; i < nx; ++i) s[i] = ftts[i] - spa[i];
    }
    comm_t[it] = 0.5 * inner_product(w, comm, fs).real();
    std::vector<double> tp(nx), ta(nx), tc(nx), ts(nx), tq(nx);
    for (int i = 0; i < nx; ++i) {
      tp[i] = w[i] * b.psi(i) * std::norm(fts[i]);
      ta[i] = 0.5 * w[i] * std::norm(af[i]);
      tc[i] = w[i] * b.psi(i) * (spa[i] * std::conj(fs[i])).real();
      ts[i] = w[i] * std::norm(s[i]);
      tq[i] = 0.5 * w[i] * b.psi(i) * b.psi(i) * std::norm(fs[i]);
    }
    psidt_t[it] = pairwise_sum(std::span<const double>(tp));
    af_t[it] = pairwise_sum(std::span<const double>(ta));
    cross_t[it] = pairwise_sum(std::span<const double>(tc));
    src_t[it] = pairwise_sum(std::span<const double>(ts));
    psisq_t[it] = pairwise_sum(std::span<const double>(tq));

    const auto grad = gradient(f.grid, fs);
    energy_t[it] = norm_sq(w, fs) + norm_sq(w, fts) + norm_sq(w, grad);
  }

  auto integrate = [&](const std::vector<double>& per_t) {
    std::vector<double> terms(nt);
    for (int it = 0; it < nt; ++it) terms[it] = wt[it] * per_t[it];
    return pairwise_sum(std::span<const double>(terms));
  };

  CarlemanLedger led;
  led.commutator_term = integrate(comm_t);
  led.psi_dt_term = integrate(psidt_t);
  led.af_term = integrate(af_t);
  led.cross_term = integrate(cross_t);
  led.rhs_source = integrate(src_t);
  led.psi_sq_term = integrate(psisq_t);

  const cplx x0 = pairing(b, f.slice(0), ft.slice(0));
  const cplx x1 = pairing(b, f.slice(nt - 1), ft.slice(nt - 1));
  led.boundary_diff_of_abs = std::abs(x1) - std::abs(x0);
  led.boundary_abs_of_diff = std::abs(x1 - x0);
  led.boundary_term = std::max(led.boundary_diff_of_abs, led.boundary_abs_of_diff);

  led.field_energy = 0.0;
  for (int it = 0; it < nt; ++it) led.field_energy = std::max(led.field_energy, energy_t[it]);
  led.tol = 100.0 * (h * h + k * k) * std::max(1.0, led.field_energy);
  led.margin = (led.rhs_source + led.psi_sq_term + led.boundary_term) -
               (led.commutator_term + led.psi_dt_term + led.af_term + led.cross_term);
  led.pass = led.margin >= -led.tol;
  return led;
}

double verify_identity(const SpaceTimeField& f, const OperatorBundle& b) {
  check_pair(f, b, 7);
  const int nt = f.num_times;
  const int nx = f.grid.num_points;
  const auto w = b.quad_weights();
  const double k = f.dt;

  const SpaceTimeField ft = time_derivative(f);
  const SpaceTimeField ftt = second_time_derivative(f);

  // Pairing trace first, so its time derivative can be centered.
  std::vector<double> X(nt);
  for (int it = 0; it < nt; ++it)
    X[it] = pairing(b, f.slice(it), ft.slice(it)).real();

  double worst = 0.0;
  for (int it = 2; it + 2 < nt; ++it) {
    const auto fs = f.slice(it);
    const auto fts = ft.slice(it);
    const auto ftts = ftt.slice(it);
    std::vector<cplx> comm(nx), af(nx), spa(nx), s(nx), psif(nx);
    b.apply_commutator_discrete(fs, comm);
    b.apply_A(fs, af);
    b.apply_S_plus_A(fs, spa);
    for (int i = 0; i < nx; ++i) {
      s[i] = ftts[i] - spa[i];
      psif[i] = b.psi(i) * fs[i];
    }
    std::vector<double> tp(nx);
    for (int i = 0; i < nx; ++i) tp[i] = w[i] * b.psi(i) * std::norm(fts[i]);

    const double lhs = 0.5 * inner_product(w, comm, fs).real() +
                       pairwise_sum(std::span<const double>(tp)) +
                       norm_sq(w, af) +
                       inner_product(w, psif, spa).real();
    const double xdot = (X[it + 1] - X[it - 1]) / (2.0 * k);
    const double rhs = -inner_product(w, af, s).real() -
                       inner_product(w, psif, s).real() + xdot;
    const double scale = std::abs(lhs) + std::abs(xdot) + norm_sq(w, s) + 1.0;
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

HTrace h_trace(const SpaceTimeField& f, const OperatorBundle& b) {
  check_pair(f, b, 5);
  const int nt = f.num_times;
  const int nx = f.grid.num_points;
  const auto w = b.quad_weights();
  const double k = f.dt;
  const SpaceTimeField ft = time_derivative(f);
  const SpaceTimeField ftt = second_time_derivative(f);

  HTrace tr;
  tr.times.resize(nt);
  tr.H.resize(nt);
  tr.Hdot_analytic.resize(nt);
  tr.Hdot_numeric.resize(nt);
  for (int it = 0; it < nt; ++it) {
    tr.times[it] = f.time(it);
    const auto fs = f.slice(it);
    const auto fts = ft.slice(it);
    const auto ftts = ftt.slice(it);
    std::vector<cplx> sf(nx), af(nx), spa(nx), s(nx), psif(nx);
    b.apply_S(fs, sf);
    b.apply_A(fs, af);
    for (int i = 0; i < nx; ++i) spa[i] = sf[i] + af[i];
    for (int i = 0; i < nx; ++i) {
      s[i] = ftts[i] - spa[i];
      psif[i] = b.psi(i) * fs[i];
    }
    tr.H[it] = norm_sq(w, fts) - inner_product(w, sf, fs).real() +
               inner_product(w, psif, fs).real();
    tr.Hdot_analytic[it] = 2.0 * inner_product(w, af, fts).real() +
                           2.0 * inner_product(w, psif, fts).real() +
                           2.0 * inner_product(w, s, fts).real();
  }
  for (int it = 0; it < nt; ++it) {
    if (it == 0)
      tr.Hdot_numeric[it] = (-3.0 * tr.H[0] + 4.0 * tr.H[1] - tr.H[2]) / (2.0 * k);
    else if (it == nt - 1)
      tr.Hdot_numeric[it] =
          (3.0 * tr.H[it] - 4.0 * tr.H[it - 1] + tr.H[it - 2]) / (2.0 * k);
    else
      tr.Hdot_numeric[it] = (tr.H[it + 1] - tr.H[it - 1]) / (2.0 * k);
  }
  return tr;
}

double CutoffSpec::chi(double r) const {
  if (r <= R) return 1.0;
  if (r >= 2.0 * R) return 0.0;
  return 1.0 - smoothstep_quintic((r - R) / R);
}

double CutoffSpec::dchi(double r) const {
  if (r <= R || r >= 2.0 * R) return 0.0;
  return -smoothstep_quintic_d1((r - R) / R) / R;
}

double CutoffSpec::lap_chi(double r, int dimension) const {
  if (r <= R || r >= 2.0 * R) return 0.0;
  const double d2 = -smoothstep_quintic_d2((r - R) / R) / (R * R);
  return d2 + (dimension - 1.0) * dchi(r) / r;
}

CutoffReport check_cutoff(const CutoffSpec& c, const GridSpec& g) {
  CutoffReport rep;
  rep.plateau_ok = true;
  for (int i = 0; i < g.num_points; ++i) {
    const double r = g.radius(i);
    rep.max_grad_times_R = std::max(rep.max_grad_times_R, std::abs(c.dchi(r)) * c.R);
    rep.max_lap_times_R2 =
        std::max(rep.max_lap_times_R2,
                 std::abs(c.lap_chi(r, g.dimension)) * c.R * c.R);
    if (r <= c.R && c.chi(r) != 1.0) rep.plateau_ok = false;
    if (r >= 2.0 * c.R && c.chi(r) != 0.0) rep.plateau_ok = false;
  }
  rep.grad_bound_2_ok = rep.max_grad_times_R <= 2.0;
  rep.lap_bound_2_ok = rep.max_lap_times_R2 <= 2.0;
  return rep;
}

LocalizedLedger localized_ledger(const SpaceTimeField& f, const OperatorBundle& b,
                                 const CutoffSpec& cutoff,
                                 const PotentialSpec* pot) {
  check_pair(f, b, 5);
  const double h = f.grid.spacing();
  if (2.0 * cutoff.R > f.grid.r_max - 10.0 * h)
    throw std::invalid_argument("localized_ledger: cutoff support exceeds grid");

  const int nt = f.num_times;
  const int nx = f.grid.num_points;
  const double lam = b.lambda();
  const auto p1 = b.phi1_signed();

  // chi_R f, sampled on the same grid.
  SpaceTimeField fr = f;
  std::vector<double> chi(nx), dchi_signed(nx), lapchi(nx);
  for (int i = 0; i < nx; ++i) {
    const double x = f.grid.node(i);
    const double r = f.grid.radius(i);
    chi[i] = cutoff.chi(r);
    const double d = cutoff.dchi(r);
    dchi_signed[i] = x < 0 ? -d : d;
    lapchi[i] = cutoff.lap_chi(r, f.grid.dimension);
  }
  for (int it = 0; it < nt; ++it) {
    auto s = fr.slice(it);
    for (int i = 0; i < nx; ++i) s[i] *= chi[i];
  }

  // Enlarged source: chi |s(f)| + |f||Lap chi - 2 lam grad phi.grad chi - Wt.grad chi|
  //                  + 2 |grad chi . grad f|.
  const SpaceTimeField ftt = second_time_derivative(f);
  SpaceTimeField maj = fr;
  for (int it = 0; it < nt; ++it) {
    const auto fs = f.slice(it);
    const auto ftts = ftt.slice(it);
    std::vector<cplx> spa(nx);
    b.apply_S_plus_A(fs, spa);
    const auto grad = gradient(f.grid, fs);
    auto out = maj.slice(it);
    const double t = f.time(it);
    for (int i = 0; i < nx; ++i) {
      const cplx s_i = ftts[i] - spa[i];
      double wt_gradchi = 0.0;
      if (pot && pot->has_W)
        wt_gradchi = pot->Wt_radial(t, f.grid.node(i)) * dchi_signed[i];
      const double comm_coeff =
          std::abs(lapchi[i] - 2.0 * lam * p1[i] * dchi_signed[i] - wt_gradchi);
      out[i] = chi[i] * std::abs(s_i) + std::abs(fs[i]) * comm_coeff +
               2.0 * std::abs(dchi_signed[i]) * std::abs(grad[i]);
    }
  }

  LocalizedLedger loc;
  loc.ledger = evaluate_ledger(fr, b, &maj);
  loc.cutoff = check_cutoff(cutoff, f.grid);

  // Annulus integrals of the original field and the decreasing R-weighting.
  const auto w = b.quad_weights();
  const auto wt = time_weights(f);
  const auto qf = b.quad_form_values();
  const auto p2 = b.phi2_values();
  std::vector<double> mass_t(nt), grad_t(nt);
  for (int it = 0; it < nt; ++it) {
    const auto fs = f.slice(it);
    const auto grad = gradient(f.grid, fs);
    std::vector<double> tm, tg;
    tm.reserve(nx);
    tg.reserve(nx);
    for (int i = 0; i < nx; ++i) {
      const double r = f.grid.radius(i);
      if (r < cutoff.R || r > 2.0 * cutoff.R) continue;
      tm.push_back(w[i] * qf[i] * std::norm(fs[i]));
      tg.push_back(w[i] * p2[i] * std::norm(grad[i]));
    }
    mass_t[it] = pairwise_sum(std::span<const double>(tm));
    grad_t[it] = pairwise_sum(std::span<const double>(tg));
  }
  std::vector<double> m_terms(nt), g_terms(nt);
  for (int it = 0; it < nt; ++it) {
    m_terms[it] = wt[it] * mass_t[it];
    g_terms[it] = wt[it] * grad_t[it];
  }
  loc.annulus_mass = pairwise_sum(std::span<const double>(m_terms));
  loc.annulus_grad = pairwise_sum(std::span<const double>(g_terms));
  const double lr = 1.0 + std::log(cutoff.R);
  loc.weighted_rhs =
      (lr * lr / cutoff.R) * (lam * lam * loc.annulus_mass + loc.annulus_grad);
  return loc;
}

SequenceReport boundary_sequence_scan(const SpaceTimeField& f,
                                      const OperatorBundle& b) {
  check_pair(f, b, 5);
  const int nt = f.num_times;
  const int nx = f.grid.num_points;
  const auto w = b.quad_weights();
  const auto wt = time_weights(f);
  const double lam = b.lambda();
  const auto qf = b.quad_form_values();
  const auto p2 = b.phi2_values();
  const SpaceTimeField ft = time_derivative(f);

  SequenceReport rep;
  rep.times.resize(nt);
  rep.g.resize(nt);
  std::vector<double> pairing_abs(nt);
  for (int it = 0; it < nt; ++it) {
    rep.times[it] = f.time(it);
    const auto fs = f.slice(it);
    const auto fts = ft.slice(it);
    const auto grad = gradient(f.grid, fs);
    std::vector<double> terms(nx);
    for (int i = 0; i < nx; ++i) {
      terms[i] = w[i] * (b.psi(i) * std::norm(fts[i]) +
                         lam * p2[i] * std::norm(grad[i]) +
                         lam * lam * lam * qf[i] * std::norm(fs[i]));
    }
    rep.g[it] = pairwise_sum(std::span<const double>(terms));
    pairing_abs[it] = std::abs(pairing(b, fs, fts));
  }
  std::vector<double> g_terms(nt);
  for (int it = 0; it < nt; ++it) g_terms[it] = wt[it] * rep.g[it];
  rep.time_integral = pairwise_sum(std::span<const double>(g_terms));
  for (int it = 1; it + 1 < nt; ++it) {
    if (rep.g[it] <= rep.g[it - 1] && rep.g[it] <= rep.g[it + 1])
      rep.local_min_indices.push_back(it);
  }
  double gmax = 0.0;
  for (double v : rep.g) gmax = std::max(gmax, v);
  for (int it = 0; it < nt; ++it) {
    rep.pairing_sup = std::max(rep.pairing_sup, pairing_abs[it]);
    if (rep.g[it] > 1e-14 * std::max(1.0, gmax))
      rep.pairing_over_g_sup =
          std::max(rep.pairing_over_g_sup, pairing_abs[it] / rep.g[it]);
  }
  return rep;
}

}  // namespace carleman
