#include "carleman/positivity.hpp"

#include <cmath>
#include <stdexcept>

#include "carleman/monotonicity.hpp"

namespace carleman {

namespace {

constexpr double kCMin = 0.01;
constexpr double kCauchySchwarz3 = 3.0;  // |a+b+c|^2 <= 3(|a|^2+|b|^2+|c|^2)
// 1-D Poincare constant for a function supported in [-2eps, 2eps]:
// ||g||^2 <= (4 eps / pi)^2 ||g'||^2.
const double kPoincare = 16.0 / (M_PI * M_PI);

}  // namespace

TermDecomposition term_decomposition(const ScalarField& f, const OperatorBundle& b,
                                     double epsilon) {
  f.validate();
  if (!(f.grid == b.grid()))
    throw std::invalid_argument("term_decomposition: grid mismatch");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("term_decomposition: epsilon must lie in (0,1)");

  const int n = f.grid.num_points;
  const auto w = b.quad_weights();
  const double lam = b.lambda();
  const auto grad = gradient(f.grid, f.values);
  const auto p1 = b.phi1_signed();
  const auto p2 = b.phi2_values();
  const auto qf = b.quad_form_values();
  const auto psi = b.psi_values();
  const auto lappsi = b.lap_psi_values();
  const auto gg = b.grad_phi_dot_grad_psi();

  std::vector<double> ta(n), tb(n), tc(n), td(n), te(n), tf(n), tg(n), tc1(n), tc2(n);
  for (int i = 0; i < n; ++i) {
    const double f2 = std::norm(f.values[i]);
    const double g2 = std::norm(grad[i]);
    const double bl = b.weight().bilaplacian(f.grid.radius(i), f.grid.dimension);
    ta[i] = 4.0 * lam * w[i] * p2[i] * g2;
    tb[i] = 4.0 * lam * lam * lam * w[i] * qf[i] * f2;
    tc[i] = -lam * w[i] * bl * f2;
    td[i] = w[i] * psi[i] * g2;
    te[i] = -0.5 * w[i] * lappsi[i] * f2;
    tf[i] = -lam * lam * w[i] * psi[i] * p1[i] * p1[i] * f2;
    tg[i] = -lam * w[i] * gg[i] * f2;
    const bool inside = f.grid.radius(i) <= epsilon;
    tc1[i] = inside ? tc[i] : 0.0;
    tc2[i] = inside ? 0.0 : tc[i];
  }
  TermDecomposition d;
  d.A = pairwise_sum(std::span<const double>(ta));
  d.B = pairwise_sum(std::span<const double>(tb));
  d.C = pairwise_sum(std::span<const double>(tc));
  d.D = pairwise_sum(std::span<const double>(td));
  d.E = pairwise_sum(std::span<const double>(te));
  d.F = pairwise_sum(std::span<const double>(tf));
  d.G = pairwise_sum(std::span<const double>(tg));
  d.C1 = pairwise_sum(std::span<const double>(tc1));
  d.C2 = pairwise_sum(std::span<const double>(tc2));
  return d;
}

PositivityReport verify_positivity(const ScalarField& f, const OperatorBundle& b,
                                   double epsilon) {
  const TermDecomposition d = term_decomposition(f, b, epsilon);
  const int n = f.grid.num_points;
  const auto w = b.quad_weights();
  const double lam = b.lambda();
  const auto grad = gradient(f.grid, f.values);
  const auto p2 = b.phi2_values();
  const auto qf = b.quad_form_values();
  std::vector<double> t1(n), t2(n);
  for (int i = 0; i < n; ++i) {
    t1[i] = lam * w[i] * p2[i] * std::norm(grad[i]);
    t2[i] = lam * lam * lam * w[i] * qf[i] * std::norm(f.values[i]);
  }
  PositivityReport rep;
  rep.lhs = d.total();
  rep.denom = pairwise_sum(std::span<const double>(t1)) +
              pairwise_sum(std::span<const double>(t2));
  if (rep.denom <= 1e-300) {
    rep.vacuous = true;
    rep.pass = true;
    rep.ratio = 0.0;
    return rep;
  }
  rep.ratio = rep.lhs / rep.denom;
  rep.pass = rep.ratio >= kCMin;
  return rep;
}

PoincareReport localized_poincare_check(const ScalarField& f, double epsilon) {
  f.validate();
  if (!(epsilon > 0.0) || !(epsilon < f.grid.r_max / 4.0))
    throw std::invalid_argument("localized_poincare_check: epsilon too large for grid");
  const int n = f.grid.num_points;
  const auto w = f.grid.quad_weights();
  CutoffSpec cs{epsilon};

  std::vector<cplx> chif(n);
  std::vector<double> chi(n);
  for (int i = 0; i < n; ++i) {
    chi[i] = cs.chi(f.grid.radius(i));
    chif[i] = chi[i] * f.values[i];
  }
  const auto grad_chif = gradient(f.grid, chif);
  const auto grad_f = gradient(f.grid, f.values);

  PoincareReport rep;
  rep.epsilon = epsilon;
  std::vector<double> tm(n), tg(n), tgb(n), tsh(n);
  for (int i = 0; i < n; ++i) {
    const double r = f.grid.radius(i);
    tm[i] = w[i] * chi[i] * chi[i] * std::norm(f.values[i]);
    tg[i] = w[i] * std::norm(grad_chif[i]);
    tgb[i] = (r <= 2.0 * epsilon) ? w[i] * std::norm(grad_f[i]) : 0.0;
    tsh[i] = (r >= epsilon && r <= 2.0 * epsilon) ? w[i] * std::norm(f.values[i]) : 0.0;
  }
  rep.mass_in_ball = pairwise_sum(std::span<const double>(tm));
  rep.grad_chi_f = pairwise_sum(std::span<const double>(tg));
  rep.grad_f_ball = pairwise_sum(std::span<const double>(tgb));
  rep.shell_mass = pairwise_sum(std::span<const double>(tsh));
  const double eps2 = epsilon * epsilon;
  rep.c_one_term = rep.mass_in_ball / std::max(1e-300, eps2 * rep.grad_chi_f);
  rep.c_two_term =
      rep.mass_in_ball / std::max(1e-300, eps2 * rep.grad_f_ball + rep.shell_mass);
  return rep;
}

namespace {

struct SuiteData {
  // Per-field integrals that do not depend on (lambda, delta).
  std::vector<double> qf_mass;        // int phi''(phi')^2 |f|^2
  std::vector<double> grad_energy;    // int phi'' |grad f|^2
  std::vector<double> wphi_mass;      // int |Wt . grad phi|^2 |f|^2
  std::vector<double> w_grad;         // int |W|^2 |grad f|^2
  std::vector<double> psi_unit_mass;  // int (phi'')^2 |f|^2   (psi = delta lam phi'')
};

}  // namespace

ThresholdReport scan_thresholds(const PotentialSpec& pot, const Weight& w,
                                const GridSpec& grid,
                                std::span<const double> lambdas,
                                std::span<const double> deltas,
                                std::span<const ScalarField> suite) {
  if (lambdas.empty() || deltas.empty())
    throw std::invalid_argument("scan_thresholds: empty parameter grid");
  if (suite.empty()) throw std::invalid_argument("scan_thresholds: empty field suite");
  grid.validate();
  for (const ScalarField& f : suite) {
    f.validate();
    if (!(f.grid == grid)) throw std::invalid_argument("scan_thresholds: suite grid mismatch");
    if (boundary_support_fraction(grid, f.values) > 1e-10)
      throw std::invalid_argument("scan_thresholds: suite field not interior-supported");
  }

  const int n = grid.num_points;
  const auto wq = grid.quad_weights();
  const int nf = static_cast<int>(suite.size());

  // Jet samples.
  std::vector<double> p1(n), p2(n), qf(n);
  for (int i = 0; i < n; ++i) {
    const WeightJet j = w.jet(grid.radius(i));
    p1[i] = j.phi1;
    p2[i] = j.phi2;
    qf[i] = j.phi2 * j.phi1 * j.phi1;
  }

  SuiteData sd;
  sd.qf_mass.resize(nf);
  sd.grad_energy.resize(nf);
  sd.wphi_mass.resize(nf);
  sd.w_grad.resize(nf);
  sd.psi_unit_mass.resize(nf);
  std::vector<std::vector<double>> v_abs2_mass(nf);  // pointwise |V|^2 |f|^2 terms
  std::vector<std::vector<cplx>> grads(nf);
  for (int fi = 0; fi < nf; ++fi) {
    const auto& f = suite[fi].values;
    grads[fi] = gradient(grid, f);
    std::vector<double> t1(n), t2(n), t3(n), t4(n), t5(n);
    v_abs2_mass[fi].resize(n);
    for (int i = 0; i < n; ++i) {
      const double x = grid.node(i);
      const double f2 = std::norm(f[i]);
      const double g2 = std::norm(grads[fi][i]);
      t1[i] = wq[i] * qf[i] * f2;
      t2[i] = wq[i] * p2[i] * g2;
      const double wt = pot.has_W ? pot.Wt_radial(0.0, x) : 0.0;
      t3[i] = wq[i] * wt * wt * p1[i] * p1[i] * f2;
      const double wm = pot.has_W ? pot.W_mag(0.0, x) : 0.0;
      t4[i] = wq[i] * wm * wm * g2;
      t5[i] = wq[i] * p2[i] * p2[i] * f2;
      const double v = pot.V ? std::abs(pot.V(0.0, x)) : 0.0;
      v_abs2_mass[fi][i] = wq[i] * v * v * f2;
    }
    sd.qf_mass[fi] = pairwise_sum(std::span<const double>(t1));
    sd.grad_energy[fi] = pairwise_sum(std::span<const double>(t2));
    sd.wphi_mass[fi] = pairwise_sum(std::span<const double>(t3));
    sd.w_grad[fi] = pairwise_sum(std::span<const double>(t4));
    sd.psi_unit_mass[fi] = pairwise_sum(std::span<const double>(t5));
  }

  ThresholdReport rep;
  rep.suite_size = nf;

  auto cell_constants = [&](double lam, double delta, ThresholdCell& cell) {
    const double eps = 1.0 / std::sqrt(lam);
    cell.lambda = lam;
    cell.delta = delta;
    cell.c1 = 1.0;
    cell.c2 = 1.0;
    cell.c3 = 1.0;
    cell.c4 = 1.0;
    // ||V||_inf over the epsilon ball for the Poincare step.
    double v_sup_in = 0.0;
    if (pot.V) {
      for (int i = 0; i < n; ++i)
        if (grid.radius(i) <= eps)
          v_sup_in = std::max(v_sup_in, std::abs(pot.V(0.0, grid.node(i))));
    }
    CutoffSpec cs{eps};
    for (int fi = 0; fi < nf; ++fi) {
      const double lam3B = lam * lam * lam * sd.qf_mass[fi];
      const double lamA = lam * sd.grad_energy[fi];
      const double denomB = std::max(lam3B, 1e-300);
      const double denomAB = std::max(lamA + lam3B, 1e-300);
      const double denomA = std::max(lamA, 1e-300);

      // First-order transport term against the lambda^3 bulk.
      cell.c1 = std::min(cell.c1,
                         1.0 - kCauchySchwarz3 * lam * lam * sd.wphi_mass[fi] / denomB);

      // Zero-order term, split at eps: exterior directly, interior through
      // the localized Poincare inequality.
      double v_out = 0.0;
      {
        std::vector<double> terms;
        terms.reserve(n);
        for (int i = 0; i < n; ++i)
          if (grid.radius(i) > eps) terms.push_back(v_abs2_mass[fi][i]);
        v_out = terms.empty() ? 0.0 : pairwise_sum(std::span<const double>(terms));
      }
      double ball_bound = 0.0;
      if (v_sup_in > 0.0) {
        std::vector<cplx> chif(n);
        for (int i = 0; i < n; ++i)
          chif[i] = cs.chi(grid.radius(i)) * suite[fi].values[i];
        const auto gcf = gradient(grid, chif);
        ball_bound = kPoincare * eps * eps * norm_sq(wq, gcf);
      }
      cell.c2 = std::min(cell.c2,
                         1.0 - (kCauchySchwarz3 * v_out +
                                kCauchySchwarz3 * v_sup_in * v_sup_in * ball_bound) /
                                   denomAB);

      // First-order term against the gradient bulk (static suite fields:
      // the time part of W.(d_t, grad) drops).
      cell.c3 = std::min(cell.c3, 1.0 - kCauchySchwarz3 * sd.w_grad[fi] / denomA);

      // Multiplier-squared term.
      const double psi_sq = 0.5 * delta * delta * lam * lam * sd.psi_unit_mass[fi];
      cell.c4 = std::min(cell.c4, 1.0 - psi_sq / denomAB);
    }
    cell.min_constant = std::min(std::min(cell.c1, cell.c2), std::min(cell.c3, cell.c4));
    cell.pass = cell.min_constant >= kCMin;
  };

  rep.cells.resize(lambdas.size() * deltas.size());
  parallel_for(rep.cells.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const std::size_t li = idx / deltas.size();
      const std::size_t di = idx % deltas.size();
      cell_constants(lambdas[li], deltas[di], rep.cells[idx]);
    }
  });

  // Least lambda whose row passes at the smallest delta.
  std::size_t d_min = 0, d_max = deltas.size() - 1;
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    if (deltas[di] < deltas[d_min]) d_min = di;
    if (deltas[di] > deltas[d_max]) d_max = di;
  }
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const ThresholdCell& c = rep.cells[li * deltas.size() + d_min];
    if (c.pass) {
      rep.lambda_hat0 = lambdas[li];
      rep.lambda_found = true;
      rep.c1 = c.c1;
      rep.c2 = c.c2;
      rep.c3 = c.c3;
      rep.c4 = c.c4;
      break;
    }
  }
  // Greatest delta whose column passes at the largest lambda.
  std::size_t l_top = 0;
  for (std::size_t li = 0; li < lambdas.size(); ++li)
    if (lambdas[li] > lambdas[l_top]) l_top = li;
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const ThresholdCell& c = rep.cells[l_top * deltas.size() + di];
    if (c.pass && (!rep.delta_found || deltas[di] > rep.delta_star)) {
      rep.delta_star = deltas[di];
      rep.delta_found = true;
    }
  }
  rep.epsilon_rule = rep.lambda_found ? 1.0 / std::sqrt(rep.lambda_hat0) : 0.0;

  // Pointwise multiplier bound at the top cell, smallest delta:
  // (lam phi''(phi')^2 - psi (phi')^2) / (phi''(phi')^2) = lam (1 - delta).
  {
    const double lam = lambdas[l_top];
    const double delta = deltas[d_min];
    double worst = 1e300;
    for (int i = 0; i < n; ++i) {
      if (qf[i] <= 0.0) continue;
      const double psi_i = delta * lam * p2[i];
      const double val = (lam * qf[i] - psi_i * p1[i] * p1[i]) / qf[i];
      worst = std::min(worst, val);
    }
    rep.pointwise_bound_min = worst;
  }
  return rep;
}

double exterior_absorption_constant(const ScalarField& f, const OperatorBundle& b,
                                    double epsilon) {
  const TermDecomposition d = term_decomposition(f, b, epsilon);
  const int n = f.grid.num_points;
  const auto w = b.quad_weights();
  const auto qf = b.quad_form_values();
  const double lam = b.lambda();
  std::vector<double> terms;
  terms.reserve(n);
  for (int i = 0; i < n; ++i)
    if (f.grid.radius(i) > epsilon)
      terms.push_back(w[i] * qf[i] * std::norm(f.values[i]));
  const double bulk_out =
      lam * lam * lam *
      (terms.empty() ? 0.0 : pairwise_sum(std::span<const double>(terms)));
  if (bulk_out <= 1e-300) return 1.0;
  return (d.B + d.C2) / bulk_out;
}

double repulsive_absorption_constant(const ScalarField& f, const OperatorBundle& b) {
  if (!b.has_v2())
    throw std::invalid_argument("repulsive_absorption_constant: bundle has no V2");
  const int n = f.grid.num_points;
  const auto w = b.quad_weights();
  const auto qf = b.quad_form_values();
  const auto p1 = b.phi1_signed();
  const auto dneg = b.dv2_neg();
  const double lam = b.lambda();
  std::vector<double> bulk(n), bad(n);
  for (int i = 0; i < n; ++i) {
    const double f2 = std::norm(f.values[i]);
    bulk[i] = w[i] * qf[i] * f2;
    bad[i] = w[i] * std::abs(p1[i]) * dneg[i] * f2;
  }
  const double B = lam * lam * lam * pairwise_sum(std::span<const double>(bulk));
  const double N = 2.0 * lam * pairwise_sum(std::span<const double>(bad));
  if (B <= 1e-300) return 1.0;
  return (4.0 * B - N) / B;
}

}  // namespace carleman
