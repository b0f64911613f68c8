#include "carleman/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace carleman {

namespace {

double signed_phi1(const Weight& w, double x) {
  const double r = std::abs(x);
  const double v = w.jet(r).phi1;
  return x < 0 ? -v : v;
}

}  // namespace

OperatorBundle::OperatorBundle(const Weight& w, double lambda_c, double delta,
                               const GridSpec& grid,
                               std::function<double(double)> v2)
    : weight_(w), lambda_(lambda_c), delta_(delta), grid_(grid), v2_fn_(std::move(v2)) {
  grid_.validate();
  if (!(lambda_ > 0)) throw std::invalid_argument("OperatorBundle: lambda_c must be > 0");
  if (!(delta_ > 0)) throw std::invalid_argument("OperatorBundle: delta must be > 0");
  if (weight_.certified_r_max + 1e-12 < grid_.r_max)
    throw std::invalid_argument("OperatorBundle: weight not certified over [0, R_max]");

  const int n = grid_.num_points;
  const int dim = grid_.dimension;
  const double h = grid_.spacing();
  w_ = grid_.quad_weights();
  p1_.resize(n);
  p2_.resize(n);
  grad_sq_.resize(n);
  psi_.resize(n);
  quad_form_.resize(n);
  bilap_.resize(n);
  lap_psi_.resize(n);
  gphi_gpsi_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = grid_.node(i);
    const double r = grid_.radius(i);
    const WeightJet j = weight_.jet(r);
    p1_[i] = signed_phi1(weight_, x);
    p2_[i] = j.phi2;
    grad_sq_[i] = j.phi1 * j.phi1;
    psi_[i] = delta_ * lambda_ * j.phi2;
    quad_form_[i] = j.phi2 * j.phi1 * j.phi1;
    bilap_[i] = weight_.bilaplacian(r, dim);
    // Lap psi = delta lambda Lap(phi''); grad phi . grad psi = phi' psi'.
    const double lap_p2 = (r == 0.0) ? dim * j.phi4 : j.phi4 + (dim - 1.0) * j.phi3 / r;
    lap_psi_[i] = delta_ * lambda_ * lap_p2;
    gphi_gpsi_[i] = delta_ * lambda_ * j.phi1 * j.phi3;
  }

  // Face coefficients. face_a_[i] belongs to the face between nodes i and
  // i+1; face_left_ is the face between the first node and the Dirichlet
  // ghost (line grids only; at r = 0 the radial flux vanishes by symmetry).
  face_a_.assign(n, 0.0);
  face_b_.assign(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double rm = std::abs(0.5 * (grid_.node(i) + grid_.node(i + 1)));
    face_a_[i] = grid_.radial ? std::pow(rm, dim - 1) : 1.0;
    face_b_[i] = face_a_[i] * weight_.jet(rm).phi2;
  }
  {
    const double re = grid_.radius(n - 1) + 0.5 * h;
    face_a_[n - 1] = grid_.radial ? std::pow(re, dim - 1) : 1.0;
    face_b_[n - 1] = face_a_[n - 1] * weight_.jet(re).phi2;
  }
  if (!grid_.radial) {
    const double re = grid_.radius(0) + 0.5 * h;
    face_left_a_ = 1.0;
    face_left_b_ = weight_.jet(re).phi2;
  } else {
    face_left_a_ = 0.0;
    face_left_b_ = 0.0;
  }

  if (v2_fn_) {
    has_v2_ = true;
    v2_.resize(n);
    for (int i = 0; i < n; ++i) v2_[i] = v2_fn_(grid_.node(i));
    dv2_pos_.assign(n, 0.0);
    dv2_neg_.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double d;
      if (i == 0)
        d = (-3.0 * v2_[0] + 4.0 * v2_[1] - v2_[2]) / (2.0 * h);
      else if (i == n - 1)
        d = (3.0 * v2_[i] - 4.0 * v2_[i - 1] + v2_[i - 2]) / (2.0 * h);
      else
        d = (v2_[i + 1] - v2_[i - 1]) / (2.0 * h);
      if (!grid_.radial && grid_.node(i) < 0) d = -d;  // radial derivative on the line
      if (d >= 0.0)
        dv2_pos_[i] = d;  // zero-derivative ties belong to the positive part
      else
        dv2_neg_[i] = -d;
    }
  }
}

void OperatorBundle::apply_S(std::span<const cplx> f, std::span<cplx> out) const {
  const int n = grid_.num_points;
  const double h = grid_.spacing();
  const double lam2 = lambda_ * lambda_;
  for (int i = 0; i < n; ++i) {
    const cplx fm = i > 0 ? f[i - 1] : cplx(0.0);
    const cplx fp = i + 1 < n ? f[i + 1] : cplx(0.0);
    const double am = i > 0 ? face_a_[i - 1] : face_left_a_;
    const double ap = face_a_[i];
    const cplx lap = (ap * (fp - f[i]) - am * (f[i] - fm)) / (h * w_[i]);
    cplx v = -lap - lam2 * grad_sq_[i] * f[i];
    if (has_v2_) v += v2_[i] * f[i];
    out[i] = v;
  }
}

void OperatorBundle::apply_A(std::span<const cplx> f, std::span<cplx> out) const {
  const int n = grid_.num_points;
  const double h = grid_.spacing();
  for (int i = 0; i < n; ++i) {
    const cplx fm = i > 0 ? f[i - 1] : cplx(0.0);
    const cplx fp = i + 1 < n ? f[i + 1] : cplx(0.0);
    const double wpm = i > 0 ? w_[i - 1] * p1_[i - 1] : 0.0;
    const double wpp = i + 1 < n ? w_[i + 1] * p1_[i + 1] : 0.0;
    out[i] = lambda_ * (p1_[i] * (fp - fm) / (2.0 * h) +
                        (wpp * fp - wpm * fm) / (2.0 * h * w_[i]));
  }
}

void OperatorBundle::apply_S_plus_A(std::span<const cplx> f, std::span<cplx> out) const {
  std::vector<cplx> tmp(f.size());
  apply_S(f, tmp);
  apply_A(f, out);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] += tmp[i];
}

void OperatorBundle::apply_commutator_discrete(std::span<const cplx> f,
                                               std::span<cplx> out) const {
  std::vector<cplx> af(f.size()), sf(f.size()), saf(f.size()), asf(f.size());
  apply_A(f, af);
  apply_S(f, sf);
  apply_S(af, saf);
  apply_A(sf, asf);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = saf[i] - asf[i];
}

std::vector<cplx> OperatorBundle::S(std::span<const cplx> f) const {
  std::vector<cplx> out(f.size());
  apply_S(f, out);
  return out;
}

std::vector<cplx> OperatorBundle::A(std::span<const cplx> f) const {
  std::vector<cplx> out(f.size());
  apply_A(f, out);
  return out;
}

ScalarField commutator_closed_apply(const OperatorBundle& b, const ScalarField& f) {
  f.validate();
  if (!(f.grid == b.grid()))
    throw std::invalid_argument("commutator_closed_apply: grid mismatch");
  const int n = b.grid_.num_points;
  const double h = b.grid_.spacing();
  const double lam = b.lambda_;
  ScalarField out{f.grid, std::vector<cplx>(n)};
  for (int i = 0; i < n; ++i) {
    const cplx fm = i > 0 ? f.values[i - 1] : cplx(0.0);
    const cplx fp = i + 1 < n ? f.values[i + 1] : cplx(0.0);
    const double bm = i > 0 ? b.face_b_[i - 1] : b.face_left_b_;
    const double bp = b.face_b_[i];
    const cplx div_term =
        (bp * (fp - f.values[i]) - bm * (f.values[i] - fm)) / (h * b.w_[i]);
    cplx v = -lam * (4.0 * div_term - 4.0 * lam * lam * b.quad_form_[i] * f.values[i] +
                     b.bilap_[i] * f.values[i]);
    if (b.has_v2_) {
      const double phi1r = std::abs(b.p1_[i]);
      v += 2.0 * lam * phi1r * (b.dv2_neg_[i] - b.dv2_pos_[i]) * f.values[i];
    }
    out.values[i] = v;
  }
  return out;
}

ConvergenceReport verify_commutator(const OperatorBundle& base,
                                    const std::function<cplx(double)>& f,
                                    int refinements) {
  if (refinements < 3)
    throw std::invalid_argument("verify_commutator: need at least 3 refinements");
  const GridSpec g0 = base.grid();
  const double interior = g0.r_max - 10.0 * g0.spacing();

  ConvergenceReport rep;
  double fmax = 0.0;
  for (int i = 0; i < g0.num_points; ++i)
    fmax = std::max(fmax, std::abs(f(g0.node(i))));
  for (int lev = 0; lev <= refinements; ++lev) {
    GridSpec g = g0;
    g.num_points = (g0.num_points - 1) * (1 << lev) + 1;
    OperatorBundle b(base.weight(), base.lambda(), base.delta(), g, base.v2_fn());
    ScalarField fs = ScalarField::sample(g, f);
    if (boundary_support_fraction(g, fs.values) > 1e-10)
      throw std::invalid_argument("verify_commutator: field not interior-supported");
    std::vector<cplx> disc(g.num_points);
    b.apply_commutator_discrete(fs.values, disc);
    ScalarField closed = commutator_closed_apply(b, fs);
    const auto w = g.quad_weights();
    std::vector<double> err_terms, f_terms;
    err_terms.reserve(g.num_points);
    f_terms.reserve(g.num_points);
    for (int i = 0; i < g.num_points; ++i) {
      if (g.radius(i) > interior) continue;
      err_terms.push_back(w[i] * std::norm(disc[i] - closed.values[i]));
      f_terms.push_back(w[i] * std::norm(fs.values[i]));
    }
    const double den =
        std::max(1e-300, std::sqrt(pairwise_sum(std::span<const double>(f_terms))));
    const double e =
        std::sqrt(pairwise_sum(std::span<const double>(err_terms))) / den;
    rep.levels.push_back({g.spacing(), e});
  }
  bool all_tiny = true;
  for (const auto& lv : rep.levels)
    all_tiny = all_tiny && lv.residual <= 1e-13 * std::max(1.0, fmax);
  if (all_tiny) {
    rep.degenerate = true;
    rep.fitted_order = 0.0;
    rep.pass = true;
    return rep;
  }
  std::vector<double> lx, ly;
  for (const auto& lv : rep.levels) {
    lx.push_back(std::log(lv.h));
    ly.push_back(std::log(std::max(lv.residual, 1e-300)));
  }
  rep.fitted_order = fit_slope(lx, ly);
  rep.pass = rep.fitted_order >= 1.9;
  return rep;
}

IbpReport verify_ibp_identity(const OperatorBundle& b, const ScalarField& f) {
  f.validate();
  if (!(f.grid == b.grid()))
    throw std::invalid_argument("verify_ibp_identity: grid mismatch");
  if (boundary_support_fraction(f.grid, f.values) > 1e-10)
    throw std::invalid_argument("verify_ibp_identity: field not interior-supported");
  const int n = f.grid.num_points;
  const auto w = b.quad_weights();
  const double lam = b.lambda();

  std::vector<cplx> spa(n);
  b.apply_S_plus_A(f.values, spa);
  std::vector<double> lhs_terms(n);
  for (int i = 0; i < n; ++i)
    lhs_terms[i] = w[i] * b.psi(i) * (spa[i] * std::conj(f.values[i])).real();
  const double lhs = pairwise_sum(std::span<const double>(lhs_terms));

  const auto grad = gradient(f.grid, f.values);
  std::vector<double> t1(n), t2(n), t3(n), t4(n);
  const auto p1 = b.phi1_signed();
  const auto psi = b.psi_values();
  const auto lap_psi = b.lap_psi_values();
  const auto gg = b.grad_phi_dot_grad_psi();
  for (int i = 0; i < n; ++i) {
    const double f2 = std::norm(f.values[i]);
    t1[i] = w[i] * psi[i] * std::norm(grad[i]);
    t2[i] = -0.5 * w[i] * lap_psi[i] * f2;
    t3[i] = -lam * lam * w[i] * p1[i] * p1[i] * psi[i] * f2;
    t4[i] = -lam * w[i] * gg[i] * f2;
  }
  IbpReport rep;
  const double T1 = pairwise_sum(std::span<const double>(t1));
  const double T2 = pairwise_sum(std::span<const double>(t2));
  const double T3 = pairwise_sum(std::span<const double>(t3));
  const double T4 = pairwise_sum(std::span<const double>(t4));
  rep.lhs = lhs;
  rep.rhs = T1 + T2 + T3 + T4;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.scale = std::abs(lhs) + std::abs(T1) + std::abs(T2) + std::abs(T3) + std::abs(T4);
  rep.normalized = rep.residual / std::max(1.0, rep.scale);
  return rep;
}

double symmetry_defect(const OperatorBundle& b, std::span<const cplx> f,
                       std::span<const cplx> g) {
  const auto w = b.quad_weights();
  auto sf = b.S(f);
  auto sg = b.S(g);
  const cplx d = inner_product(w, sf, g) - inner_product(w, f, sg);
  return std::abs(d);
}

double skew_defect(const OperatorBundle& b, std::span<const cplx> f,
                   std::span<const cplx> g) {
  const auto w = b.quad_weights();
  auto af = b.A(f);
  auto ag = b.A(g);
  const cplx d = inner_product(w, af, g) + inner_product(w, f, ag);
  return std::abs(d);
}

}  // namespace carleman
