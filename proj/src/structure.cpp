#include "pparab/structure.hpp"

#include <cmath>
#include <stdexcept>

#include "pparab/certifier.hpp"
#include "pparab/solver.hpp"
#include "json.hpp"

namespace pparab {

namespace {

// D^2u Du per node
VectorField2 hess_times_grad(const VectorField2& grad, const SymMatrixField2& hess) {
  VectorField2 w(grad.x.nx, grad.x.ny);
  for (size_t n = 0; n < grad.x.v.size(); ++n) {
    w.x.v[n] = hess.xx.v[n] * grad.x.v[n] + hess.xy.v[n] * grad.y.v[n];
    w.y.v[n] = hess.xy.v[n] * grad.x.v[n] + hess.yy.v[n] * grad.y.v[n];
  }
  return w;
}

inline double hess_frob_sq(const SymMatrixField2& h, size_t n) {
  return h.xx.v[n] * h.xx.v[n] + 2.0 * h.xy.v[n] * h.xy.v[n] + h.yy.v[n] * h.yy.v[n];
}

// (|Du|^2 + eps)^(alpha/2) (D^2uDu - Lap u Du)
VectorField2 gd1_flux(const VectorField2& grad, const SymMatrixField2& hess, double alpha,
                      double eps) {
  VectorField2 w = hess_times_grad(grad, hess);
  VectorField2 flux(grad.x.nx, grad.x.ny);
  for (size_t n = 0; n < grad.x.v.size(); ++n) {
    const double q = grad.x.v[n] * grad.x.v[n] + grad.y.v[n] * grad.y.v[n];
    const double pref = std::pow(q + eps, 0.5 * alpha);
    const double lap = hess.xx.v[n] + hess.yy.v[n];
    flux.x.v[n] = pref * (w.x.v[n] - lap * grad.x.v[n]);
    flux.y.v[n] = pref * (w.y.v[n] - lap * grad.y.v[n]);
  }
  return flux;
}

}  // namespace

ScalarField fundamental_equality_residual(const DerivedFields& d) {
  const int nx = d.lap.nx, ny = d.lap.ny;
  ScalarField r(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!d.defined(i, j, nx)) continue;
      const size_t n = static_cast<size_t>(j) * nx + i;
      const double h2 = hess_frob_sq(d.hess, n);
      const double lt = d.lap_T.v[n];
      const double in = d.norm_inf_lap.v[n];
      r.v[n] = h2 - 2.0 * d.dT_norm_sq.v[n] - lt * lt - in * in;
    }
  return r;
}

ScalarField gd1_residual(const DerivedFields& d, double alpha, const Grid2D& g, double eps,
                         VectorField2* flux_out) {
  if (!(eps > 0.0)) throw std::invalid_argument("gd1_residual: eps > 0 required");
  VectorField2 flux = gd1_flux(d.grad, d.hess, alpha, eps);
  const ScalarField div = divergence(flux, g);
  VectorField2 w = hess_times_grad(d.grad, d.hess);
  ScalarField r(g.nx, g.ny);
  for (size_t n = 0; n < r.v.size(); ++n) {
    const double gx = d.grad.x.v[n], gy = d.grad.y.v[n];
    const double q = gx * gx + gy * gy;
    const double denom = q + eps;
    const double lap = d.hess.xx.v[n] + d.hess.yy.v[n];
    const double inf = gx * w.x.v[n] + gy * w.y.v[n];
    const double wsq = w.x.v[n] * w.x.v[n] + w.y.v[n] * w.y.v[n];
    const double lhs = std::pow(denom, 0.5 * alpha) *
                       (hess_frob_sq(d.hess, n) - lap * lap + alpha * (wsq / denom - lap * inf / denom));
    r.v[n] = lhs - div.v[n];
  }
  if (flux_out) *flux_out = std::move(flux);
  return r;
}

ScalarField gd2_residual(const std::array<const ScalarField*, 3>& u_slices, double beta,
                         const Grid2D& g, double dt_slice, double eps, VectorField2* flux_out) {
  if (!(eps > 0.0)) throw std::invalid_argument("gd2_residual: eps > 0 required");
  if (!(dt_slice > 0.0)) throw std::invalid_argument("gd2_residual: dt_slice > 0 required");
  const bool log_branch = beta == -2.0;

  const VectorField2 g0 = gradient(*u_slices[0], g);
  const VectorField2 g1 = gradient(*u_slices[1], g);
  const VectorField2 g2 = gradient(*u_slices[2], g);

  const int nx = g.nx, ny = g.ny;
  ScalarField ut(nx, ny);
  for (size_t n = 0; n < ut.v.size(); ++n)
    ut.v[n] = (u_slices[2]->v[n] - u_slices[0]->v[n]) / (2.0 * dt_slice);

  // spatial fields at the middle slice
  VectorField2 base(nx, ny);   // (q+eps)^(beta/2) Du
  VectorField2 moved(nx, ny);  // u_t (q+eps)^(beta/2) Du
  for (size_t n = 0; n < base.x.v.size(); ++n) {
    const double q = g1.x.v[n] * g1.x.v[n] + g1.y.v[n] * g1.y.v[n];
    const double pref = std::pow(q + eps, 0.5 * beta);
    base.x.v[n] = pref * g1.x.v[n];
    base.y.v[n] = pref * g1.y.v[n];
    moved.x.v[n] = ut.v[n] * base.x.v[n];
    moved.y.v[n] = ut.v[n] * base.y.v[n];
  }
  const ScalarField div_base = divergence(base, g);
  const ScalarField div_moved = divergence(moved, g);

  // centered time derivative of (q+eps)^((beta+2)/2), or of ln(q+eps)/2
  const auto time_scalar = [&](const VectorField2& gr, size_t n) {
    const double q = gr.x.v[n] * gr.x.v[n] + gr.y.v[n] * gr.y.v[n];
    return log_branch ? 0.5 * std::log(q + eps) : std::pow(q + eps, 0.5 * (beta + 2.0));
  };
  ScalarField r(nx, ny);
  for (size_t n = 0; n < r.v.size(); ++n) {
    double tt = (time_scalar(g2, n) - time_scalar(g0, n)) / (2.0 * dt_slice);
    if (!log_branch) tt /= (beta + 2.0);
    r.v[n] = ut.v[n] * div_base.v[n] - (div_moved.v[n] - tt);
  }
  if (flux_out) *flux_out = std::move(moved);
  return r;
}

ResidualNorms residual_norms(const ScalarField& r, const Grid2D& g, int collar,
                             const DerivedFields* mask) {
  ResidualNorms out;
  double sum_sq = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!is_interior(i, j, g.nx, g.ny, collar)) continue;
      if (mask && !mask->defined(i, j, g.nx)) continue;
      const double v = std::fabs(r.at(i, j));
      out.max_abs = std::max(out.max_abs, v);
      sum_sq += v * v;
      ++out.nodes;
    }
  out.l2 = std::sqrt(sum_sq * g.hx * g.hy);
  return out;
}

StructureSumReport weighted_sum_report(const std::array<const DerivedFields*, 3>& d,
                                       double dt_slice, const WeightRecipe& w,
                                       const ParamSet& params, const Grid2D& g,
                                       double solution_tolerance) {
  const DerivedFields& mid = *d[1];
  const int nx = g.nx, ny = g.ny;
  const double eps = params.epsilon;
  const double p = params.p, s = params.s, gam = params.gamma;

  StructureSumReport rep;
  rep.coefficient_side = ScalarField(nx, ny);
  rep.divergence_side = ScalarField(nx, ny);

  // coefficient side: the key equality with u_t already replaced via the
  // equation, all quantities in their regularized form
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!mid.defined(i, j, nx)) continue;
      const size_t n = static_cast<size_t>(j) * nx + i;
      const SweepPoint pt = make_sweep_point(mid.kappa.v[n], params);
      const CCoeffs c = c_coefficients(w, params, pt);
      const double q = mid.grad_norm.v[n] * mid.grad_norm.v[n];
      const double pref = std::pow(q + eps, 0.5 * (p - 2.0 + s));
      const double lt = mid.lap_T.v[n];
      const double in = mid.norm_inf_lap.v[n];
      const double c34 = c.c3 + c.c4;
      rep.coefficient_side.v[n] =
          pref * (c.c1 * hess_frob_sq(mid.hess, n) + c.c2 * mid.dT_norm_sq.v[n] +
                  (c.c3 - c.c1) * lt * lt + (c34 * pt.P_theta - c.c1) * in * in +
                  (c.c3 * pt.P_theta + c34 - (2.0 * c.c1 + c.c2)) * lt * in);
    }

  // divergence side: w1 GD1(p-2+s) + w2 GD2(p-2+s) + eps w3 GD1(p-4+s)
  //                + eps w4 GD2(p-4+s)
  ScalarField ut(nx, ny);
  for (size_t n = 0; n < ut.v.size(); ++n)
    ut.v[n] = (d[2]->u.v[n] - d[0]->u.v[n]) / (2.0 * dt_slice);

  const auto gd2_field = [&](double alpha, VectorField2* flux_keep) {
    const double beta = alpha - gam;
    const bool log_branch = alpha == gam - 2.0;
    VectorField2 flux(nx, ny);
    for (size_t n = 0; n < flux.x.v.size(); ++n) {
      const double q = mid.grad_norm.v[n] * mid.grad_norm.v[n];
      const double pref = std::pow(q + eps, 0.5 * beta);
      flux.x.v[n] = ut.v[n] * pref * mid.grad.x.v[n];
      flux.y.v[n] = ut.v[n] * pref * mid.grad.y.v[n];
    }
    ScalarField out = divergence(flux, g);
    const auto time_scalar = [&](const DerivedFields& df, size_t n) {
      const double q = df.grad_norm.v[n] * df.grad_norm.v[n];
      return log_branch ? 0.5 * std::log(q + eps) : std::pow(q + eps, 0.5 * (beta + 2.0));
    };
    for (size_t n = 0; n < out.v.size(); ++n) {
      double tt = (time_scalar(*d[2], n) - time_scalar(*d[0], n)) / (2.0 * dt_slice);
      if (!log_branch) tt /= (beta + 2.0);
      out.v[n] -= tt;
    }
    if (flux_keep) *flux_keep = std::move(flux);
    return out;
  };

  VectorField2 flux_gd1a = gd1_flux(mid.grad, mid.hess, p - 2.0 + s, eps);
  VectorField2 flux_gd1b = gd1_flux(mid.grad, mid.hess, p - 4.0 + s, eps);
  const ScalarField gd1a = divergence(flux_gd1a, g);
  const ScalarField gd1b = divergence(flux_gd1b, g);
  VectorField2 flux_gd2a, flux_gd2b;
  const ScalarField gd2a = gd2_field(p - 2.0 + s, &flux_gd2a);
  const ScalarField gd2b = gd2_field(p - 4.0 + s, &flux_gd2b);

  for (size_t n = 0; n < rep.divergence_side.v.size(); ++n)
    rep.divergence_side.v[n] =
        w.w1 * gd1a.v[n] + w.w2 * gd2a.v[n] + eps * (w.w3 * gd1b.v[n] + w.w4 * gd2b.v[n]);

  rep.flux_names = {"gd1(p-2+s)", "gd2(p-2+s)", "gd1(p-4+s)", "gd2(p-4+s)"};
  rep.flux_fields.push_back(std::move(flux_gd1a));
  rep.flux_fields.push_back(std::move(flux_gd2a));
  rep.flux_fields.push_back(std::move(flux_gd1b));
  rep.flux_fields.push_back(std::move(flux_gd2b));

  ScalarField diff(nx, ny);
  for (size_t n = 0; n < diff.v.size(); ++n)
    diff.v[n] = rep.coefficient_side.v[n] - rep.divergence_side.v[n];
  rep.residual = residual_norms(diff, g, 2, &mid);

  // the key equality presumes a solution: check u_t against the rhs
  const ScalarField rhs = rhs_field(mid.u, params, g);
  double rhs_scale = 1.0, eq_res = 0.0;
  for (int j = 1; j < ny - 1; ++j)
    for (int i = 1; i < nx - 1; ++i) {
      const size_t n = static_cast<size_t>(j) * nx + i;
      eq_res = std::max(eq_res, std::fabs(ut.v[n] - rhs.v[n]));
      rhs_scale = std::max(rhs_scale, std::fabs(rhs.v[n]));
    }
  rep.equation_residual_max = eq_res;
  rep.solution_tolerance = solution_tolerance > 0.0
                               ? solution_tolerance
                               : 10.0 * (g.hx * g.hx + g.hy * g.hy + dt_slice) * rhs_scale;
  rep.is_solution = eq_res <= rep.solution_tolerance;
  return rep;
}

std::string residual_report_json(const std::string& identity, double exponent, const Grid2D& g,
                                 const ResidualNorms& norms, double order_estimate) {
  nlohmann::json j;
  j["identity"] = identity;
  if (identity == "gd2")
    j["beta"] = exponent;
  else if (identity == "gd1")
    j["alpha"] = exponent;
  j["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"hx", g.hx}, {"hy", g.hy}};
  j["max_residual"] = norms.max_abs;
  j["l2_residual"] = norms.l2;
  if (std::isfinite(order_estimate))
    j["order_estimate"] = order_estimate;
  else
    j["order_estimate"] = nullptr;
  return j.dump();
}

}  // namespace pparab
