#include "pparab/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pparab/certifier.hpp"
#include "pparab/diff_ops.hpp"
#include "json.hpp"

namespace pparab {

namespace {

struct Window {
  int k_first = 0;
  int k_last = -1;  // inclusive
  bool empty() const { return k_last < k_first; }
};

Window slices_in(const SpaceTimeField& traj, double t0, double duration) {
  Window w;
  const int n = static_cast<int>(traj.times.size());
  w.k_first = n;
  w.k_last = -1;
  for (int k = 0; k < n; ++k) {
    const double t = traj.times[k];
    if (t >= t0 - 1e-12 && t < t0 + duration - 1e-12) {
      w.k_first = std::min(w.k_first, k);
      w.k_last = std::max(w.k_last, k);
    }
  }
  return w;
}

std::vector<std::pair<int, int>> nodes_in_ball(const Grid2D& g, const ParabolicCylinder& cyl) {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (cyl.contains_xy(g.x(i), g.y(j))) out.emplace_back(i, j);
  return out;
}

ScalarField centered_ut(const SpaceTimeField& traj, int k) {
  const int n = static_cast<int>(traj.slices.size());
  const double dt = traj.grid.dt;
  ScalarField out(traj.grid.nx, traj.grid.ny);
  const ScalarField* lo = &traj.slices[std::max(0, k - 1)];
  const ScalarField* hi = &traj.slices[std::min(n - 1, k + 1)];
  const double span = (std::min(n - 1, k + 1) - std::max(0, k - 1)) * dt;
  for (size_t m = 0; m < out.v.size(); ++m) out.v[m] = (hi->v[m] - lo->v[m]) / span;
  return out;
}

inline double frob_sq(const SymMatrixField2& h, size_t n) {
  return h.xx.v[n] * h.xx.v[n] + 2.0 * h.xy.v[n] * h.xy.v[n] + h.yy.v[n] * h.yy.v[n];
}

}  // namespace

double cylinder_integral(const SpaceTimeField& traj, const ParabolicCylinder& cyl,
                         const Integrand& integrand, const ParamSet& params) {
  const Grid2D& g = traj.grid;
  const Window w = slices_in(traj, cyl.t0, cyl.r * cyl.r);
  const auto ball = nodes_in_ball(g, cyl);
  if (w.empty() || ball.empty())
    throw std::invalid_argument("cylinder_integral: empty cylinder (no slices or nodes)");

  const double eps = params.epsilon;
  const double weight = g.hx * g.hy * g.dt;
  double total = 0.0;
  for (int k = w.k_first; k <= w.k_last; ++k) {
    const ScalarField& u = traj.slices[k];
    ScalarField cell(g.nx, g.ny);
    switch (integrand.quantity) {
      case Quantity::one:
        for (auto& v : cell.v) v = 1.0;
        break;
      case Quantity::grad_norm_sq: {
        const VectorField2 du = gradient(u, g);
        for (size_t n = 0; n < cell.v.size(); ++n)
          cell.v[n] = du.x.v[n] * du.x.v[n] + du.y.v[n] * du.y.v[n];
        break;
      }
      case Quantity::hess_sq: {
        const SymMatrixField2 h = hessian(u, g);
        for (size_t n = 0; n < cell.v.size(); ++n) cell.v[n] = frob_sq(h, n);
        break;
      }
      case Quantity::reg_pow:
      case Quantity::reg_pow_times_grad_sq:
      case Quantity::abs_log_reg: {
        const VectorField2 du = gradient(u, g);
        for (size_t n = 0; n < cell.v.size(); ++n) {
          const double q = du.x.v[n] * du.x.v[n] + du.y.v[n] * du.y.v[n];
          if (integrand.quantity == Quantity::abs_log_reg)
            cell.v[n] = std::fabs(std::log(q + eps));
          else if (integrand.quantity == Quantity::reg_pow)
            cell.v[n] = std::pow(q + eps, integrand.expo);
          else
            cell.v[n] = std::pow(q + eps, integrand.expo) * q;
        }
        break;
      }
      case Quantity::nonlinear_grad_sq: {
        if (integrand.expo == 0.0) {
          const SymMatrixField2 h = hessian(u, g);
          for (size_t n = 0; n < cell.v.size(); ++n) cell.v[n] = frob_sq(h, n);
        } else {
          const VectorField2 du = gradient(u, g);
          VectorField2 vfield(g.nx, g.ny);
          for (size_t n = 0; n < cell.v.size(); ++n) {
            const double q = du.x.v[n] * du.x.v[n] + du.y.v[n] * du.y.v[n];
            const double pref = std::pow(q + eps, integrand.expo);
            vfield.x.v[n] = pref * du.x.v[n];
            vfield.y.v[n] = pref * du.y.v[n];
          }
          const VectorField2 dvx = gradient(vfield.x, g);
          const VectorField2 dvy = gradient(vfield.y, g);
          for (size_t n = 0; n < cell.v.size(); ++n)
            cell.v[n] = dvx.x.v[n] * dvx.x.v[n] + dvx.y.v[n] * dvx.y.v[n] +
                        dvy.x.v[n] * dvy.x.v[n] + dvy.y.v[n] * dvy.y.v[n];
        }
        break;
      }
      case Quantity::ut_sq: {
        const ScalarField ut = centered_ut(traj, k);
        for (size_t n = 0; n < cell.v.size(); ++n) cell.v[n] = ut.v[n] * ut.v[n];
        break;
      }
    }
    double slice_sum = 0.0;
    for (const auto& [i, j] : ball) slice_sum += cell.at(i, j);
    total += slice_sum * weight;
  }
  return total;
}

namespace {

EstimateReport estimate_report_impl(const SpaceTimeField& traj, const ParabolicCylinder& cyl,
                                    const ParamSet& params, double s, bool override_range) {
  const Grid2D& g = traj.grid;
  if (!cyl.fits(g, traj.times.back() + 0.5 * g.dt))
    throw std::invalid_argument("estimate: Q_2r exits the solved space-time domain");
  if (s == params.gamma - params.p)
    throw std::invalid_argument("estimate: the excluded case s = gamma - p (the nonlinear "
                                "exponent p+s-gamma degenerates)");

  const double eps = params.epsilon;
  const double p = params.p, gam = params.gamma;
  const double m = 0.25 * (p - 2.0 + s);
  const ParabolicCylinder big = cyl.doubled();
  const Window w_big = slices_in(traj, big.t0, big.r * big.r);
  const Window w_small = slices_in(traj, cyl.t0, cyl.r * cyl.r);
  const auto ball_small = nodes_in_ball(g, cyl);
  const auto ball_big = nodes_in_ball(g, big);
  if (w_big.empty() || w_small.empty() || ball_small.empty() || ball_big.empty())
    throw std::invalid_argument("estimate: empty cylinder");

  const double weight = g.hx * g.hy * g.dt;
  double lhs = 0.0, rhs1 = 0.0, rhs2 = 0.0, rlog = 0.0, rlog_base = 0.0;

  const int k_base = traj.slice_index_at(cyl.t0);
  for (int k = w_big.k_first; k <= w_big.k_last; ++k) {
    const ScalarField& u = traj.slices[k];
    const VectorField2 du = gradient(u, g);

    if (k >= w_small.k_first && k <= w_small.k_last) {
      // lhs integrand |D((q+eps)^m Du)|^2; at m = 0 the mapping is Du itself
      // and its derivative is the Hessian
      ScalarField cell(g.nx, g.ny);
      if (m == 0.0) {
        const SymMatrixField2 h = hessian(u, g);
        for (size_t n = 0; n < cell.v.size(); ++n) cell.v[n] = frob_sq(h, n);
      } else {
        VectorField2 vfield(g.nx, g.ny);
        for (size_t n = 0; n < cell.v.size(); ++n) {
          const double q = du.x.v[n] * du.x.v[n] + du.y.v[n] * du.y.v[n];
          const double pref = std::pow(q + eps, m);
          vfield.x.v[n] = pref * du.x.v[n];
          vfield.y.v[n] = pref * du.y.v[n];
        }
        const VectorField2 dvx = gradient(vfield.x, g);
        const VectorField2 dvy = gradient(vfield.y, g);
        for (size_t n = 0; n < cell.v.size(); ++n)
          cell.v[n] = dvx.x.v[n] * dvx.x.v[n] + dvx.y.v[n] * dvx.y.v[n] +
                      dvy.x.v[n] * dvy.x.v[n] + dvy.y.v[n] * dvy.y.v[n];
      }
      double sum = 0.0;
      for (const auto& [i, j] : ball_small) sum += cell.at(i, j);
      lhs += sum * weight;
    }

    double s1 = 0.0, s2 = 0.0, sl = 0.0;
    for (const auto& [i, j] : ball_big) {
      const double gx = du.x.at(i, j), gy = du.y.at(i, j);
      const double q = gx * gx + gy * gy;
      s1 += std::pow(q + eps, 0.5 * (p - 2.0 + s)) * q;
      s2 += std::pow(q + eps, 0.5 * (p + s - gam));
      sl += std::fabs(std::log(q + eps));
    }
    rhs1 += s1 * weight;
    rhs2 += s2 * weight;
    rlog += sl * weight;
    if (k == k_base) rlog_base = sl * g.hx * g.hy;
  }

  EstimateReport rep;
  rep.params = params;
  rep.s_used = s;
  rep.cylinder = cyl;
  rep.nx = g.nx;
  rep.ny = g.ny;
  rep.dt_slice = g.dt;
  rep.override_range = override_range;
  const double r2 = cyl.r * cyl.r;
  rep.lhs = lhs;
  rep.rhs_main = (rhs1 + rhs2) / r2;
  rep.rhs_log = eps * (rlog / r2 + rlog_base);
  const double rhs = rep.rhs_main + rep.rhs_log;
  rep.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
  rep.log_share = rhs > 0.0 ? rep.rhs_log / rhs : 0.0;
  return rep;
}

}  // namespace

EstimateReport hessian_estimate_report(const SpaceTimeField& traj, const ParabolicCylinder& cyl,
                                       const ParamSet& params, bool override_range) {
  ParamSet ps = params;
  ps.s = 2.0 - params.p;
  if (!override_range) validate_params(ps, Purpose::w22);
  return estimate_report_impl(traj, cyl, ps, ps.s, override_range);
}

EstimateReport nonlinear_gradient_estimate_report(const SpaceTimeField& traj,
                                                  const ParabolicCylinder& cyl,
                                                  const ParamSet& params, double s,
                                                  bool override_range) {
  if (!override_range && admissible_s(params.p, params.gamma, s) == SBranch::inadmissible)
    throw std::invalid_argument("estimate: s outside both admissible branches (use override)");
  return estimate_report_impl(traj, cyl, params, s, override_range);
}

std::string EstimateReport::to_json() const {
  nlohmann::json j;
  j["params"] = {{"p", params.p}, {"gamma", params.gamma}, {"s", s_used},
                 {"epsilon", params.epsilon}};
  j["cylinder"] = {{"cx", cylinder.cx}, {"cy", cylinder.cy}, {"t0", cylinder.t0},
                   {"r", cylinder.r}};
  j["grid"] = {{"nx", nx}, {"ny", ny}, {"dt_slice", dt_slice}};
  j["lhs"] = lhs;
  j["rhs_main"] = rhs_main;
  j["rhs_log"] = rhs_log;
  j["ratio"] = ratio;
  j["log_share"] = log_share;
  j["override_range"] = override_range;
  j["data_note"] = data_note;
  return j.dump();
}

TimeDerivReport time_derivative_check(const SpaceTimeField& traj, const ParamSet& params,
                                      TimeDerivMode mode, const ParabolicCylinder& cyl,
                                      bool override_range) {
  const double p = params.p, gam = params.gamma, eps = params.epsilon;
  if (!override_range) {
    if (mode == TimeDerivMode::range_i) {
      if (!(p >= 3.0 && p <= 40.0 && gam >= 0.0 && gam < 1.0))
        throw std::invalid_argument("time derivative range_i needs 3<=p<=40, 0<=gamma<1");
    } else {
      if (!(p > 1.0 && p < 9.0 * gam + 10.0))
        throw std::invalid_argument("time derivative range_ii needs 1<p<9 gamma+10");
    }
  }
  const Grid2D& g = traj.grid;
  TimeDerivReport rep;
  rep.mode = mode;
  rep.override_range = override_range;

  const double tau_base = 10.0 * (g.hx * g.hx + g.hy * g.hy + g.dt);
  const int n_slices = static_cast<int>(traj.slices.size());
  double sup_q = 0.0;
  for (int k = 1; k + 1 < n_slices; ++k) {
    const ScalarField& u = traj.slices[k];
    const ScalarField ut = centered_ut(traj, k);
    const VectorField2 du = gradient(u, g);
    const SymMatrixField2 h = hessian(u, g);
    // third-difference proxy for |D^3 u|
    const VectorField2 dxx = gradient(h.xx, g);
    const VectorField2 dyy = gradient(h.yy, g);
    for (int j = 1; j < g.ny - 1; ++j)
      for (int i = 1; i < g.nx - 1; ++i) {
        const size_t n = static_cast<size_t>(j) * g.nx + i;
        const double q = du.x.v[n] * du.x.v[n] + du.y.v[n] * du.y.v[n];
        sup_q = std::max(sup_q, q);
        const double proxy = std::fabs(dxx.x.v[n]) + std::fabs(dxx.y.v[n]) +
                             std::fabs(dyy.x.v[n]) + std::fabs(dyy.y.v[n]);
        const double tau = tau_base * proxy;
        const double bound = (p + 2.0) * std::pow(q + eps, 0.5 * gam) * std::sqrt(frob_sq(h, n));
        const double excess = std::fabs(ut.v[n]) - (bound + tau);
        ++rep.nodes_checked;
        if (excess <= 0.0)
          ++rep.nodes_ok;
        else
          rep.worst_excess = std::max(rep.worst_excess, excess);
      }
  }
  rep.fraction_ok =
      rep.nodes_checked > 0 ? static_cast<double>(rep.nodes_ok) / rep.nodes_checked : 1.0;

  rep.int_ut_sq = cylinder_integral(traj, cyl, {Quantity::ut_sq, 0.0}, params);
  if (mode == TimeDerivMode::range_i) {
    const double hess_int = cylinder_integral(traj, cyl, {Quantity::hess_sq, 0.0}, params);
    rep.rhs_value = (p + 2.0) * (p + 2.0) * std::pow(sup_q + eps, gam) * hess_int;
  } else {
    // s = 2 gamma + 2 - p makes the nonlinear exponent (p-2+s)/4 equal gamma/2
    rep.rhs_value =
        cylinder_integral(traj, cyl, {Quantity::nonlinear_grad_sq, 0.5 * gam}, params);
  }
  rep.ratio = rep.rhs_value > 0.0 ? rep.int_ut_sq / rep.rhs_value : 0.0;
  return rep;
}

std::string TimeDerivReport::to_json() const {
  nlohmann::json j;
  j["mode"] = mode == TimeDerivMode::range_i ? "range_i" : "range_ii";
  j["nodes_checked"] = nodes_checked;
  j["nodes_ok"] = nodes_ok;
  j["fraction_ok"] = fraction_ok;
  j["worst_excess"] = worst_excess;
  j["int_ut_sq"] = int_ut_sq;
  j["rhs_value"] = rhs_value;
  j["ratio"] = ratio;
  j["override_range"] = override_range;
  return j.dump();
}

ParabolicCylinder default_cylinder(const SpaceTimeField& traj, int margin_nodes) {
  const Grid2D& g = traj.grid;
  const double lx = g.x1() - g.x0, ly = g.y1() - g.y0;
  const double margin = margin_nodes * std::max(g.hx, g.hy);
  const double r_space = 0.5 * (0.5 * std::min(lx, ly) - margin);
  const double t_total = traj.times.back();
  double r = std::min(r_space, std::sqrt(t_total / 5.0) * 0.999);
  if (!(r > 0.0)) throw std::invalid_argument("default_cylinder: domain too small");
  ParabolicCylinder cyl;
  cyl.cx = 0.5 * (g.x0 + g.x1());
  cyl.cy = 0.5 * (g.y0 + g.y1());
  for (int tries = 0; tries < 64; ++tries) {
    // burn-in: first stored slice at or after r^2
    const int k0 = static_cast<int>(std::ceil(r * r / g.dt - 1e-9));
    if (k0 < static_cast<int>(traj.times.size())) {
      cyl.t0 = traj.times[k0];
      cyl.r = r;
      if (cyl.fits(g, t_total + 0.5 * g.dt, margin_nodes)) return cyl;
    }
    r *= 0.97;
  }
  throw std::invalid_argument("default_cylinder: no admissible cylinder fits the trajectory");
}

}  // namespace pparab
