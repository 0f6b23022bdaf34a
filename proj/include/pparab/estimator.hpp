#pragma once

#include <string>

#include "pparab/grid.hpp"
#include "pparab/params.hpp"
#include "pparab/solver.hpp"

namespace pparab {

/// Named integrands for cylinder integrals. reg_pow-style quantities take an
/// exponent; q stands for |Du|^2.
enum class Quantity {
  one,                    ///< 1
  grad_norm_sq,           ///< q
  hess_sq,                ///< |D^2 u|^2
  reg_pow,                ///< (q+eps)^expo
  reg_pow_times_grad_sq,  ///< (q+eps)^expo * q
  abs_log_reg,            ///< |ln(q+eps)|
  nonlinear_grad_sq,      ///< |D((q+eps)^expo Du)|^2, the D applied discretely
  ut_sq,                  ///< (centered time difference)^2
};

struct Integrand {
  Quantity quantity = Quantity::one;
  double expo = 0.0;
};

/// Midpoint-rule integral over the cylinder: nodes with centers inside the
/// ball, stored slices with times in [t0, t0 + r^2), weight hx hy dt_slice.
/// Throws std::invalid_argument if the cylinder holds no nodes or slices.
double cylinder_integral(const SpaceTimeField& traj, const ParabolicCylinder& cyl,
                         const Integrand& integrand, const ParamSet& params);

/// One integral estimate over concentric cylinders Q_r and Q_2r:
///   lhs <= C ( rhs_main + rhs_log )  with
///   rhs_main = (1/r^2) (Int_{Q_2r} (q+eps)^((p-2+s)/2) q + Int_{Q_2r} (q+eps)^((p+s-g)/2))
///   rhs_log  = eps ((1/r^2) Int_{Q_2r} |ln(q+eps)| + Int_{B_2r} |ln(q(.,t0)+eps)|).
struct EstimateReport {
  ParamSet params;
  double s_used = 0.0;
  ParabolicCylinder cylinder;
  int nx = 0, ny = 0;
  double dt_slice = 0.0;
  double lhs = 0.0;
  double rhs_main = 0.0;
  double rhs_log = 0.0;
  double ratio = 0.0;       ///< lhs / (rhs_main + rhs_log)
  double log_share = 0.0;   ///< rhs_log / (rhs_main + rhs_log)
  bool override_range = false;
  /// Boundary data is manufactured, not the trace of a limit solution; the
  /// reports check boundedness and stability, not the constant.
  std::string data_note = "manufactured boundary data";

  std::string to_json() const;
};

/// Hessian estimate (s = 2-p): lhs = Int_{Q_r} |D^2u|^2. Range 3<=p<=40,
/// -1<gamma<1 enforced unless `override_range`.
EstimateReport hessian_estimate_report(const SpaceTimeField& traj, const ParabolicCylinder& cyl,
                                       const ParamSet& params, bool override_range = false);

/// Nonlinear gradient estimate: lhs = Int_{Q_r} |D((q+eps)^((p-2+s)/4) Du)|^2.
/// When the exponent collapses to zero the mapping is Du itself and the
/// Hessian stencils are used. Requires an admissible s (or override) and
/// s != gamma - p.
EstimateReport nonlinear_gradient_estimate_report(const SpaceTimeField& traj,
                                                  const ParabolicCylinder& cyl,
                                                  const ParamSet& params, double s,
                                                  bool override_range = false);

enum class TimeDerivMode { range_i, range_ii };

/// Pointwise and integral checks of the time-derivative bound.
struct TimeDerivReport {
  TimeDerivMode mode = TimeDerivMode::range_i;
  long nodes_checked = 0;
  long nodes_ok = 0;
  double fraction_ok = 0.0;   ///< |u_t| <= (p+2)(q+eps)^(g/2)|D^2u| + tau_disc
  double worst_excess = 0.0;
  double int_ut_sq = 0.0;     ///< Int_{Q_r} u_t^2
  double rhs_value = 0.0;     ///< range_i: (p+2)^2 (sup q + eps)^g Int |D^2u|^2
                              ///< range_ii: Int |D((q+eps)^(g/2) Du)|^2  (s = 2g+2-p)
  double ratio = 0.0;
  bool override_range = false;

  std::string to_json() const;
};

/// range_i requires 3<=p<=40, 0<=gamma<1; range_ii requires 1<p<9 gamma+10.
/// The pointwise tolerance is 10 (h^2 + dt_slice) scaled by a third-difference
/// proxy for |D^3 u|.
TimeDerivReport time_derivative_check(const SpaceTimeField& traj, const ParamSet& params,
                                      TimeDerivMode mode, const ParabolicCylinder& cyl,
                                      bool override_range = false);

/// Largest cylinder whose doubled copy keeps `margin_nodes` layers from the
/// spatial boundary and fits in [r^2, t_end); centered in the rectangle,
/// t0 = first stored slice at or after the r^2 burn-in.
ParabolicCylinder default_cylinder(const SpaceTimeField& traj, int margin_nodes = 2);

}  // namespace pparab
