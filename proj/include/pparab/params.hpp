#pragma once

#include <string>

namespace pparab {

/// Exponent set governing every computation: the equation
/// u_t = (|Du|^2 + eps)^(gamma/2) (Lap u + (p-2) * InfLap u / (|Du|^2 + eps))
/// plus the auxiliary exponent s of the nonlinear gradient quantity
/// (|Du|^2 + eps)^((p-2+s)/4) Du.
///
/// Valid ranges: p > 1, gamma > -1, epsilon >= 0.  The solver and every
/// regularized quotient require epsilon > 0; epsilon = 0 is allowed only in
/// pure-limit algebra (the kappa-sweep certifier, which quantifies over all
/// regularization states at once).
struct ParamSet {
  double p = 2.0;
  double gamma = 0.0;
  double s = 0.0;
  double epsilon = 0.0;
};

/// What a ParamSet is about to be used for; each purpose has its own
/// admissible range.
enum class Purpose {
  w22,        ///< fixed-recipe Hessian estimate: 3 <= p <= 40, -1 < gamma < 1
  general_s,  ///< nonlinear-gradient estimate: one of the two s-branches
  solver,     ///< time stepping: p > 1, gamma > -1, epsilon > 0
};

/// Returns `params` unchanged if the range for `purpose` holds, otherwise
/// throws std::invalid_argument naming the violated inequality.
ParamSet validate_params(const ParamSet& params, Purpose purpose);

/// Weights of the four-term divergence-structure sum
/// S = w1 GD1(p-2+s) + w2 GD2(p-2+s) + eps w3 GD1(p-4+s) + eps w4 GD2(p-4+s).
/// `a` and `b` are the shorthands 1-gamma and 2*sqrt(2) used by the fixed
/// W22 recipe; `eta` records the slack used when a general-s w1 was selected.
struct WeightRecipe {
  double w1 = 0.0;
  double w2 = 0.0;
  double w3 = 0.0;
  double w4 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double eta = 0.0;
};

/// The fixed weight set of the W22 estimate:
/// w1 = p - gamma, w2 = 2, w3 = 1 - p, w4 = 2(sqrt(2) - 1).
WeightRecipe w22_weights(const ParamSet& params);

/// One point of the algebraic sweep over the regularization fraction
/// kappa = eps/(|Du|^2+eps), theta = 1 - kappa, together with the derived
/// shorthands P_theta = (p-2)theta + 1, S_theta = 1 + s theta,
/// K_theta = 1 + gamma theta.
struct SweepPoint {
  double kappa = 0.0;
  double theta = 1.0;
  double P_theta = 1.0;
  double S_theta = 1.0;
  double K_theta = 1.0;
};

/// Builds the sweep point at a given kappa in [0,1].
SweepPoint make_sweep_point(double kappa, const ParamSet& params);

std::string params_to_json(const ParamSet& params);
ParamSet params_from_json(const std::string& text);

}  // namespace pparab
