#pragma once

#include <array>
#include <string>
#include <vector>

#include "pparab/diff_ops.hpp"
#include "pparab/grid.hpp"
#include "pparab/params.hpp"

namespace pparab {

/// Pointwise residual of the plane identity
///   |D^2u|^2 = 2|D_T|Du||^2 + (Lap_T u)^2 + (InfLap^N u)^2,
/// evaluated with the regularized derived quantities. Nodes with undefined
/// normalized quantities carry zero.
ScalarField fundamental_equality_residual(const DerivedFields& d);

/// Residual of divergence structure 1 at exponent alpha:
///   (q+eps)^(a/2) (|D^2u|^2 - (Lap u)^2 + a(|D^2uDu|^2 - Lap u InfLap u)/(q+eps))
///   - div_h((q+eps)^(a/2) (D^2uDu - Lap u Du)),       q = |Du|^2.
/// `flux_out`, when non-null, receives the flux field before divergence.
ScalarField gd1_residual(const DerivedFields& d, double alpha, const Grid2D& g, double eps,
                         VectorField2* flux_out = nullptr);

/// Residual of divergence structure 2 at exponent beta over three uniformly
/// spaced time slices (centered differences at the middle slice):
///   u_t div_h((q+eps)^(b/2) Du)
///   - [div_h(u_t (q+eps)^(b/2) Du) - time term],
/// where the time term is ((q+eps)^((b+2)/2))_t / (b+2), or
/// (ln(q+eps))_t / 2 in the b = -2 branch.
ScalarField gd2_residual(const std::array<const ScalarField*, 3>& u_slices, double beta,
                         const Grid2D& g, double dt_slice, double eps,
                         VectorField2* flux_out = nullptr);

/// Max and L2 norms over interior nodes (boundary collar of `collar` layers
/// excluded, nodes with theta < kThetaFloor excluded when a mask is given).
struct ResidualNorms {
  double max_abs = 0.0;
  double l2 = 0.0;
  long nodes = 0;
};

ResidualNorms residual_norms(const ScalarField& r, const Grid2D& g, int collar,
                             const DerivedFields* mask = nullptr);

/// Both sides of the key equality for the weighted sum S, evaluated on a
/// numerical solution of the regularized equation.
struct StructureSumReport {
  ScalarField coefficient_side;  ///< c1..c4 form with u_t replaced via the equation
  ScalarField divergence_side;   ///< w1 GD1 + w2 GD2 + eps w3 GD1 + eps w4 GD2
  ResidualNorms residual;        ///< norms of the difference, interior only
  std::vector<std::string> flux_names;
  std::vector<VectorField2> flux_fields;  ///< the GD fluxes before divergence
  double equation_residual_max = 0.0;     ///< max |u_t - rhs| at the middle slice
  double solution_tolerance = 0.0;
  bool is_solution = false;  ///< equation residual within tolerance
};

/// Evaluates the key equality on three consecutive solution slices.
/// `solution_tolerance` <= 0 selects the default 10 (h^2 + dt_slice) scaled
/// by the rhs magnitude.
StructureSumReport weighted_sum_report(const std::array<const DerivedFields*, 3>& d,
                                       double dt_slice, const WeightRecipe& w,
                                       const ParamSet& params, const Grid2D& g,
                                       double solution_tolerance = 0.0);

/// JSON row for a residual-norm report: {identity, alpha/beta, grid,
/// max_residual, l2_residual, order_estimate}.
std::string residual_report_json(const std::string& identity, double exponent,
                                 const Grid2D& g, const ResidualNorms& norms,
                                 double order_estimate);

}  // namespace pparab
