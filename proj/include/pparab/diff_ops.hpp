#pragma once

#include <cstdint>
#include <vector>

#include "pparab/grid.hpp"
#include "pparab/params.hpp"

namespace pparab {

/// Nodes with theta below this are treated as "gradient numerically zero":
/// the unregularized normalized quantities are flagged undefined there and
/// every downstream formula falls back to the regularized quotients.
inline constexpr double kThetaFloor = 1e-12;

/// Centered first derivatives in the interior, second-order one-sided
/// (3-point) at the boundary. Exact for quadratics everywhere.
VectorField2 gradient(const ScalarField& u, const Grid2D& g);

/// Standard 3-point second derivatives (stencil clamped inward at the
/// boundary) and the centered 4-point cross stencil for the mixed entry
/// (one-sided via the gradient components next to the boundary).
SymMatrixField2 hessian(const ScalarField& u, const Grid2D& g);

/// Same, reusing an already computed gradient for the mixed entry.
SymMatrixField2 hessian(const ScalarField& u, const Grid2D& g, const VectorField2& grad);

/// Discrete divergence built from the same first-derivative stencils as
/// `gradient`, so polynomial exactness transfers between the two sides of
/// the divergence identities.
ScalarField divergence(const VectorField2& f, const Grid2D& g);

/// All pointwise second-order quantities of a discrete field. Quotients are
/// regularized by |Du|^2 + eps throughout; the unregularized normalized
/// quantities (norm_inf_lap, dT_norm_sq, lap_T) are recovered by dividing by
/// theta and are only defined where theta > kThetaFloor (see
/// `normalized_defined`); elsewhere they are stored as zero.
struct DerivedFields {
  ScalarField u;                    ///< the field the quantities derive from
  VectorField2 grad;                ///< Du
  SymMatrixField2 hess;             ///< D^2 u
  ScalarField lap;                  ///< Lap u
  ScalarField inf_lap;              ///< <Du, D^2u Du>
  ScalarField grad_norm;            ///< |Du|
  ScalarField norm_inf_lap_reg;     ///< InfLap u / (|Du|^2 + eps) = theta * InfLap^N u
  ScalarField grad_of_norm_sq_reg;  ///< |D^2u Du|^2 / (|Du|^2 + eps) = theta * |D|Du||^2
  ScalarField norm_inf_lap;         ///< InfLap^N u (normalized; 0 where undefined)
  ScalarField dT_norm_sq;           ///< |D_T|Du||^2 >= 0 (0 where undefined)
  ScalarField lap_T;                ///< Lap_T u = Lap u - InfLap^N u
  ScalarField theta;                ///< |Du|^2 / (|Du|^2 + eps)
  ScalarField kappa;                ///< eps / (|Du|^2 + eps)
  std::vector<std::uint8_t> normalized_defined;  ///< theta > kThetaFloor per node

  bool defined(int i, int j, int nx) const {
    return normalized_defined[static_cast<size_t>(j) * nx + i] != 0;
  }
};

/// Populates every derived quantity. Requires params.epsilon > 0.
DerivedFields derive_all(const ScalarField& u, const Grid2D& g, const ParamSet& params);

}  // namespace pparab
