#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pparab/grid.hpp"
#include "pparab/params.hpp"

namespace pparab {

using SpaceTimeFn = std::function<double(double x, double y, double t)>;

/// Dirichlet problem for the regularized equation on a rectangle.
struct Problem {
  Grid2D grid;
  ParamSet params;        ///< epsilon > 0 required
  ScalarField initial;
  SpaceTimeFn boundary;   ///< Dirichlet trace, sampled on boundary nodes each step
  double t_end = 0.0;
};

/// Solution slices stored at uniform spacing `grid.dt` (the solver clamps
/// its internal step so stored times are exact multiples).
struct SpaceTimeField {
  Grid2D grid;                       ///< nt = number of stored slices, dt = slice spacing
  std::vector<double> times;
  std::vector<ScalarField> slices;
  double data_min = 0.0;             ///< running min of initial + boundary data
  double data_max = 0.0;
  bool max_principle_ok = true;      ///< no interior value ever left [data_min, data_max]
  double max_principle_excess = 0.0;
  long steps_taken = 0;

  const ScalarField& at_time_index(int k) const { return slices[static_cast<size_t>(k)]; }
  int slice_index_at(double t) const;  ///< nearest stored slice; throws if out of range
};

/// Right-hand side (q+eps)^(gamma/2) (Lap u + (p-2) InfLap u / (q+eps)),
/// q = |Du|^2, fully defined also where Du = 0. Requires eps > 0.
ScalarField rhs_field(const ScalarField& u, const ParamSet& params, const Grid2D& g);

/// CFL-style bound: safety * min over nodes of 1 / (2 D (1/hx^2 + 1/hy^2))
/// with D = (q+eps)^(gamma/2) max(1, p-1); for gamma < 0 the worst node
/// value is eps^(gamma/2).
double stable_dt(const ScalarField& u, const ParamSet& params, const Grid2D& g, double safety);

/// Forward Euler with the stable step recomputed every step and the boundary
/// trace imposed every step. Slices are stored every `store_dt`. Throws
/// std::runtime_error naming the step index if values turn non-finite.
SpaceTimeField solve(const Problem& prob, double safety, double store_dt);

/// Named initial/boundary data sets. All presets freeze the boundary trace
/// at its t = 0 values except sine_mode, whose trace is identically zero.
struct Preset {
  std::string name;
  SpaceTimeFn value;  ///< used for both initial (t=0) and boundary data
  Grid2D default_domain(int nx, int ny) const;
};

/// linear, quadratic_bowl, saddle, sine_mode, random_smooth (seeded).
/// Throws std::invalid_argument for unknown names.
Preset make_preset(const std::string& name, std::uint64_t seed = 0);

Problem make_problem(const Preset& preset, const Grid2D& grid, const ParamSet& params,
                     double t_end);

}  // namespace pparab
