#include "pparab/diff_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace pparab {

namespace {

// Centered interior, 3-point one-sided at the ends; exact for quadratics.
inline double d1_x(const ScalarField& u, int i, int j, double hx) {
  const int nx = u.nx;
  if (i == 0) return (-3.0 * u.at(0, j) + 4.0 * u.at(1, j) - u.at(2, j)) / (2.0 * hx);
  if (i == nx - 1)
    return (3.0 * u.at(nx - 1, j) - 4.0 * u.at(nx - 2, j) + u.at(nx - 3, j)) / (2.0 * hx);
  return (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * hx);
}

inline double d1_y(const ScalarField& u, int i, int j, double hy) {
  const int ny = u.ny;
  if (j == 0) return (-3.0 * u.at(i, 0) + 4.0 * u.at(i, 1) - u.at(i, 2)) / (2.0 * hy);
  if (j == ny - 1)
    return (3.0 * u.at(i, ny - 1) - 4.0 * u.at(i, ny - 2) + u.at(i, ny - 3)) / (2.0 * hy);
  return (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * hy);
}

// 3-point second derivative, stencil shifted one node inward at the ends.
inline double d2_x(const ScalarField& u, int i, int j, double hx) {
  const int ic = (i == 0) ? 1 : (i == u.nx - 1 ? u.nx - 2 : i);
  return (u.at(ic + 1, j) - 2.0 * u.at(ic, j) + u.at(ic - 1, j)) / (hx * hx);
}

inline double d2_y(const ScalarField& u, int i, int j, double hy) {
  const int jc = (j == 0) ? 1 : (j == u.ny - 1 ? u.ny - 2 : j);
  return (u.at(i, jc + 1) - 2.0 * u.at(i, jc) + u.at(i, jc - 1)) / (hy * hy);
}

}  // namespace

VectorField2 gradient(const ScalarField& u, const Grid2D& g) {
  g.validate();
  if (!u.all_finite()) throw std::invalid_argument("gradient: field has non-finite values");
  VectorField2 out(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      out.x.at(i, j) = d1_x(u, i, j, g.hx);
      out.y.at(i, j) = d1_y(u, i, j, g.hy);
    }
  return out;
}

SymMatrixField2 hessian(const ScalarField& u, const Grid2D& g) {
  return hessian(u, g, gradient(u, g));
}

SymMatrixField2 hessian(const ScalarField& u, const Grid2D& g, const VectorField2& grad) {
  g.validate();
  if (!u.all_finite()) throw std::invalid_argument("hessian: field has non-finite values");
  SymMatrixField2 out(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      out.xx.at(i, j) = d2_x(u, i, j, g.hx);
      out.yy.at(i, j) = d2_y(u, i, j, g.hy);
      // interior: the centered 4-point cross stencil; next to the boundary
      // this falls back to one-sided derivatives of the gradient components
      out.xy.at(i, j) = 0.5 * (d1_x(grad.y, i, j, g.hx) + d1_y(grad.x, i, j, g.hy));
    }
  return out;
}

ScalarField divergence(const VectorField2& f, const Grid2D& g) {
  g.validate();
  ScalarField out(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out.at(i, j) = d1_x(f.x, i, j, g.hx) + d1_y(f.y, i, j, g.hy);
  return out;
}

DerivedFields derive_all(const ScalarField& u, const Grid2D& g, const ParamSet& params) {
  if (!(params.epsilon > 0.0)) throw std::invalid_argument("derive_all: epsilon > 0 required");
  DerivedFields d;
  d.u = u;
  d.grad = gradient(u, g);
  d.hess = hessian(u, g);
  const int nx = g.nx, ny = g.ny;
  d.lap = ScalarField(nx, ny);
  d.inf_lap = ScalarField(nx, ny);
  d.grad_norm = ScalarField(nx, ny);
  d.norm_inf_lap_reg = ScalarField(nx, ny);
  d.grad_of_norm_sq_reg = ScalarField(nx, ny);
  d.norm_inf_lap = ScalarField(nx, ny);
  d.dT_norm_sq = ScalarField(nx, ny);
  d.lap_T = ScalarField(nx, ny);
  d.theta = ScalarField(nx, ny);
  d.kappa = ScalarField(nx, ny);
  d.normalized_defined.assign(static_cast<size_t>(nx) * ny, 0);

  const double eps = params.epsilon;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double gx = d.grad.x.at(i, j);
      const double gy = d.grad.y.at(i, j);
      const double hxx = d.hess.xx.at(i, j);
      const double hxy = d.hess.xy.at(i, j);
      const double hyy = d.hess.yy.at(i, j);
      const double q = gx * gx + gy * gy;
      const double denom = q + eps;
      const double wx = hxx * gx + hxy * gy;  // D^2u Du
      const double wy = hxy * gx + hyy * gy;
      const double inf = gx * wx + gy * wy;   // <Du, D^2u Du>
      const double theta = q / denom;

      d.lap.at(i, j) = hxx + hyy;
      d.inf_lap.at(i, j) = inf;
      d.grad_norm.at(i, j) = std::sqrt(q);
      d.norm_inf_lap_reg.at(i, j) = inf / denom;
      d.grad_of_norm_sq_reg.at(i, j) = (wx * wx + wy * wy) / denom;
      d.theta.at(i, j) = theta;
      d.kappa.at(i, j) = eps / denom;

      if (theta > kThetaFloor) {
        d.normalized_defined[static_cast<size_t>(j) * nx + i] = 1;
        const double inf_n = d.norm_inf_lap_reg.at(i, j) / theta;
        d.norm_inf_lap.at(i, j) = inf_n;
        // |D_T|Du||^2 via the 2-D Lagrange identity
        // |w|^2 |g|^2 - <w,g>^2 = (wx gy - wy gx)^2: a perfect square, so
        // the stored value is nonnegative in floating point as well.
        const double cross = ((wx * gy - wy * gx) / denom) / theta;  // = (wx gy - wy gx)/q
        d.dT_norm_sq.at(i, j) = cross * cross;
        d.lap_T.at(i, j) = d.lap.at(i, j) - inf_n;
      } else {
        d.lap_T.at(i, j) = d.lap.at(i, j);
      }
    }
  return d;
}

}  // namespace pparab
