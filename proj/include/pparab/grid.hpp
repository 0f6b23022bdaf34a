#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace pparab {

/// Uniform node-centered rectangle grid. nx, ny count nodes per axis
/// (boundary nodes included); nt and dt describe the stored time axis of a
/// trajectory and stay zero for purely spatial fields.
struct Grid2D {
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  int nt = 0;
  double dt = 0.0;

  double x(int i) const { return x0 + i * hx; }
  double y(int j) const { return y0 + j * hy; }
  double x1() const { return x0 + (nx - 1) * hx; }
  double y1() const { return y0 + (ny - 1) * hy; }

  static Grid2D rectangle(int nx, int ny, double x0, double x1, double y0, double y1);

  /// Throws std::invalid_argument if nx, ny < 3 or a spacing is not positive.
  void validate() const;
};

/// Per-node scalar values, row-major with x fastest.
struct ScalarField {
  int nx = 0;
  int ny = 0;
  std::vector<double> v;

  ScalarField() = default;
  ScalarField(int nx_, int ny_) : nx(nx_), ny(ny_), v(static_cast<size_t>(nx_) * ny_, 0.0) {}

  double& at(int i, int j) { return v[static_cast<size_t>(j) * nx + i]; }
  double at(int i, int j) const { return v[static_cast<size_t>(j) * nx + i]; }

  bool all_finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }

  template <class F>
  static ScalarField sample(const Grid2D& g, F&& f) {
    ScalarField out(g.nx, g.ny);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out.at(i, j) = f(g.x(i), g.y(j));
    return out;
  }
};

struct VectorField2 {
  ScalarField x;
  ScalarField y;

  VectorField2() = default;
  VectorField2(int nx, int ny) : x(nx, ny), y(nx, ny) {}
};

/// Symmetric 2x2 matrix per node; only the three independent entries stored.
struct SymMatrixField2 {
  ScalarField xx;
  ScalarField xy;
  ScalarField yy;

  SymMatrixField2() = default;
  SymMatrixField2(int nx, int ny) : xx(nx, ny), xy(nx, ny), yy(nx, ny) {}
};

/// Space-time cylinder B_r(cx,cy) x [t0, t0 + r^2). The concentric double
/// cylinder shares (cx,cy,t0) and has radius 2r, hence duration 4r^2.
struct ParabolicCylinder {
  double cx = 0.0;
  double cy = 0.0;
  double t0 = 0.0;
  double r = 0.0;

  double t_end() const { return t0 + r * r; }
  bool contains_xy(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    return dx * dx + dy * dy <= r * r;
  }
  ParabolicCylinder doubled() const { return {cx, cy, t0, 2.0 * r}; }

  /// True iff the ball stays `margin_nodes` grid layers away from the
  /// spatial boundary and the time window fits below t_end.
  bool fits(const Grid2D& g, double t_end_avail, int margin_nodes = 2) const;
};

/// True for nodes at least `collar` layers away from the boundary.
inline bool is_interior(int i, int j, int nx, int ny, int collar) {
  return i >= collar && i <= nx - 1 - collar && j >= collar && j <= ny - 1 - collar;
}

}  // namespace pparab
