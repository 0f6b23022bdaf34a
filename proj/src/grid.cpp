#include "pparab/grid.hpp"

#include <stdexcept>

namespace pparab {

Grid2D Grid2D::rectangle(int nx, int ny, double x0, double x1, double y0, double y1) {
  Grid2D g;
  g.nx = nx;
  g.ny = ny;
  g.x0 = x0;
  g.y0 = y0;
  g.hx = (x1 - x0) / (nx - 1);
  g.hy = (y1 - y0) / (ny - 1);
  g.validate();
  return g;
}

void Grid2D::validate() const {
  if (nx < 3 || ny < 3) throw std::invalid_argument("grid needs at least 3 nodes per axis");
  if (!(hx > 0.0) || !(hy > 0.0)) throw std::invalid_argument("grid spacings must be positive");
  if (nt != 0 && !(dt > 0.0)) throw std::invalid_argument("time-resolved grid needs dt > 0");
}

bool ParabolicCylinder::fits(const Grid2D& g, double t_end_avail, int margin_nodes) const {
  const double mx = margin_nodes * g.hx;
  const double my = margin_nodes * g.hy;
  const double rr = 2.0 * r;  // the doubled cylinder must fit as well
  if (cx - rr < g.x0 + mx || cx + rr > g.x1() - mx) return false;
  if (cy - rr < g.y0 + my || cy + rr > g.y1() - my) return false;
  if (t0 < 0.0) return false;
  return t0 + rr * rr <= t_end_avail;
}

}  // namespace pparab
