#include "pparab/solver.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pparab/diff_ops.hpp"

namespace pparab {

int SpaceTimeField::slice_index_at(double t) const {
  if (times.empty()) throw std::runtime_error("trajectory holds no slices");
  if (t < times.front() - 0.5 * grid.dt || t > times.back() + 0.5 * grid.dt)
    throw std::out_of_range("requested time outside the stored trajectory");
  const double rel = (t - times.front()) / grid.dt;
  const int k = static_cast<int>(std::lround(rel));
  return std::min(std::max(k, 0), static_cast<int>(times.size()) - 1);
}

ScalarField rhs_field(const ScalarField& u, const ParamSet& params, const Grid2D& g) {
  if (!(params.epsilon > 0.0)) throw std::invalid_argument("rhs: epsilon > 0 required");
  const VectorField2 du = gradient(u, g);
  const SymMatrixField2 h = hessian(u, g, du);
  ScalarField out(g.nx, g.ny);
  const double p = params.p, gamma = params.gamma, eps = params.epsilon;
  for (size_t n = 0; n < out.v.size(); ++n) {
    const double gx = du.x.v[n], gy = du.y.v[n];
    const double lap = h.xx.v[n] + h.yy.v[n];
    const double q = gx * gx + gy * gy;
    const double denom = q + eps;
    double val = lap;
    if (p != 2.0) {
      const double inf = gx * gx * h.xx.v[n] + 2.0 * gx * gy * h.xy.v[n] + gy * gy * h.yy.v[n];
      val += (p - 2.0) * inf / denom;
    }
    if (gamma != 0.0) val *= std::pow(denom, 0.5 * gamma);
    out.v[n] = val;
  }
  return out;
}

double stable_dt(const ScalarField& u, const ParamSet& params, const Grid2D& g, double safety) {
  if (!(params.epsilon > 0.0)) throw std::invalid_argument("stable_dt: epsilon > 0 required");
  const double inv_h2 = 1.0 / (g.hx * g.hx) + 1.0 / (g.hy * g.hy);
  const double pfac = std::max(1.0, params.p - 1.0);
  double coef_max = 1.0;
  if (params.gamma != 0.0) {
    const VectorField2 du = gradient(u, g);
    coef_max = 0.0;
    for (size_t n = 0; n < du.x.v.size(); ++n) {
      const double q = du.x.v[n] * du.x.v[n] + du.y.v[n] * du.y.v[n];
      coef_max = std::max(coef_max, std::pow(q + params.epsilon, 0.5 * params.gamma));
    }
  }
  return safety / (2.0 * coef_max * pfac * inv_h2);
}

SpaceTimeField solve(const Problem& prob, double safety, double store_dt) {
  validate_params(prob.params, Purpose::solver);
  prob.grid.validate();
  if (!(safety > 0.0 && safety < 1.0))
    throw std::invalid_argument("solve: safety must lie in (0,1)");
  if (!(store_dt > 0.0)) throw std::invalid_argument("solve: store_dt must be positive");
  if (!prob.initial.all_finite()) throw std::invalid_argument("solve: initial data not finite");
  if (!prob.boundary) throw std::invalid_argument("solve: boundary trace missing");

  const Grid2D& g = prob.grid;
  const int nx = g.nx, ny = g.ny;

  // initial data must match the boundary trace at t = 0 on the collar
  double mismatch = 0.0, scale = 1.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (is_interior(i, j, nx, ny, 1)) continue;
      const double b = prob.boundary(g.x(i), g.y(j), 0.0);
      mismatch = std::max(mismatch, std::fabs(b - prob.initial.at(i, j)));
      scale = std::max(scale, std::fabs(b));
    }
  if (mismatch > 1e-10 * scale)
    throw std::invalid_argument("solve: initial data does not match the boundary trace at t=0");

  SpaceTimeField out;
  out.grid = g;
  const int n_store = std::max(1, static_cast<int>(std::llround(prob.t_end / store_dt)));
  out.grid.nt = n_store + 1;
  out.grid.dt = store_dt;

  ScalarField u = prob.initial;
  double bmin = u.v[0], bmax = u.v[0];
  for (double v : u.v) {
    bmin = std::min(bmin, v);
    bmax = std::max(bmax, v);
  }
  out.slices.push_back(u);
  out.times.push_back(0.0);

  const double slack = 1e-12 * std::max(1.0, bmax - bmin);
  double t = 0.0;
  long step = 0;
  ScalarField rhs;
  for (int k = 1; k <= n_store; ++k) {
    const double t_target = k * store_dt;
    while (t < t_target - 1e-14 * t_target) {
      const double dt = std::min(stable_dt(u, prob.params, g, safety), t_target - t);
      rhs = rhs_field(u, prob.params, g);
      for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i) u.at(i, j) += dt * rhs.at(i, j);
      t += dt;
      ++step;
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          if (is_interior(i, j, nx, ny, 1)) continue;
          const double b = prob.boundary(g.x(i), g.y(j), t);
          u.at(i, j) = b;
          bmin = std::min(bmin, b);
          bmax = std::max(bmax, b);
        }
      for (double v : u.v) {
        if (!std::isfinite(v)) {
          std::ostringstream os;
          os << "solve: non-finite value (blow-up) at step " << step << ", t = " << t;
          throw std::runtime_error(os.str());
        }
        const double excess = std::max(v - (bmax + slack), (bmin - slack) - v);
        if (excess > 0.0) {
          out.max_principle_ok = false;
          out.max_principle_excess = std::max(out.max_principle_excess, excess);
        }
      }
    }
    t = t_target;  // landed exactly by construction; keep stored times uniform
    out.slices.push_back(u);
    out.times.push_back(t);
  }
  out.data_min = bmin;
  out.data_max = bmax;
  out.steps_taken = step;
  return out;
}

Grid2D Preset::default_domain(int nx, int ny) const {
  if (name == "sine_mode") {
    const double pi = 3.14159265358979323846;
    return Grid2D::rectangle(nx, ny, 0.0, pi, 0.0, pi);
  }
  return Grid2D::rectangle(nx, ny, -1.0, 1.0, -1.0, 1.0);
}

Preset make_preset(const std::string& name, std::uint64_t seed) {
  Preset p;
  p.name = name;
  if (name == "linear") {
    p.value = [](double x, double, double) { return x; };
  } else if (name == "quadratic_bowl") {
    p.value = [](double x, double y, double) { return 0.5 * (x * x + y * y); };
  } else if (name == "saddle") {
    p.value = [](double x, double y, double) { return 0.5 * (x * x - y * y); };
  } else if (name == "sine_mode") {
    p.value = [](double x, double y, double) { return std::sin(x) * std::sin(y); };
  } else if (name == "random_smooth") {
    // low-frequency Fourier bump plus a tilt that keeps the gradient alive
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    struct Mode {
      double a, kx, ky, phix, phiy;
    };
    std::vector<Mode> modes;
    const double pi = 3.14159265358979323846;
    for (int kx = 1; kx <= 3; ++kx)
      for (int ky = 1; ky <= 3; ++ky) {
        Mode m;
        m.a = amp(rng) / (kx * kx + ky * ky);
        m.kx = kx;
        m.ky = ky;
        m.phix = amp(rng) * pi;
        m.phiy = amp(rng) * pi;
        modes.push_back(m);
      }
    p.value = [modes](double x, double y, double) {
      double v = 0.4 * x;
      for (const auto& m : modes)
        v += 0.3 * m.a * std::sin(m.kx * x + m.phix) * std::sin(m.ky * y + m.phiy);
      return v;
    };
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return p;
}

Problem make_problem(const Preset& preset, const Grid2D& grid, const ParamSet& params,
                     double t_end) {
  Problem prob;
  prob.grid = grid;
  prob.params = params;
  prob.initial = ScalarField::sample(grid, [&](double x, double y) { return preset.value(x, y, 0.0); });
  if (preset.name == "sine_mode") {
    prob.boundary = [](double, double, double) { return 0.0; };
  } else {
    // freeze the trace at its t = 0 values
    auto value = preset.value;
    prob.boundary = [value](double x, double y, double) { return value(x, y, 0.0); };
  }
  prob.t_end = t_end;
  return prob;
}

}  // namespace pparab
