// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Heavier solver-based criteria run their cases through a worker pool; all
// tolerances are fixed here in code.

#include <array>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "pparab/certifier.hpp"
#include "pparab/diff_ops.hpp"
#include "pparab/estimator.hpp"
#include "pparab/parallel.hpp"
#include "pparab/solver.hpp"
#include "pparab/structure.hpp"

using namespace pparab;

namespace {

int g_failures = 0;
bool g_verbose = true;

void report(int index, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::ostringstream os;
  os << "criterion " << index << " (" << name << "): " << (pass ? "PASS" : "FAIL");
  if (g_verbose && !detail.empty()) os << "  [" << detail << "]";
  os << "  (" << static_cast<long>(seconds * 1000) << " ms)";
  std::cout << os.str() << std::endl;
  if (!pass) ++g_failures;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

ParamSet make_params(double p, double gamma, double s = 0.0, double eps = 0.0) {
  ParamSet ps;
  ps.p = p;
  ps.gamma = gamma;
  ps.s = s;
  ps.epsilon = eps;
  return ps;
}

// ---------------------------------------------------------------- criterion 1
void criterion_region_reproduction() {
  Timer timer;
  ScanRequest req;
  req.p_lo = 3.0;
  req.p_hi = 40.0;
  req.p_step = 0.5;
  req.gamma_lo = -0.95;
  req.gamma_hi = 0.95;
  req.gamma_step = 0.05;
  req.target_margin = 1e-4;
  req.with_figures = true;
  const RegionMap map = scan_region(req);

  long bad = 0;
  double min_margin = 1e300;
  for (const auto& pt : map.points) {
    if (pt.verdict != Verdict::accept || pt.margin < 1e-4) ++bad;
    min_margin = std::min(min_margin, pt.margin);
  }
  const bool slices_ok = map.slice_check && map.slice_check->fgamma_nonpositive &&
                         map.slice_check->f_nonneg;
  std::ostringstream os;
  os << map.points.size() << " points, min margin " << min_margin << ", slice bounds: f_gamma <= "
     << (map.slice_check ? map.slice_check->fgamma_upper_bound : 0.0) << ", h >= "
     << (map.slice_check ? map.slice_check->h_lower_bound : 0.0);
  report(1, "region reproduction", bad == 0 && slices_ok, os.str(), timer.seconds());
}

// ---------------------------------------------------------------- criterion 2
void criterion_negative_det_beyond_p40() {
  Timer timer;
  ScanRequest req;
  req.p_lo = 41.0;
  req.p_hi = 200.0;
  req.p_step = 1.0;
  req.gamma_lo = -0.9;
  req.gamma_hi = 0.9;
  req.gamma_step = 0.45;
  req.target_margin = 1e-6;
  const RegionMap map = scan_region(req);
  long negatives = 0;
  double first_p = 0.0, at_gamma = 0.0, certified = 0.0;
  for (const auto& pt : map.points) {
    if (pt.verdict == Verdict::reject && pt.margin < 0.0) {
      if (negatives == 0 || pt.p < first_p) {
        first_p = pt.p;
        at_gamma = pt.gamma;
        certified = pt.margin;
      }
      ++negatives;
    }
  }
  std::ostringstream os;
  os << negatives << " certified-negative points; first at p = " << first_p
     << ", gamma = " << at_gamma << ", det(M) <= " << certified;
  report(2, "det(M) < 0 for large p", negatives > 0 && certified < 0.0, os.str(),
         timer.seconds());
}

// ---------------------------------------------------------------- criterion 3
void criterion_root_window() {
  Timer timer;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> up(1.2, 40.0), ug(-0.95, 2.0), ut(0.0, 1.0),
      us(0.01, 8.0), inside(0.05, 0.95), outside(0.05, 1.0);
  long failures = 0;
  long done = 0;
  while (done < 10000) {
    const double p = up(rng), gamma = ug(rng);
    const double s = gamma + 1.0 - p + us(rng);
    ParamSet ps = make_params(p, gamma, s);
    const double theta = ut(rng);
    const auto [wlo, whi] = w1_bounds(theta, ps);
    const double gap = whi - wlo;
    if (gap < 1e-6) continue;
    const auto det_at = [&](double w1v) {
      WeightRecipe w;
      w.w1 = w1v;
      w.w2 = p + s;
      const SweepPoint pt = make_sweep_point(1.0 - theta, ps);
      return assemble_matrix(c_coefficients(w, ps, pt), pt).det();
    };
    if (!(det_at(wlo + inside(rng) * gap) > 0.0)) ++failures;
    if (!(det_at(whi + outside(rng) * gap) < 0.0)) ++failures;
    if (!(det_at(wlo - outside(rng) * gap) < 0.0)) ++failures;
    ++done;
  }

  // closed-form extrema vs dense numerical extremization
  long extremal_bad = 0;
  double worst_rel = 0.0;
  for (int trial = 0; trial < 400; ++trial) {
    const double p = up(rng), gamma = ug(rng);
    const double s = gamma + 1.0 - p + us(rng);
    const RootAnalysis ra = extremal_bounds(make_params(p, gamma, s));
    const double rel_m = std::fabs(ra.numeric_sup_w1_minus - ra.sup_w1_minus) /
                         std::max(1.0, std::fabs(ra.sup_w1_minus));
    const double rel_p = std::fabs(ra.numeric_inf_w1_plus - ra.inf_w1_plus) /
                         std::max(1.0, std::fabs(ra.inf_w1_plus));
    worst_rel = std::max({worst_rel, rel_m, rel_p});
    if (rel_m > 1e-6 || rel_p > 1e-6) ++extremal_bad;
  }
  std::ostringstream os;
  os << done << " window sign checks, " << failures << " failures; extremal rel err <= "
     << worst_rel;
  report(3, "root-window equivalence", failures == 0 && extremal_bad == 0, os.str(),
         timer.seconds());
}

// ---------------------------------------------------------------- criterion 4
void criterion_branch_predicate() {
  Timer timer;
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> up(1.05, 40.0), ug(-0.95, 3.0), us(1e-4, 15.0);
  long disagreements = 0;
  for (long trial = 0; trial < 100000; ++trial) {
    const double p = up(rng), gamma = ug(rng);
    const double s = gamma + 1.0 - p + us(rng);
    const bool adm = admissible_s(p, gamma, s) != SBranch::inadmissible;
    if (adm != restriction_s_holds(p, gamma, s)) ++disagreements;
  }
  std::ostringstream os;
  os << "100000 triples, " << disagreements << " disagreements";
  report(4, "branch predicate", disagreements == 0, os.str(), timer.seconds());
}

// ---------------------------------------------------------------- criterion 5
void criterion_identity_convergence() {
  Timer timer;
  const double eps = 1e-2;
  const std::array<int, 3> grids = {33, 65, 129};
  bool all_ok = true;
  std::ostringstream os;
  for (const char* preset_name : {"saddle", "quadratic_bowl", "sine_mode"}) {
    const Preset preset = make_preset(preset_name);
    for (const char* identity : {"fundamental", "gd1", "gd2"}) {
      std::array<double, 3> l2{}, h{};
      for (size_t k = 0; k < grids.size(); ++k) {
        const Grid2D g = preset.default_domain(grids[k], grids[k]);
        h[k] = g.hx;
        if (std::strcmp(identity, "gd2") == 0) {
          const double dts = 0.5 * g.hx;
          std::array<ScalarField, 3> s;
          for (int m = 0; m < 3; ++m) {
            const double t = 0.3 + (m - 1) * dts;
            s[m] = ScalarField::sample(g, [&](double x, double y) {
              return preset.value(x, y, 0.0) * std::exp(-0.5 * t);
            });
          }
          l2[k] = residual_norms(gd2_residual({&s[0], &s[1], &s[2]}, 1.0, g, dts, eps), g, 2,
                                 nullptr)
                      .l2;
        } else {
          const auto u = ScalarField::sample(
              g, [&](double x, double y) { return preset.value(x, y, 0.0); });
          ParamSet ps = make_params(2.0, 0.0, 0.0, eps);
          const DerivedFields d = derive_all(u, g, ps);
          if (std::strcmp(identity, "fundamental") == 0)
            l2[k] = residual_norms(fundamental_equality_residual(d), g, 1, &d).l2;
          else
            l2[k] = residual_norms(gd1_residual(d, 1.0, g, eps), g, 2, nullptr).l2;
        }
      }
      // quadratic presets can be exact to rounding; treat that as converged
      const bool exact = l2[0] < 1e-10 && l2[1] < 1e-10 && l2[2] < 1e-10;
      bool ok = true;
      double worst_order = 99.0;
      if (!exact) {
        for (int k = 1; k < 3; ++k) {
          const double order = std::log(l2[k - 1] / l2[k]) / std::log(h[k - 1] / h[k]);
          worst_order = std::min(worst_order, order);
          if (!(order >= 1.5)) ok = false;
        }
      }
      if (!ok) {
        all_ok = false;
        os << preset_name << "/" << identity << " order " << worst_order << "; ";
      }
    }
  }
  if (all_ok) os << "9 preset x identity pairs converge at order >= 1.5 (or are exact)";
  report(5, "identity convergence", all_ok, os.str(), timer.seconds());
}

// ---------------------------------------------------------------- criterion 6
void criterion_solver_correctness() {
  Timer timer;
  bool ok = true;
  std::ostringstream os;

  // heat reduction against the decaying mode
  for (int n : {33, 65}) {
    const Preset preset = make_preset("sine_mode");
    const Grid2D g = preset.default_domain(n, n);
    ParamSet ps = make_params(2.0, 0.0, 0.0, 1e-9);
    const double safety = 0.8;
    const SpaceTimeField traj = solve(make_problem(preset, g, ps, 0.25), safety, 0.025);
    const double dt = safety * g.hx * g.hx / 4.0;
    double worst = 0.0;
    for (size_t k = 0; k < traj.slices.size(); ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          worst = std::max(worst, std::fabs(traj.slices[k].at(i, j) -
                                            std::exp(-2.0 * traj.times[k]) * std::sin(g.x(i)) *
                                                std::sin(g.y(j))));
    if (!(worst <= 5.0 * (g.hx * g.hx + dt))) {
      ok = false;
      os << "heat error " << worst << " at n=" << n << "; ";
    }
  }

  // stationary linear data
  {
    const Preset preset = make_preset("linear");
    const Grid2D g = preset.default_domain(45, 45);
    const SpaceTimeField traj =
        solve(make_problem(preset, g, make_params(3.5, 0.3, 0.0, 1e-3), 0.1), 0.5, 0.02);
    double worst = 0.0;
    for (const auto& s : traj.slices)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) worst = std::max(worst, std::fabs(s.at(i, j) - g.x(i)));
    if (!(worst <= 1e-12)) {
      ok = false;
      os << "linear drift " << worst << "; ";
    }
  }

  // discrete maximum principle across the preset x parameter matrix
  struct Case {
    const char* preset;
    double p, gamma;
  };
  std::vector<Case> cases;
  for (const char* name : {"linear", "quadratic_bowl", "saddle", "sine_mode", "random_smooth"})
    for (double p : {2.0, 3.0, 4.5})
      for (double gamma : {-0.5, 0.0, 0.5}) cases.push_back({name, p, gamma});
  std::vector<int> violations(cases.size(), 0);
  parallel_for(cases.size(), 0, [&](size_t idx) {
    const Case& c = cases[idx];
    const Preset preset = make_preset(c.preset, 42);
    const Grid2D g = preset.default_domain(21, 21);
    const SpaceTimeField traj =
        solve(make_problem(preset, g, make_params(c.p, c.gamma, 0.0, 1e-2), 0.03), 0.5, 0.01);
    violations[idx] = traj.max_principle_ok ? 0 : 1;
  });
  long bad = 0;
  for (int v : violations) bad += v;
  if (bad != 0) {
    ok = false;
    os << bad << " max-principle violations; ";
  }
  if (ok) os << "heat error within 5(h^2+dt), linear stationary, max principle clean on "
            << cases.size() << " runs";
  report(6, "solver correctness", ok, os.str(), timer.seconds());
}

// ------------------------------------------------------- criteria 7 and 8
struct EstimateRun {
  double p, gamma, eps;
  int n;
  SpaceTimeField traj;
  std::map<double, EstimateReport> by_s;  // s -> report
  std::vector<TimeDerivReport> td;
};

void criteria_estimates_and_time_derivative() {
  Timer timer;
  const std::array<std::pair<double, double>, 3> pg = {{{3.0, 0.0}, {3.0, 0.5}, {4.0, -0.5}}};
  const std::array<double, 3> eps_list = {1e-2, 1e-3, 1e-4};
  const std::array<int, 2> grid_list = {33, 65};
  const double t_end = 0.65;
  const double store_dt = t_end / 50.0;

  std::vector<EstimateRun> runs;
  for (const auto& [p, gamma] : pg)
    for (double eps : eps_list)
      for (int n : grid_list) runs.push_back({p, gamma, eps, n, {}, {}, {}});

  std::string first_error;
  parallel_for(runs.size(), 0, [&](size_t idx) {
    EstimateRun& run = runs[idx];
    // tilted random bump field: the gradient stays alive inside Q_2r, so the
    // ratio probes the estimate rather than the decay of the data
    const Preset preset = make_preset("random_smooth", 3);
    const Grid2D g = preset.default_domain(run.n, run.n);
    const ParamSet ps = make_params(run.p, run.gamma, 0.0, run.eps);
    run.traj = solve(make_problem(preset, g, ps, t_end), 0.5, store_dt);
    const ParabolicCylinder cyl = default_cylinder(run.traj);
    run.by_s[2.0 - run.p] = hessian_estimate_report(run.traj, cyl, ps);
    run.by_s[0.0] = nonlinear_gradient_estimate_report(run.traj, cyl, ps, 0.0);
    const bool in_i = run.p >= 3.0 && run.p <= 40.0 && run.gamma >= 0.0 && run.gamma < 1.0;
    const bool in_ii = run.p > 1.0 && run.p < 9.0 * run.gamma + 10.0;
    if (in_i) run.td.push_back(time_derivative_check(run.traj, ps, TimeDerivMode::range_i, cyl));
    if (in_ii)
      run.td.push_back(time_derivative_check(run.traj, ps, TimeDerivMode::range_ii, cyl));
    run.traj = SpaceTimeField{};  // free the slices early
  });

  // criterion 7: ratio varies by < 3x over the eps and grid sweep; log share -> 0
  bool ok7 = true;
  std::ostringstream os7;
  for (const auto& [p, gamma] : pg) {
    for (double s : {2.0 - p, 0.0}) {
      double lo = 1e300, hi = 0.0;
      for (const auto& run : runs) {
        if (run.p != p || run.gamma != gamma) continue;
        const auto it = run.by_s.find(s);
        if (it == run.by_s.end()) continue;
        lo = std::min(lo, it->second.ratio);
        hi = std::max(hi, it->second.ratio);
      }
      if (!(hi / lo < 3.0)) {
        ok7 = false;
        os7 << "(p=" << p << ",g=" << gamma << ",s=" << s << ") spread " << hi / lo << "; ";
      }
    }
    // the eps log share decreases along the eps sweep on each grid
    for (int n : grid_list) {
      std::array<double, 3> share{};
      for (const auto& run : runs)
        if (run.p == p && run.gamma == gamma && run.n == n)
          share[run.eps == 1e-2 ? 0 : (run.eps == 1e-3 ? 1 : 2)] =
              run.by_s.at(2.0 - p).log_share;
      if (!(share[1] < share[0] && share[2] < share[1])) {
        ok7 = false;
        os7 << "(p=" << p << ",g=" << gamma << ",n=" << n << ") log share not decreasing; ";
      }
    }
  }
  if (ok7) os7 << "ratios stable within 3x over eps in {1e-2,1e-3,1e-4} x grids {33,65}";
  report(7, "estimate boundedness", ok7, os7.str(), timer.seconds());

  // criterion 8: pointwise time-derivative bound and refinement-stable integral
  Timer timer8;
  bool ok8 = true;
  std::ostringstream os8;
  double worst_fraction = 1.0;
  for (const auto& run : runs)
    for (const auto& td : run.td) {
      worst_fraction = std::min(worst_fraction, td.fraction_ok);
      if (!(td.fraction_ok >= 0.999)) {
        ok8 = false;
        os8 << "(p=" << run.p << ",g=" << run.gamma << ",eps=" << run.eps << ",n=" << run.n
            << ") fraction " << td.fraction_ok << "; ";
      }
      if (!std::isfinite(td.int_ut_sq)) {
        ok8 = false;
        os8 << "non-finite int |u_t|^2; ";
      }
    }
  for (const auto& [p, gamma] : pg)
    for (double eps : eps_list) {
      std::array<double, 2> iu{};
      for (const auto& run : runs)
        if (run.p == p && run.gamma == gamma && run.eps == eps && !run.td.empty())
          iu[run.n == grid_list[0] ? 0 : 1] = run.td.front().int_ut_sq;
      if (iu[0] > 0.0 && iu[1] > 0.0) {
        const double spread = std::max(iu[0], iu[1]) / std::min(iu[0], iu[1]);
        if (!(spread < 3.0)) {
          ok8 = false;
          os8 << "(p=" << p << ",g=" << gamma << ",eps=" << eps << ") int|u_t|^2 spread "
              << spread << "; ";
        }
      }
    }
  if (ok8) os8 << "pointwise bound holds at >= 99.9% (worst " << worst_fraction
               << "), integrals refinement-stable";
  report(8, "time-derivative bound", ok8, os8.str(), timer8.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

  const auto want = [&](int k) { return only == 0 || only == k; };
  if (want(1)) criterion_region_reproduction();
  if (want(2)) criterion_negative_det_beyond_p40();
  if (want(3)) criterion_root_window();
  if (want(4)) criterion_branch_predicate();
  if (want(5)) criterion_identity_convergence();
  if (want(6)) criterion_solver_correctness();
  if (want(7) || want(8)) criteria_estimates_and_time_derivative();

  if (g_failures == 0) {
    std::cout << "acceptance: all criteria passed" << std::endl;
    return 0;
  }
  std::cout << "acceptance: " << g_failures << " criteria FAILED" << std::endl;
  return 1;
}
