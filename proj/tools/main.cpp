// Command-line front end: certify, scan, identity-check, solve, estimate.
// All numerics live in the library; this file only parses configs, wires
// modules together and writes result files (atomically, no partial output).

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pparab/certifier.hpp"
#include "pparab/diff_ops.hpp"
#include "pparab/estimator.hpp"
#include "pparab/field_io.hpp"
#include "pparab/solver.hpp"
#include "pparab/structure.hpp"

namespace {

using nlohmann::json;
using namespace pparab;

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 3;
constexpr int kExitFailure = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  int workers = 0;
  bool override_range = false;
  std::optional<long long> seed_override;
};

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config: " + path);
  json j;
  is >> j;
  return j;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  return (std::filesystem::path(args.out_dir) / name).string();
}

ParamSet params_from(const json& j) {
  ParamSet ps;
  ps.p = j.at("p").get<double>();
  ps.gamma = j.at("gamma").get<double>();
  ps.s = j.value("s", 0.0);
  ps.epsilon = j.value("epsilon", 0.0);
  return ps;
}

std::uint64_t seed_of(const json& cfg, const CommonArgs& args) {
  if (args.seed_override) return static_cast<std::uint64_t>(*args.seed_override);
  return cfg.value("seed", 0ULL);
}

json run_metadata(const json& cfg, const CommonArgs& args, std::uint64_t seed) {
  json meta;
  meta["config"] = cfg;
  meta["seed"] = seed;
  meta["override_range"] = args.override_range;
  return meta;
}

CertifyMethod method_from(const json& cfg) {
  const std::string m = cfg.value("method", "lipschitz");
  if (m == "lipschitz" || m == "lipschitz_sweep") return CertifyMethod::lipschitz_sweep;
  if (m == "interval" || m == "interval_sweep") return CertifyMethod::interval_sweep;
  throw std::invalid_argument("unknown certify method: " + m);
}

// recipe: "w22" (fixed weight set, s forced to 2-p) or "general_s"
// (weights selected from the root window); explicit "weights": [w1,w2,w3,w4]
// override either.
WeightRecipe weights_from(const json& cfg, ParamSet& ps) {
  const std::string recipe = cfg.value("recipe", "w22");
  if (cfg.contains("weights")) {
    const auto arr = cfg.at("weights");
    if (!arr.is_array() || arr.size() != 4)
      throw std::invalid_argument("weights must be an array [w1,w2,w3,w4]");
    WeightRecipe w;
    w.w1 = arr[0].get<double>();
    w.w2 = arr[1].get<double>();
    w.w3 = arr[2].get<double>();
    w.w4 = arr[3].get<double>();
    w.a = 1.0 - ps.gamma;
    w.b = 2.0 * std::sqrt(2.0);
    return w;
  }
  if (recipe == "w22") {
    ps.s = 2.0 - ps.p;
    return w22_weights(ps);
  }
  if (recipe == "general_s") return select_weights_general_s(ps.p, ps.gamma, ps.s);
  throw std::invalid_argument("unknown recipe: " + recipe);
}

int cmd_certify(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  ParamSet ps = params_from(cfg.at("params"));
  const WeightRecipe w = weights_from(cfg, ps);
  CertifyOptions opts;
  opts.method = method_from(cfg);
  opts.max_depth = cfg.value("max_depth", 44);
  const double target = cfg.value("target_margin", 1e-4);
  const Certificate cert = certify(w, ps, target, opts);

  json j = json::parse(cert.to_json());
  j["meta"] = run_metadata(cfg, args, 0);
  atomic_write_text(out_path(args, cfg.value("out", std::string("certificate.json"))),
                    j.dump(2) + "\n");
  std::cout << "certify: " << to_string(cert.verdict) << " margin " << cert.margin << "\n";
  switch (cert.verdict) {
    case Verdict::accept: return kExitAccept;
    case Verdict::reject: return kExitReject;
    default: return kExitInconclusive;
  }
}

std::string figure_matrix_text(const FigureMatrix& fm) {
  // gnuplot nonuniform-matrix layout: first row holds the kappa samples
  std::ostringstream os;
  os.precision(17);
  os << fm.kappas.size();
  for (double k : fm.kappas) os << ' ' << k;
  os << '\n';
  for (size_t ip = 0; ip < fm.ps.size(); ++ip) {
    os << fm.ps[ip];
    for (size_t ik = 0; ik < fm.kappas.size(); ++ik) os << ' ' << fm.at(ip, ik);
    os << '\n';
  }
  return os.str();
}

int cmd_scan(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  ScanRequest req;
  const auto pr = cfg.at("p_range");
  req.p_lo = pr[0].get<double>();
  req.p_hi = pr[1].get<double>();
  req.p_step = cfg.at("p_step").get<double>();
  const auto gr = cfg.at("gamma_range");
  req.gamma_lo = gr[0].get<double>();
  req.gamma_hi = gr[1].get<double>();
  req.gamma_step = cfg.at("gamma_step").get<double>();
  if (!(req.p_step > 0.0) || !(req.gamma_step > 0.0))
    throw std::invalid_argument("scan: steps must be positive (zero resolution)");
  const std::string recipe = cfg.value("recipe", "w22");
  if (recipe == "w22") {
    req.s_policy.mode = SPolicy::Mode::w22;
  } else if (recipe == "general_s") {
    req.s_policy.mode = SPolicy::Mode::fixed_s;
    req.s_policy.s = cfg.at("s").get<double>();
  } else {
    throw std::invalid_argument("unknown recipe: " + recipe);
  }
  req.target_margin = cfg.value("target_margin", 1e-4);
  req.kappa_resolution = cfg.value("kappa_resolution", 101);
  req.with_figures = cfg.value("figures", req.s_policy.mode == SPolicy::Mode::w22);
  req.workers = args.workers;

  const RegionMap map = scan_region(req);
  atomic_write_text(out_path(args, cfg.value("out", std::string("region.csv"))), map.to_csv());
  if (map.figure_f_at_gamma1)
    atomic_write_text(out_path(args, "figure_f_gamma1.dat"),
                      figure_matrix_text(*map.figure_f_at_gamma1));
  if (map.figure_fgamma_at_gammam1)
    atomic_write_text(out_path(args, "figure_fgamma_gammam1.dat"),
                      figure_matrix_text(*map.figure_fgamma_at_gammam1));
  if (map.slice_check) {
    const SliceCheck& sc = *map.slice_check;
    json j;
    j["fgamma_nonpositive"] = sc.fgamma_nonpositive;
    j["fgamma_upper_bound"] = sc.fgamma_upper_bound;
    j["f_nonneg"] = sc.f_nonneg;
    j["h_lower_bound"] = sc.h_lower_bound;
    j["mono_violation"] = sc.mono_violation;
    j["fgamma_max_sampled"] = sc.fgamma_max_sampled;
    j["meta"] = run_metadata(cfg, args, 0);
    atomic_write_text(out_path(args, "slice_check.json"), j.dump(2) + "\n");
  }
  long accepted = 0, rejected = 0, undecided = 0;
  for (const auto& pt : map.points) {
    if (pt.verdict == Verdict::accept) ++accepted;
    else if (pt.verdict == Verdict::reject) ++rejected;
    else ++undecided;
  }
  std::cout << "scan: " << map.points.size() << " points, " << accepted << " accepted, "
            << rejected << " rejected, " << undecided << " undecided\n";
  return kExitAccept;
}

int cmd_identity_check(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  const std::string identity = cfg.at("identity").get<std::string>();
  const std::uint64_t seed = seed_of(cfg, args);
  const Preset preset = make_preset(cfg.value("preset", std::string("saddle")), seed);
  const std::vector<int> grids = cfg.value("grids", std::vector<int>{33, 65, 129});
  const double eps = cfg.value("eps", 1e-2);
  const double alpha = cfg.value("alpha", 1.0);
  const double beta = cfg.value("beta", 1.0);
  const double dt_factor = cfg.value("dt_slice_factor", 0.5);

  json rows = json::array();
  double prev_max = 0.0, prev_l2 = 0.0, prev_h = 0.0;
  bool have_prev = false;
  for (int n : grids) {
    const Grid2D g = preset.default_domain(n, n);
    ResidualNorms norms;
    if (identity == "fundamental" || identity == "gd1") {
      const ScalarField u =
          ScalarField::sample(g, [&](double x, double y) { return preset.value(x, y, 0.0); });
      ParamSet ps;
      ps.p = 2.0;
      ps.epsilon = eps;
      const DerivedFields d = derive_all(u, g, ps);
      if (identity == "fundamental") {
        norms = residual_norms(fundamental_equality_residual(d), g, 1, &d);
      } else {
        norms = residual_norms(gd1_residual(d, alpha, g, eps), g, 2, nullptr);
      }
    } else if (identity == "gd2") {
      const double t_mid = 0.3;
      const double dt_slice = dt_factor * g.hx;
      std::array<ScalarField, 3> slices;
      for (int k = 0; k < 3; ++k) {
        const double t = t_mid + (k - 1) * dt_slice;
        slices[k] = ScalarField::sample(
            g, [&](double x, double y) { return preset.value(x, y, 0.0) * std::exp(-0.5 * t); });
      }
      norms = residual_norms(
          gd2_residual({&slices[0], &slices[1], &slices[2]}, beta, g, dt_slice, eps), g, 2,
          nullptr);
    } else if (identity == "weighted_sum") {
      ParamSet ps = params_from(cfg.at("params"));
      Problem prob = make_problem(preset, g, ps, cfg.value("t_end", 0.05));
      const double store_dt = prob.t_end / 8.0;
      const SpaceTimeField traj = solve(prob, cfg.value("safety", 0.5), store_dt);
      const int last = static_cast<int>(traj.slices.size()) - 1;
      std::array<DerivedFields, 3> d3;
      for (int k = 0; k < 3; ++k) d3[k] = derive_all(traj.slices[last - 2 + k], g, ps);
      WeightRecipe w;
      if (cfg.contains("weights")) {
        ParamSet tmp = ps;
        w = weights_from(cfg, tmp);
      } else {
        w = w22_weights(ps);
      }
      const StructureSumReport rep =
          weighted_sum_report({&d3[0], &d3[1], &d3[2]}, store_dt, w, ps, g);
      norms = rep.residual;
      if (!rep.is_solution) {
        json row;
        row["warning"] = "not a solution";
        row["equation_residual_max"] = rep.equation_residual_max;
        row["solution_tolerance"] = rep.solution_tolerance;
        rows.push_back(row);
      }
    } else {
      throw std::invalid_argument("unknown identity: " + identity);
    }

    // rounding-level residuals (exact identities) carry no meaningful order
    double order = std::numeric_limits<double>::quiet_NaN();
    if (have_prev && norms.l2 > 1e-12 && prev_l2 > 1e-12)
      order = std::log(prev_l2 / norms.l2) / std::log(prev_h / g.hx);
    rows.push_back(json::parse(residual_report_json(
        identity, identity == "gd2" ? beta : alpha, g, norms, order)));
    prev_max = norms.max_abs;
    prev_l2 = norms.l2;
    prev_h = g.hx;
    have_prev = true;
  }
  (void)prev_max;
  json out;
  out["reports"] = rows;
  out["meta"] = run_metadata(cfg, args, seed);
  atomic_write_text(out_path(args, cfg.value("out", "identity_" + identity + ".json")),
                    out.dump(2) + "\n");
  std::cout << "identity-check " << identity << ": wrote " << rows.size() << " reports\n";
  return kExitAccept;
}

struct SolveResult {
  SpaceTimeField traj;
  ParamSet params;
  json summary;
};

Grid2D grid_from(const json& cfg, const Preset& preset) {
  const json gj = cfg.value("grid", json::object());
  const int nx = gj.value("nx", 65), ny = gj.value("ny", 65);
  if (gj.contains("x0"))
    return Grid2D::rectangle(nx, ny, gj.at("x0").get<double>(), gj.at("x1").get<double>(),
                             gj.at("y0").get<double>(), gj.at("y1").get<double>());
  return preset.default_domain(nx, ny);
}

// default slice spacing: fine enough for the Euler record and for >= 10
// stored layers inside the default cylinder's [t0, t0 + r^2) window
double default_store_dt(const Grid2D& g, double t_end) {
  const double lx = g.x1() - g.x0, ly = g.y1() - g.y0;
  const double r_space = 0.5 * (0.5 * std::min(lx, ly) - 2.0 * std::max(g.hx, g.hy));
  const double r = std::min(r_space, std::sqrt(t_end / 5.0));
  double dt = t_end / 50.0;
  if (r > 0.0) dt = std::min(dt, r * r / 10.0);
  return dt;
}

SolveResult run_solve(const json& cfg, const CommonArgs& args) {
  const std::uint64_t seed = seed_of(cfg, args);
  const Preset preset = make_preset(cfg.value("preset", std::string("sine_mode")), seed);
  const Grid2D g = grid_from(cfg, preset);
  ParamSet ps = params_from(cfg.at("params"));
  const double t_end = cfg.value("t_end", 0.25);
  const double safety = cfg.value("safety", 0.5);
  const double store_dt = cfg.value("store_dt", default_store_dt(g, t_end));
  Problem prob = make_problem(preset, g, ps, t_end);
  SolveResult res;
  res.traj = solve(prob, safety, store_dt);
  res.params = ps;
  res.summary["preset"] = preset.name;
  res.summary["seed"] = seed;
  res.summary["steps"] = res.traj.steps_taken;
  res.summary["slices"] = res.traj.slices.size();
  res.summary["t_end"] = res.traj.times.back();
  res.summary["store_dt"] = store_dt;
  res.summary["data_min"] = res.traj.data_min;
  res.summary["data_max"] = res.traj.data_max;
  res.summary["max_principle_ok"] = res.traj.max_principle_ok;
  res.summary["max_principle_excess"] = res.traj.max_principle_excess;
  return res;
}

int cmd_solve(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  SolveResult res = run_solve(cfg, args);
  write_trajectory(out_path(args, cfg.value("trajectory_out", std::string("trajectory.bin"))),
                   res.traj);
  json j = res.summary;
  j["meta"] = run_metadata(cfg, args, seed_of(cfg, args));
  atomic_write_text(out_path(args, cfg.value("out", std::string("solve_summary.json"))),
                    j.dump(2) + "\n");
  std::cout << "solve: " << res.traj.steps_taken << " steps, max principle "
            << (res.traj.max_principle_ok ? "ok" : "VIOLATED") << "\n";
  return kExitAccept;
}

int cmd_estimate(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  SpaceTimeField traj;
  ParamSet ps;
  json summary;
  if (cfg.contains("trajectory")) {
    traj = read_trajectory(cfg.at("trajectory").get<std::string>());
    ps = params_from(cfg.at("params"));
  } else {
    SolveResult res = run_solve(cfg, args);
    traj = std::move(res.traj);
    ps = res.params;
    summary = res.summary;
  }
  ParabolicCylinder cyl;
  if (cfg.contains("cylinder") && cfg.at("cylinder").is_object()) {
    const json& cj = cfg.at("cylinder");
    cyl.cx = cj.at("cx").get<double>();
    cyl.cy = cj.at("cy").get<double>();
    cyl.t0 = cj.at("t0").get<double>();
    cyl.r = cj.at("r").get<double>();
  } else {
    cyl = default_cylinder(traj);
  }

  json reports = json::array();
  std::ostringstream ratios;
  ratios.precision(17);
  ratios << "epsilon,h,s,ratio\n";
  if (cfg.value("hessian_report", true)) {
    const EstimateReport rep = hessian_estimate_report(traj, cyl, ps, args.override_range);
    reports.push_back(json::parse(rep.to_json()));
    ratios << ps.epsilon << ',' << traj.grid.hx << ',' << rep.s_used << ',' << rep.ratio << '\n';
  }
  for (const double s : cfg.value("s_list", std::vector<double>{})) {
    const EstimateReport rep =
        nonlinear_gradient_estimate_report(traj, cyl, ps, s, args.override_range);
    reports.push_back(json::parse(rep.to_json()));
    ratios << ps.epsilon << ',' << traj.grid.hx << ',' << s << ',' << rep.ratio << '\n';
  }
  json td = json::array();
  if (cfg.value("time_derivative", true)) {
    const bool in_i = ps.p >= 3.0 && ps.p <= 40.0 && ps.gamma >= 0.0 && ps.gamma < 1.0;
    const bool in_ii = ps.p > 1.0 && ps.p < 9.0 * ps.gamma + 10.0;
    if (in_i || args.override_range)
      td.push_back(json::parse(
          time_derivative_check(traj, ps, TimeDerivMode::range_i, cyl, args.override_range)
              .to_json()));
    if (in_ii || args.override_range)
      td.push_back(json::parse(
          time_derivative_check(traj, ps, TimeDerivMode::range_ii, cyl, args.override_range)
              .to_json()));
  }

  json out;
  out["cylinder"] = {{"cx", cyl.cx}, {"cy", cyl.cy}, {"t0", cyl.t0}, {"r", cyl.r}};
  out["reports"] = reports;
  out["time_derivative"] = td;
  if (!summary.empty()) out["solve"] = summary;
  out["meta"] = run_metadata(cfg, args, seed_of(cfg, args));
  atomic_write_text(out_path(args, cfg.value("out", std::string("estimates.json"))),
                    out.dump(2) + "\n");
  atomic_write_text(out_path(args, "ratios.csv"), ratios.str());
  std::cout << "estimate: " << reports.size() << " reports, cylinder r = " << cyl.r << "\n";
  return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pparab: positive-definiteness certificates, identity checks and integral "
               "estimates for a regularized degenerate/singular parabolic equation"};
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON config path")->required();
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--workers", args.workers, "worker threads (0 = all cores)");
    sub->add_flag("--override-range", args.override_range,
                  "permit parameters outside the proven ranges (recorded in outputs)");
    sub->add_option("--seed", args.seed_override, "override the config seed");
  };

  CLI::App* c_certify = app.add_subcommand("certify", "kappa-sweep positive definiteness");
  CLI::App* c_scan = app.add_subcommand("scan", "(p,gamma) region sweep and landscapes");
  CLI::App* c_identity = app.add_subcommand("identity-check", "pointwise identity residuals");
  CLI::App* c_solve = app.add_subcommand("solve", "explicit solver for the regularized equation");
  CLI::App* c_estimate = app.add_subcommand("estimate", "cylinder integral estimates");
  for (CLI::App* sub : {c_certify, c_scan, c_identity, c_solve, c_estimate}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (c_certify->parsed()) return cmd_certify(args);
    if (c_scan->parsed()) return cmd_scan(args);
    if (c_identity->parsed()) return cmd_identity_check(args);
    if (c_solve->parsed()) return cmd_solve(args);
    if (c_estimate->parsed()) return cmd_estimate(args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
