#include "pparab/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pparab/parallel.hpp"
#include "json.hpp"

namespace pparab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CCoeffs c_coefficients(const WeightRecipe& w, const ParamSet& params, const SweepPoint& pt) {
  const double p = params.p, g = params.gamma, s = params.s;
  CCoeffs c;
  c.c1 = w.w1 + w.w3 * pt.kappa;
  c.c2 = (w.w1 * (p - 2.0 + s) + w.w3 * (p - 4.0 + s) * pt.kappa) * pt.theta;
  c.c3 = w.w2 + w.w4 * pt.kappa;
  c.c4 = (w.w2 * (p - 2.0 + s - g) + w.w4 * (p - 4.0 + s - g) * pt.kappa) * pt.theta;
  return c;
}

QuadMatrix assemble_matrix(const CCoeffs& c, const SweepPoint& pt) {
  QuadMatrix m;
  m.m11 = c.c3;
  m.m12 = 0.5 * (c.c3 * pt.P_theta + (c.c3 + c.c4) - (2.0 * c.c1 + c.c2));
  m.m22 = (c.c3 + c.c4) * pt.P_theta;
  return m;
}

double det_f(double kappa, double p, double gamma) {
  const double b = 2.0 * std::sqrt(2.0);
  const double a = 1.0 - gamma;
  const double t1 = 2.0 + (b - 2.0) * kappa;
  const double t2 = 2.0 * (1.0 - gamma) + (2.0 * gamma - (1.0 + gamma) * (b - 2.0)) * kappa +
                    (2.0 + gamma) * (b - 2.0) * kappa * kappa;
  const double t3 = (p - 2.0) * (1.0 - kappa) + 1.0;
  const double cross = (b - 4.0) * (p - 2.0 - gamma) * (1.0 - kappa) + 2.0 * (b - a) * kappa;
  return t1 * t2 * t3 - 0.25 * kappa * kappa * cross * cross;
}

DetDiagnostics det_f_diagnostics(double kappa, double p, double gamma) {
  const double b = 2.0 * std::sqrt(2.0);
  const double k = kappa;
  DetDiagnostics out;
  out.f_value = det_f(kappa, p, gamma);
  const double ring = 2.0 * k + (4.0 - b) * (1.0 - k);
  out.A = -0.5 * k * k * ring * ring;
  // B = f_gamma at gamma = 0 (b - a -> b - 1, p - 2 - gamma -> p - 2)
  const double first = -(1.0 - k) * ((p - 2.0) * (1.0 - k) + 1.0) *
                       ((b - 2.0) * k + 2.0) * ((b - 2.0) * k + 2.0);
  const double second = 0.5 * k * k * ((1.0 - k) * (b - 4.0) - 2.0 * k) *
                        ((b - 4.0) * (p - 2.0) * (1.0 - k) + 2.0 * (b - 1.0) * k);
  out.B = first + second;
  return out;
}

KappaConditions build_kappa_conditions(const WeightRecipe& w, const ParamSet& params) {
  const Interval p(params.p), s(params.s), g(params.gamma);
  const Interval w1(w.w1), w2(w.w2), w3(w.w3), w4(w.w4);
  const KPoly k = KPoly::var();
  const KPoly th = KPoly::constant(1.0) - k;

  const KPoly c1 = KPoly::constant(w1) + k * w3;
  const KPoly c2 = (KPoly::constant(w1 * (p - 2.0 + s)) + k * (w3 * (p - 4.0 + s))) * th;
  const KPoly c3 = KPoly::constant(w2) + k * w4;
  const KPoly c4 = (KPoly::constant(w2 * (p - 2.0 + s - g)) + k * (w4 * (p - 4.0 + s - g))) * th;
  const KPoly P = th * (p - 2.0) + KPoly::constant(1.0);

  KappaConditions cond;
  cond.two_c1_plus_c2 = c1 * 2.0 + c2;
  cond.c3 = c3;
  const KPoly c34 = c3 + c4;
  const KPoly cross = c3 * P + c34 - cond.two_c1_plus_c2;
  cond.det = c3 * c34 * P - (cross * cross) * 0.25;
  return cond;
}

const char* to_string(CertifyMethod m) {
  return m == CertifyMethod::lipschitz_sweep ? "lipschitz_sweep" : "interval_sweep";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::accept: return "accept";
    case Verdict::reject: return "reject";
    default: return "inconclusive";
  }
}

const char* to_string(SBranch b) {
  switch (b) {
    case SBranch::optimal_branch: return "optimal";
    case SBranch::second_branch: return "second";
    default: return "inadmissible";
  }
}

Certificate certify(const WeightRecipe& w, const ParamSet& params, double target_margin,
                    const CertifyOptions& opts) {
  if (!(target_margin > 0.0))
    throw std::invalid_argument("certify: target_margin must be positive");
  for (double x : {w.w1, w.w2, w.w3, w.w4})
    if (!std::isfinite(x)) throw std::invalid_argument("certify: weights must be finite");

  const KappaConditions cond = build_kappa_conditions(w, params);
  const bool lip = opts.method == CertifyMethod::lipschitz_sweep;

  Certificate cert;
  cert.params = params;
  cert.weights = w;
  cert.method = opts.method;
  cert.target_margin = target_margin;
  cert.max_depth = opts.max_depth;
  cert.lambda_note =
      "margin > 0 is the certified uniform positive-definiteness constant; a lambda > 0 "
      "bounding the full Hessian term from below by the divergence sum exists as a consequence";

  struct Item {
    double lo, hi;
    int depth;
  };
  std::vector<Item> stack{{0.0, 1.0, 0}};
  double global_bound = kInf;
  bool any_undecided = false;

  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const Interval cell(it.lo, it.hi);
    double bound = kInf;
    for (int c = 0; c < 3; ++c)
      bound = std::min(bound, cell_lower_bound(cond.by_index(c), cell, lip));
    if (bound >= target_margin) {
      if (opts.keep_cells) cert.cells.push_back({it.lo, it.hi, bound});
      global_bound = std::min(global_bound, bound);
      continue;
    }
    const double mid = cell.mid();
    double up = kInf;
    int arg = 0;
    for (int c = 0; c < 3; ++c) {
      const double u = cond.by_index(c).eval(mid).hi;
      if (u < up) {
        up = u;
        arg = c;
      }
    }
    if (up < target_margin) {
      cert.witness = CertWitness{mid, KappaConditions::kNames[arg], up};
      cert.verdict = Verdict::reject;
      cert.margin = up;
      return cert;
    }
    if (it.depth >= opts.max_depth) {
      any_undecided = true;
      if (opts.keep_cells) cert.cells.push_back({it.lo, it.hi, bound});
      global_bound = std::min(global_bound, bound);
      continue;
    }
    stack.push_back({mid, it.hi, it.depth + 1});
    stack.push_back({it.lo, mid, it.depth + 1});
  }

  cert.margin = global_bound;
  cert.verdict = any_undecided ? Verdict::inconclusive : Verdict::accept;
  return cert;
}

std::string Certificate::to_json() const {
  nlohmann::json j;
  j["params"] = {{"p", params.p}, {"gamma", params.gamma}, {"s", params.s},
                 {"epsilon", params.epsilon}};
  j["weights"] = {{"w1", weights.w1}, {"w2", weights.w2}, {"w3", weights.w3},
                  {"w4", weights.w4}, {"a", weights.a},   {"b", weights.b},
                  {"eta", weights.eta}};
  j["method"] = to_string(method);
  j["verdict"] = to_string(verdict);
  j["target_margin"] = target_margin;
  j["margin"] = margin;
  j["max_depth"] = max_depth;
  j["lambda_note"] = lambda_note;
  if (witness) {
    j["witness"] = {{"kappa", witness->kappa},
                    {"condition", witness->condition},
                    {"upper_bound", witness->upper_bound}};
  }
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& c : cells)
    cells_json.push_back({{"lo", c.lo}, {"hi", c.hi}, {"bound", c.bound}});
  j["cells"] = std::move(cells_json);
  return j.dump(2) + "\n";
}

namespace {

double w1_root(const ParamSet& ps, double theta, int sign) {
  const SweepPoint pt = make_sweep_point(1.0 - theta, ps);
  const double window = pt.P_theta + pt.S_theta - pt.K_theta;
  const double sum = pt.P_theta + pt.S_theta;
  const double root = std::sqrt(window) + sign * std::sqrt(pt.P_theta);
  return (ps.p + ps.s) / sum * root * root;
}

}  // namespace

double RootAnalysis::w1_minus(double theta) const { return w1_root(params, theta, -1); }
double RootAnalysis::w1_plus(double theta) const { return w1_root(params, theta, +1); }

std::pair<double, double> w1_bounds(double theta, const ParamSet& params) {
  if (!(params.s > params.gamma + 1.0 - params.p))
    throw std::invalid_argument("w1_bounds: admissibility violated (needs s > gamma + 1 - p)");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("w1_bounds: theta outside [0,1]");
  return {w1_root(params, theta, -1), w1_root(params, theta, +1)};
}

namespace {

// Golden-section refinement of fn around [lo, hi]; `maximize` flips the sense.
double golden_extremum(const std::function<double(double)>& fn, double lo, double hi,
                       bool maximize) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
    const bool keep_left = maximize ? (f1 > f2) : (f1 < f2);
    if (keep_left) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = fn(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  return maximize ? std::max({fn(xm), f1, f2}) : std::min({fn(xm), f1, f2});
}

}  // namespace

RootAnalysis extremal_bounds(const ParamSet& params) {
  if (!(params.s > params.gamma + 1.0 - params.p))
    throw std::invalid_argument("extremal_bounds: requires s > gamma + 1 - p");

  RootAnalysis ra;
  ra.params = params;
  const double above = params.p - 1.0 + params.s - params.gamma;  // > 0 by admissibility
  const double base = params.p - 1.0;
  const double dm = std::sqrt(above) - std::sqrt(base);
  ra.sup_w1_minus = dm * dm;
  const double dp = std::sqrt(above) + std::sqrt(base);
  ra.inf_w1_plus = std::min(2.0 * (params.p + params.s), dp * dp);

  // Stationary points exist only under the stated sign condition; for
  // w1_minus the admissible case is empty (the formula lands outside (0,1)).
  const double sgn = (params.p - 2.0 + params.s - 2.0 * params.gamma) * (params.p - 2.0 - params.s);
  const double den = (params.p - 2.0 - params.s) * (params.p - 2.0 - params.s) -
                     4.0 * (params.p - 2.0 - params.gamma) * (params.p - 2.0);
  if (den != 0.0) {
    const double th = 4.0 * (params.p - 2.0 - params.gamma) / den;
    if (th > 0.0 && th < 1.0) {
      if (sgn > 0.0) ra.theta1 = th;
      if (sgn < 0.0) ra.theta2 = th;
    }
  }

  // Dense sampling plus local refinement, cross-checked against the closed
  // forms (primary defence against a mis-transcribed formula).
  const int n = 4096;
  double best_minus = -kInf, best_plus = kInf;
  int arg_minus = 0, arg_plus = 0;
  for (int i = 0; i <= n; ++i) {
    const double th = static_cast<double>(i) / n;
    const double wm = ra.w1_minus(th);
    const double wp = ra.w1_plus(th);
    if (wm > best_minus) {
      best_minus = wm;
      arg_minus = i;
    }
    if (wp < best_plus) {
      best_plus = wp;
      arg_plus = i;
    }
  }
  const auto clamp01 = [](double x) { return std::min(1.0, std::max(0.0, x)); };
  best_minus = std::max(best_minus,
                        golden_extremum([&](double t) { return ra.w1_minus(t); },
                                        clamp01((arg_minus - 1.0) / n),
                                        clamp01((arg_minus + 1.0) / n), true));
  best_plus = std::min(best_plus,
                       golden_extremum([&](double t) { return ra.w1_plus(t); },
                                       clamp01((arg_plus - 1.0) / n),
                                       clamp01((arg_plus + 1.0) / n), false));
  ra.numeric_sup_w1_minus = best_minus;
  ra.numeric_inf_w1_plus = best_plus;

  const double scale_m = std::max(1.0, std::fabs(ra.sup_w1_minus));
  const double scale_p = std::max(1.0, std::fabs(ra.inf_w1_plus));
  if (std::fabs(best_minus - ra.sup_w1_minus) > 1e-8 * scale_m ||
      std::fabs(best_plus - ra.inf_w1_plus) > 1e-8 * scale_p)
    throw std::logic_error("extremal_bounds: closed forms disagree with numerical extremization");
  return ra;
}

SBranch admissible_s(double p, double gamma, double s) {
  if (!(p > 1.0)) throw std::invalid_argument("admissible_s: p > 1 violated");
  if (!(gamma > -1.0)) throw std::invalid_argument("admissible_s: gamma > -1 violated");
  if (!(s > gamma + 1.0 - p)) return SBranch::inadmissible;
  if (s > -2.0 - gamma) return SBranch::optimal_branch;
  // s <= -2-gamma together with s > gamma+1-p forces p-2-gamma > gamma+1 > 0
  const double lower = 2.0 * p - 4.0 - gamma - 2.0 * std::sqrt(2.0 * (p - 1.0) * (p - 2.0 - gamma));
  return (s > lower) ? SBranch::second_branch : SBranch::inadmissible;
}

bool restriction_s_holds(double p, double gamma, double s) {
  const double above = p - 1.0 + s - gamma;
  if (!(above > 0.0)) return false;
  const double d = std::sqrt(above) - std::sqrt(p - 1.0);
  return 2.0 * (p + s) > d * d;
}

WeightRecipe select_weights_general_s(double p, double gamma, double s, double target_margin) {
  if (admissible_s(p, gamma, s) == SBranch::inadmissible)
    throw std::invalid_argument("select_weights_general_s: inadmissible (p, gamma, s) triple");
  ParamSet ps;
  ps.p = p;
  ps.gamma = gamma;
  ps.s = s;
  const RootAnalysis ra = extremal_bounds(ps);
  double eta = 0.5 * std::min(ra.inf_w1_plus - ra.sup_w1_minus, 1.0);
  for (int tries = 0; tries <= 40; ++tries) {
    WeightRecipe w;
    w.w1 = ra.sup_w1_minus + eta;
    w.w2 = p + s;
    w.w3 = 0.0;
    w.w4 = 0.0;
    w.a = 1.0 - gamma;
    w.b = 2.0 * std::sqrt(2.0);
    w.eta = eta;
    CertifyOptions opts;
    opts.keep_cells = false;
    const Certificate cert = certify(w, ps, target_margin, opts);
    if (cert.verdict == Verdict::accept) return w;
    eta *= 0.5;
  }
  // An admissible triple should always certify; reaching this is a finding.
  throw std::runtime_error(
      "select_weights_general_s: certify rejected every eta after 40 halvings");
}

KPoly fgamma_slice_poly(double p, double gamma) {
  // Coefficients carry a two-sided enclosure of b = 2 sqrt 2, so certified
  // bounds also hold for the exact irrational coefficient.
  const Interval b = Interval::around(2.0 * std::sqrt(2.0));
  const Interval ip(p);
  const KPoly k = KPoly::var();
  const KPoly omk = KPoly::constant(1.0) - k;
  const KPoly ring = k * 2.0 + omk * (Interval(4.0) - b);
  const KPoly A = (k * k) * (ring * ring) * (-0.5);
  const KPoly t1 = omk * (omk * (ip - 2.0) + KPoly::constant(1.0));
  const KPoly t2 = k * (b - 2.0) + KPoly::constant(2.0);
  const KPoly first = (t1 * (t2 * t2)) * (-1.0);
  const KPoly second = (k * k) * (omk * (b - 4.0) - k * 2.0) *
                       (omk * ((b - 4.0) * (ip - 2.0)) + k * ((b - 1.0) * 2.0)) * 0.5;
  const KPoly B = first + second;
  return A * gamma + B;
}

KPoly h_factor_poly(double p) {
  // f(kappa, p, 1) factors exactly as kappa (1-kappa) h(kappa, p); the
  // coefficients below are that exact quotient (b = 2 sqrt 2 enclosed).
  const Interval b = Interval::around(2.0 * std::sqrt(2.0));
  const Interval b2 = square(b);
  const Interval ip(p);
  const Interval p1 = square(ip + 1.0);
  const Interval h0 = (Interval(3.0) - b) * (ip - 1.0) * 4.0;
  const Interval h1 =
      -(b2 * 0.25) * p1 + b * (square(ip) + ip * 2.0 - 1.0) * 2.0 - square(ip) * 4.0;
  const Interval h2 = (b2 * 0.25) * p1 - b * (square(ip) - ip * 2.0 + 3.0) * 2.0 +
                      square(ip) * 4.0 - ip * 12.0 + Interval(12.0);
  return KPoly({h0, h1, h2});
}

std::pair<double, bool> certified_poly_min(const KPoly& poly, double stop_below, int max_depth) {
  struct Item {
    double lo, hi;
    int depth;
  };
  std::vector<Item> stack{{0.0, 1.0, 0}};
  double global = kInf;
  bool decided = true;
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const double bound = cell_lower_bound(poly, Interval(it.lo, it.hi), true);
    if (bound >= stop_below) {
      global = std::min(global, bound);
      continue;
    }
    if (it.depth >= max_depth) {
      global = std::min(global, bound);
      decided = false;
      continue;
    }
    const double mid = 0.5 * (it.lo + it.hi);
    stack.push_back({mid, it.hi, it.depth + 1});
    stack.push_back({it.lo, mid, it.depth + 1});
  }
  return {global, decided};
}

namespace {

std::vector<double> linear_range(double lo, double hi, double step) {
  std::vector<double> out;
  if (!(step > 0.0) || hi < lo) return out;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
  return out;
}

// Sampled (not certified) minimum of the three conditions over kappa,
// through the c-coefficient route so scans cross-exercise both code paths.
void sampled_min(const WeightRecipe& w, const ParamSet& ps, int resolution, double* min_value,
                 double* kappa_at_min) {
  double best = kInf, arg = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double k = static_cast<double>(i) / (resolution - 1);
    const SweepPoint pt = make_sweep_point(k, ps);
    const CCoeffs c = c_coefficients(w, ps, pt);
    const QuadMatrix m = assemble_matrix(c, pt);
    const double v = std::min({2.0 * c.c1 + c.c2, c.c3, m.det()});
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  *min_value = best;
  *kappa_at_min = arg;
}

}  // namespace

RegionMap scan_region(const ScanRequest& req) {
  RegionMap map;
  map.p_values = linear_range(req.p_lo, req.p_hi, req.p_step);
  map.gamma_values = linear_range(req.gamma_lo, req.gamma_hi, req.gamma_step);
  if (map.p_values.empty() || map.gamma_values.empty()) return map;

  const size_t np = map.p_values.size();
  const size_t ng = map.gamma_values.size();
  map.points.resize(np * ng);

  const int res = std::max(3, req.kappa_resolution);
  parallel_for(np * ng, req.workers, [&](size_t idx) {
    const double p = map.p_values[idx % np];
    const double gamma = map.gamma_values[idx / np];
    RegionPoint pt;
    pt.p = p;
    pt.gamma = gamma;
    ParamSet ps;
    ps.p = p;
    ps.gamma = gamma;
    WeightRecipe w;
    bool have_weights = true;
    if (req.s_policy.mode == SPolicy::Mode::w22) {
      ps.s = 2.0 - p;
      w = w22_weights(ps);
    } else {
      ps.s = req.s_policy.s;
      if (admissible_s(p, gamma, ps.s) == SBranch::inadmissible) {
        have_weights = false;
      } else {
        w = select_weights_general_s(p, gamma, ps.s);
      }
    }
    if (!have_weights) {
      pt.verdict = Verdict::inconclusive;
      pt.margin = std::numeric_limits<double>::quiet_NaN();
      pt.kappa_star = std::numeric_limits<double>::quiet_NaN();
      pt.min_sampled = std::numeric_limits<double>::quiet_NaN();
      map.points[idx] = pt;
      return;
    }
    CertifyOptions opts = req.certify_opts;
    opts.keep_cells = false;
    const Certificate cert = certify(w, ps, req.target_margin, opts);
    pt.verdict = cert.verdict;
    sampled_min(w, ps, res, &pt.min_sampled, &pt.kappa_star);
    if (cert.verdict == Verdict::reject) {
      // certified upper bound at the sampled argmin (sharper than the
      // bisection's first witness)
      const KappaConditions cond = build_kappa_conditions(w, ps);
      double up = kInf;
      for (int c = 0; c < 3; ++c) up = std::min(up, cond.by_index(c).eval(pt.kappa_star).hi);
      pt.margin = std::min(up, cert.witness ? cert.witness->upper_bound : up);
    } else {
      pt.margin = cert.margin;
    }
    map.points[idx] = pt;
  });

  if (req.with_figures && req.s_policy.mode == SPolicy::Mode::w22) {
    FigureMatrix f1, fg;
    f1.gamma = 1.0;
    fg.gamma = -1.0;
    for (int i = 0; i < res; ++i) {
      const double k = static_cast<double>(i) / (res - 1);
      f1.kappas.push_back(k);
      fg.kappas.push_back(k);
    }
    f1.ps = map.p_values;
    fg.ps = map.p_values;
    f1.values.resize(np * res);
    fg.values.resize(np * res);
    for (size_t ipp = 0; ipp < np; ++ipp)
      for (int ik = 0; ik < res; ++ik) {
        const double k = f1.kappas[ik];
        f1.values[ipp * res + ik] = det_f(k, map.p_values[ipp], 1.0);
        fg.values[ipp * res + ik] = det_f_diagnostics(k, map.p_values[ipp], 0.0).f_gamma(-1.0);
      }

    SliceCheck sc;
    sc.fgamma_nonpositive = true;
    sc.f_nonneg = true;
    sc.fgamma_upper_bound = -kInf;
    sc.h_lower_bound = kInf;
    for (double p : map.p_values) {
      // gamma = -1 slice: certified max of f_gamma through min of -f_gamma
      const KPoly neg_fg = fgamma_slice_poly(p, -1.0) * (-1.0);
      const auto [lb_fg, dec_fg] = certified_poly_min(neg_fg, 0.05);
      sc.fgamma_nonpositive = sc.fgamma_nonpositive && dec_fg && lb_fg > 0.0;
      sc.fgamma_upper_bound = std::max(sc.fgamma_upper_bound, -lb_fg);
      // gamma = 1 slice: f = k(1-k) h, h certified positive
      const auto [lb_h, dec_h] = certified_poly_min(h_factor_poly(p), 0.25);
      sc.f_nonneg = sc.f_nonneg && dec_h && lb_h > 0.0;
      sc.h_lower_bound = std::min(sc.h_lower_bound, lb_h);
    }
    // sampled checks of the monotonicity-in-gamma argument (A <= 0)
    sc.mono_violation = -kInf;
    sc.fgamma_max_sampled = -kInf;
    for (size_t ipp = 0; ipp < np; ++ipp)
      for (double gamma : map.gamma_values)
        for (int ik = 0; ik < res; ++ik) {
          const double k = f1.kappas[ik];
          const double p = map.p_values[ipp];
          sc.mono_violation =
              std::max(sc.mono_violation, det_f(k, p, 1.0) - det_f(k, p, gamma));
          sc.fgamma_max_sampled =
              std::max(sc.fgamma_max_sampled, det_f_diagnostics(k, p, gamma).f_gamma(gamma));
        }
    map.figure_f_at_gamma1 = std::move(f1);
    map.figure_fgamma_at_gammam1 = std::move(fg);
    map.slice_check = sc;
  }
  return map;
}

std::string RegionMap::to_csv() const {
  std::ostringstream os;
  os << "p,gamma,kappa_min_location,min_value,verdict\n";
  os.precision(17);
  for (const auto& pt : points) {
    os << pt.p << ',' << pt.gamma << ',' << pt.kappa_star << ',' << pt.min_sampled << ','
       << to_string(pt.verdict) << '\n';
  }
  return os.str();
}

}  // namespace pparab
