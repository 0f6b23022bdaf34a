#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "pparab/certifier.hpp"

using namespace pparab;

namespace {

ParamSet make_params(double p, double gamma, double s) {
  ParamSet ps;
  ps.p = p;
  ps.gamma = gamma;
  ps.s = s;
  return ps;
}

double ulp_of(double x) { return std::nextafter(std::fabs(x), 1e300) - std::fabs(x); }

}  // namespace

TEST_CASE("c coefficients: w22 recipe substitutions") {
  ParamSet ps = make_params(3.0, 0.0, 2.0 - 3.0);
  const WeightRecipe w = w22_weights(ps);

  // kappa = 0 (theta = 1): p-2+s = 0 kills c2; c4 = 2(p-2+s-gamma) = -2 gamma = 0
  const CCoeffs c0 = c_coefficients(w, ps, make_sweep_point(0.0, ps));
  CHECK(c0.c1 == 3.0);
  CHECK(c0.c2 == 0.0);
  CHECK(c0.c3 == 2.0);
  CHECK(c0.c4 == 0.0);

  // kappa = 1 (theta = 0): the theta factor kills c2 and c4 for any recipe
  const CCoeffs c1 = c_coefficients(w, ps, make_sweep_point(1.0, ps));
  CHECK(c1.c2 == 0.0);
  CHECK(c1.c4 == 0.0);

  // 2c1+c2 = 2(w1 + w3 kappa^2) for the s = 2-p recipe
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uk(0.0, 1.0), up(3.0, 40.0), ug(-0.95, 0.95);
  for (int trial = 0; trial < 5000; ++trial) {
    ParamSet q = make_params(up(rng), ug(rng), 0.0);
    q.s = 2.0 - q.p;
    const WeightRecipe wq = w22_weights(q);
    const double k = uk(rng);
    const CCoeffs c = c_coefficients(wq, q, make_sweep_point(k, q));
    const double closed = 2.0 * (wq.w1 + wq.w3 * k * k);
    CHECK(2.0 * c.c1 + c.c2 == doctest::Approx(closed).epsilon(1e-13));
  }
}

TEST_CASE("assemble_matrix: endpoint examples and degenerate weights") {
  ParamSet ps = make_params(3.0, 0.0, -1.0);
  const WeightRecipe w = w22_weights(ps);

  const SweepPoint at0 = make_sweep_point(0.0, ps);
  const QuadMatrix m0 = assemble_matrix(c_coefficients(w, ps, at0), at0);
  CHECK(m0.m11 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m0.m12 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m0.m22 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(m0.det() == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(m0.det() == doctest::Approx(det_f(0.0, 3.0, 0.0)).epsilon(1e-13));

  const SweepPoint at1 = make_sweep_point(1.0, ps);
  const QuadMatrix m1 = assemble_matrix(c_coefficients(w, ps, at1), at1);
  const double b = 2.0 * std::sqrt(2.0), a = 1.0;
  CHECK(m1.det() == doctest::Approx(b * b - (b - a) * (b - a)).epsilon(1e-13));
  CHECK(m1.det() == doctest::Approx(4.0 * std::sqrt(2.0) - 1.0).epsilon(1e-13));

  WeightRecipe zero;
  const QuadMatrix mz = assemble_matrix(c_coefficients(zero, ps, at0), at0);
  CHECK(mz.m11 == 0.0);
  CHECK(mz.m12 == 0.0);
  CHECK(mz.m22 == 0.0);
  CHECK(mz.det() == 0.0);
}

TEST_CASE("det_f: endpoint identities") {
  // exactly representable p keep the endpoint identities bit-exact
  for (double p : {3.0, 3.5, 7.0, 12.25, 40.0}) {
    for (double gamma : {-0.5, 0.0, 0.25}) {
      CHECK(det_f(0.0, p, gamma) == 4.0 * (1.0 - gamma) * (p - 1.0));
      const double b = 2.0 * std::sqrt(2.0), a = 1.0 - gamma;
      CHECK(det_f(1.0, p, gamma) == doctest::Approx(b * b - (b - a) * (b - a)).epsilon(4e-16));
    }
  }
  CHECK(det_f(1.0, 3.0, 0.0) == doctest::Approx(4.0 * std::sqrt(2.0) - 1.0).epsilon(1e-15));
  // general p within a few ulps
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> up(3.0, 40.0), ug(-0.95, 0.95);
  for (int trial = 0; trial < 20000; ++trial) {
    const double p = up(rng), gamma = ug(rng);
    const double expect = 4.0 * (1.0 - gamma) * (p - 1.0);
    CHECK(std::fabs(det_f(0.0, p, gamma) - expect) <= 8.0 * ulp_of(expect));
  }
}

TEST_CASE("det_f diagnostics: f_gamma = A gamma + B decomposition") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uk(0.0, 1.0), up(3.0, 40.0), ug(-0.9, 0.9);
  for (int trial = 0; trial < 20000; ++trial) {
    const double k = uk(rng), p = up(rng), gamma = ug(rng);
    const DetDiagnostics d = det_f_diagnostics(k, p, gamma);
    CHECK(d.A <= 0.0);
    // f is quadratic in gamma, so the centered difference of f is exact
    const double dg = 1e-3;
    const double fd = (det_f(k, p, gamma + dg) - det_f(k, p, gamma - dg)) / (2.0 * dg);
    CHECK(fd == doctest::Approx(d.f_gamma(gamma)).epsilon(1e-7));
  }
  // kappa = 0: A vanishes and B = -4(p-1), so f_gamma <= 0 there
  for (double p : {3.0, 10.0, 40.0}) {
    const DetDiagnostics d = det_f_diagnostics(0.0, p, 0.3);
    CHECK(d.A == 0.0);
    CHECK(d.B == doctest::Approx(-4.0 * (p - 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("algebraic consistency: det_f vs assembled matrix on 1e5 samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uk(0.0, 1.0), up(3.0, 40.0), ug(-0.95, 0.95);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    const double k = uk(rng), p = up(rng), gamma = ug(rng);
    ParamSet ps = make_params(p, gamma, 2.0 - p);
    const SweepPoint pt = make_sweep_point(k, ps);
    const CCoeffs c = c_coefficients(w22_weights(ps), ps, pt);
    const QuadMatrix m = assemble_matrix(c, pt);
    const double fv = det_f(k, p, gamma);
    const double rel = std::fabs(m.det() - fv) / std::max(std::fabs(fv), 1e-30);
    worst_rel = std::max(worst_rel, rel);
    // ulp-scale agreement relative to the dominant term: each route chains
    // about ten roundings, so a few tens of ulps is the attainable bound
    const double dominant =
        std::fabs(m.m11 * m.m22) + std::fabs(m.m12 * m.m12) + std::fabs(fv);
    CHECK(std::fabs(m.det() - fv) <= 32.0 * ulp_of(dominant));
  }
  CHECK(worst_rel <= 1e-12);
}

TEST_CASE("certify: accepts the (3,0) point with target 1e-3") {
  ParamSet ps = make_params(3.0, 0.0, -1.0);
  const Certificate cert = certify(w22_weights(ps), ps, 1e-3);
  CHECK(cert.verdict == Verdict::accept);
  CHECK(cert.margin >= 1e-3);
  // cells cover [0,1] with no gaps
  REQUIRE(!cert.cells.empty());
  CHECK(cert.cells.front().lo == 0.0);
  CHECK(cert.cells.back().hi == 1.0);
  for (size_t i = 1; i < cert.cells.size(); ++i)
    CHECK(cert.cells[i].lo == cert.cells[i - 1].hi);

  // soundness: sampled values never undercut the certified margin
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uk(0.0, 1.0);
  const WeightRecipe w = w22_weights(ps);
  for (int trial = 0; trial < 1000000; ++trial) {
    const SweepPoint pt = make_sweep_point(uk(rng), ps);
    const CCoeffs c = c_coefficients(w, ps, pt);
    const QuadMatrix m = assemble_matrix(c, pt);
    const double v = std::min({2.0 * c.c1 + c.c2, c.c3, m.det()});
    REQUIRE(v >= cert.margin);
  }
}

TEST_CASE("certify: interval sweep agrees with the lipschitz sweep") {
  ParamSet ps = make_params(17.5, 0.45, 2.0 - 17.5);
  CertifyOptions opts;
  opts.method = CertifyMethod::interval_sweep;
  const Certificate ci = certify(w22_weights(ps), ps, 1e-4, opts);
  const Certificate cl = certify(w22_weights(ps), ps, 1e-4);
  CHECK(ci.verdict == Verdict::accept);
  CHECK(cl.verdict == Verdict::accept);
  CHECK(ci.margin >= 1e-4);
  CHECK(cl.margin >= 1e-4);
  // both margins are sound lower bounds for the sampled minimum
  double sampled = 1e300;
  const WeightRecipe w = w22_weights(ps);
  for (int i = 0; i <= 4096; ++i) {
    const SweepPoint pt = make_sweep_point(i / 4096.0, ps);
    const CCoeffs c = c_coefficients(w, ps, pt);
    sampled = std::min(sampled,
                       std::min({2.0 * c.c1 + c.c2, c.c3, assemble_matrix(c, pt).det()}));
  }
  CHECK(ci.margin <= sampled);
  CHECK(cl.margin <= sampled);
}

TEST_CASE("certify: boundary case (3,1) rejects (f(0) = 0 < target)") {
  ParamSet ps = make_params(3.0, 1.0, -1.0);
  const Certificate cert = certify(w22_weights(ps), ps, 1e-3);
  CHECK(cert.verdict == Verdict::reject);
  REQUIRE(cert.witness.has_value());
  CHECK(cert.witness->kappa < 1e-2);
  CHECK(cert.witness->upper_bound < 1e-3);
}

TEST_CASE("certify: det(M) negative for large p, with witness") {
  ParamSet ps = make_params(130.0, 0.0, 2.0 - 130.0);
  const Certificate cert = certify(w22_weights(ps), ps, 1e-3);
  CHECK(cert.verdict == Verdict::reject);
  REQUIRE(cert.witness.has_value());
  CHECK(cert.witness->condition == "det(M)");
  CHECK(cert.witness->upper_bound < 0.0);
  // the witness value is certified: the plain evaluation agrees
  CHECK(det_f(cert.witness->kappa, ps.p, ps.gamma) <= cert.witness->upper_bound + 1e-9);
}

TEST_CASE("certify: a target at the exact attained minimum is inconclusive") {
  // min{2c1+c2, c3, det} = c3(0) = 2 exactly at kappa = 0; no cell touching 0
  // can certify >= 2 with outward rounding and no point can refute it, so the
  // bounded-depth sweep must return the third verdict
  ParamSet ps = make_params(3.0, 0.0, -1.0);
  const Certificate cert = certify(w22_weights(ps), ps, 2.0);
  CHECK(cert.verdict == Verdict::inconclusive);
  CHECK(!cert.witness.has_value());
  CHECK(cert.margin < 2.0);
  CHECK(cert.margin > 2.0 - 1e-9);
}

TEST_CASE("accepted certificates imply quadratic-form positivity") {
  ParamSet ps = make_params(7.0, -0.25, 2.0 - 7.0);
  const Certificate cert = certify(w22_weights(ps), ps, 1e-3);
  REQUIRE(cert.verdict == Verdict::accept);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uk(0.0, 1.0), ux(-5.0, 5.0);
  for (int trial = 0; trial < 20000; ++trial) {
    const SweepPoint pt = make_sweep_point(uk(rng), ps);
    const QuadMatrix m = assemble_matrix(c_coefficients(cert.weights, ps, pt), pt);
    const double lmin = m.lambda_min();
    CHECK(lmin > 0.0);
    const double x1 = ux(rng), x2 = ux(rng);
    const double norm2 = x1 * x1 + x2 * x2;
    CHECK(m.quad_form(x1, x2) >= lmin * norm2 - 1e-10 * std::max(1.0, norm2));
  }
}

TEST_CASE("w1_bounds: closed-form endpoints") {
  ParamSet ps = make_params(3.0, 0.0, 0.0);
  const auto [lo1, hi1] = w1_bounds(1.0, ps);
  CHECK(lo1 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(hi1 == doctest::Approx(8.0).epsilon(1e-13));
  const auto [lo0, hi0] = w1_bounds(0.0, ps);
  CHECK(lo0 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(hi0 == doctest::Approx(2.0 * (ps.p + ps.s)).epsilon(1e-13));
  CHECK_THROWS_AS(w1_bounds(0.5, make_params(2.0, 0.5, -1.0)), std::invalid_argument);
}

TEST_CASE("root window: sign(det M(theta)) matches w1 in/out of (w1-, w1+)") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> up(1.2, 40.0), ug(-0.95, 2.0), ut(0.0, 1.0),
      unit(0.05, 0.95), off(0.05, 1.0);
  int checked = 0;
  while (checked < 20000) {
    const double p = up(rng), gamma = ug(rng);
    const double s = gamma + 1.0 - p + std::uniform_real_distribution<double>(0.01, 6.0)(rng);
    ParamSet ps = make_params(p, gamma, s);
    const double theta = ut(rng);
    const auto [wlo, whi] = w1_bounds(theta, ps);
    REQUIRE(wlo <= whi);
    const double gap = whi - wlo;
    if (gap < 1e-6) continue;
    const auto det_at = [&](double w1v) {
      WeightRecipe w;
      w.w1 = w1v;
      w.w2 = p + s;
      const SweepPoint pt = make_sweep_point(1.0 - theta, ps);
      return assemble_matrix(c_coefficients(w, ps, pt), pt).det();
    };
    CHECK(det_at(wlo + unit(rng) * gap) > 0.0);
    CHECK(det_at(whi + off(rng) * gap) < 0.0);
    CHECK(det_at(wlo - off(rng) * gap) < 0.0);
    ++checked;
  }
}

TEST_CASE("extremal_bounds: closed forms and cross-validation") {
  {
    const RootAnalysis ra = extremal_bounds(make_params(3.0, 0.0, 0.0));
    CHECK(ra.sup_w1_minus == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ra.inf_w1_plus == doctest::Approx(6.0).epsilon(1e-13));
  }
  {
    // second-branch example: window nonempty
    const RootAnalysis ra = extremal_bounds(make_params(10.0, 0.0, -3.0));
    const double expect_lo = std::pow(std::sqrt(6.0) - 3.0, 2.0);
    CHECK(ra.sup_w1_minus == doctest::Approx(expect_lo).epsilon(1e-12));
    CHECK(ra.inf_w1_plus == doctest::Approx(14.0).epsilon(1e-12));
    CHECK(ra.inf_w1_plus > ra.sup_w1_minus);
  }
  {
    // s = gamma: w1_minus is identically zero (constant in theta)
    const RootAnalysis ra = extremal_bounds(make_params(5.0, 0.5, 0.5));
    for (double th : {0.0, 0.25, 0.5, 0.75, 1.0})
      CHECK(ra.w1_minus(th) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(ra.sup_w1_minus == doctest::Approx(0.0).epsilon(1e-13));
  }
  // numeric extremization agreement is asserted inside the call; sweep a box
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> up(1.5, 30.0), ug(-0.9, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    const double p = up(rng), gamma = ug(rng);
    const double s = gamma + 1.0 - p + std::uniform_real_distribution<double>(0.05, 5.0)(rng);
    CHECK_NOTHROW(extremal_bounds(make_params(p, gamma, s)));
  }
}

TEST_CASE("admissible_s: branch examples and the window equivalence") {
  CHECK(admissible_s(2.0, 0.0, 0.0) == SBranch::optimal_branch);
  CHECK(admissible_s(10.0, 0.0, -3.0) == SBranch::second_branch);
  CHECK(admissible_s(10.0, 0.0, -8.0) == SBranch::inadmissible);

  // under s > gamma+1-p: admissible <=> 2(p+s) > (sqrt(p-1+s-g) - sqrt(p-1))^2
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> up(1.1, 40.0), ug(-0.95, 3.0), us(0.001, 12.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double p = up(rng), gamma = ug(rng);
    const double s = gamma + 1.0 - p + us(rng);
    const bool adm = admissible_s(p, gamma, s) != SBranch::inadmissible;
    CHECK(adm == restriction_s_holds(p, gamma, s));
  }
}

TEST_CASE("select_weights_general_s: examples and certification") {
  {
    const WeightRecipe w = select_weights_general_s(3.0, 0.0, 0.0);
    CHECK(w.eta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.w1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.w2 == 3.0);
    CHECK(w.w3 == 0.0);
    CHECK(w.w4 == 0.0);
    const Certificate cert = certify(w, make_params(3.0, 0.0, 0.0), 1e-8);
    CHECK(cert.verdict == Verdict::accept);
  }
  {
    const WeightRecipe w = select_weights_general_s(2.0, 0.0, 0.0);
    CHECK(w.w1 == doctest::Approx(w.eta).epsilon(1e-13));
    CHECK(w.w2 == 2.0);
  }
  CHECK_THROWS_AS(select_weights_general_s(10.0, 0.0, -8.0), std::invalid_argument);
}

TEST_CASE("gamma = 1 slice: f factors as kappa (1-kappa) h with h certified positive") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uk(0.0, 1.0), up(3.0, 40.0);
  for (int trial = 0; trial < 20000; ++trial) {
    const double k = uk(rng), p = up(rng);
    const Interval h = h_factor_poly(p).eval(k);
    const double f = det_f(k, p, 1.0);
    const double recon_lo = k * (1.0 - k) * h.lo - 1e-10;
    const double recon_hi = k * (1.0 - k) * h.hi + 1e-10;
    CHECK(f >= recon_lo);
    CHECK(f <= recon_hi);
  }
  for (double p = 3.0; p <= 40.0; p += 0.5) {
    const auto [bound, decided] = certified_poly_min(h_factor_poly(p), 0.25);
    CHECK(decided);
    CHECK(bound > 0.0);
  }
}

TEST_CASE("gamma = -1 slice: f_gamma certified negative") {
  for (double p = 3.0; p <= 40.0; p += 0.5) {
    const KPoly poly = fgamma_slice_poly(p, -1.0);
    // the poly encloses the pointwise diagnostics values
    for (double k : {0.0, 0.21, 0.5, 0.77, 1.0}) {
      const double ref = det_f_diagnostics(k, p, 0.0).f_gamma(-1.0);
      CHECK(poly.eval(k).contains(ref));
    }
    const auto [bound, decided] = certified_poly_min(poly * (-1.0), 0.05);
    CHECK(decided);
    CHECK(bound > 0.0);
  }
}

TEST_CASE("scan_region: empty range gives an empty map") {
  ScanRequest req;
  req.p_lo = 5.0;
  req.p_hi = 3.0;
  const RegionMap map = scan_region(req);
  CHECK(map.points.empty());
}

TEST_CASE("scan_region: small w22 region accepts everywhere, figures present") {
  ScanRequest req;
  req.p_lo = 3.0;
  req.p_hi = 5.0;
  req.p_step = 1.0;
  req.gamma_lo = -0.5;
  req.gamma_hi = 0.5;
  req.gamma_step = 0.5;
  req.with_figures = true;
  req.workers = 2;
  const RegionMap map = scan_region(req);
  CHECK(map.points.size() == 9);
  for (const auto& pt : map.points) {
    CHECK(pt.verdict == Verdict::accept);
    CHECK(pt.margin >= req.target_margin);
    CHECK(pt.min_sampled >= pt.margin - 1e-12);
  }
  REQUIRE(map.slice_check.has_value());
  CHECK(map.slice_check->fgamma_nonpositive);
  CHECK(map.slice_check->f_nonneg);
  CHECK(map.slice_check->mono_violation <= 1e-10);
  CHECK(map.slice_check->fgamma_max_sampled < 0.0);
  REQUIRE(map.figure_f_at_gamma1.has_value());
  CHECK(map.figure_f_at_gamma1->values.size() ==
        map.p_values.size() * map.figure_f_at_gamma1->kappas.size());
}

TEST_CASE("scan_region: fixed-s policy marks inadmissible points") {
  ScanRequest req;
  req.p_lo = 2.0;
  req.p_hi = 10.0;
  req.p_step = 4.0;
  req.gamma_lo = 0.0;
  req.gamma_hi = 0.0;
  req.gamma_step = 1.0;
  req.s_policy.mode = SPolicy::Mode::fixed_s;
  req.s_policy.s = -3.0;
  req.target_margin = 1e-8;
  const RegionMap map = scan_region(req);
  REQUIRE(map.points.size() == 3);
  // p = 2: s = -3 <= gamma+1-p = -1 -> inadmissible
  CHECK(map.points[0].verdict == Verdict::inconclusive);
  CHECK(std::isnan(map.points[0].margin));
  // p = 6, 10: admissible, certified
  CHECK(map.points[1].verdict == Verdict::accept);
  CHECK(map.points[2].verdict == Verdict::accept);
}
