#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pparab/interval.hpp"
#include "pparab/params.hpp"

namespace pparab {

/// Coefficients of the weighted divergence-structure sum at one sweep point:
///   c1 = w1 + w3 k,   c2 = (w1(p-2+s) + w3(p-4+s)k) th,
///   c3 = w2 + w4 k,   c4 = (w2(p-2+s-g) + w4(p-4+s-g)k) th.
struct CCoeffs {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
};

CCoeffs c_coefficients(const WeightRecipe& w, const ParamSet& params, const SweepPoint& pt);

/// Symmetric 2x2 matrix of the quadratic form in (Lap_T u, InfLap^N u):
///   m11 = c3, m12 = (c3 P + (c3+c4) - (2c1+c2))/2, m22 = (c3+c4) P.
struct QuadMatrix {
  double m11 = 0.0;
  double m12 = 0.0;
  double m22 = 0.0;

  double det() const { return m11 * m22 - m12 * m12; }
  double trace() const { return m11 + m22; }
  double lambda_min() const {
    const double half_diff = 0.5 * (m11 - m22);
    return 0.5 * (m11 + m22) - std::sqrt(half_diff * half_diff + m12 * m12);
  }
  double quad_form(double x1, double x2) const {
    return m11 * x1 * x1 + 2.0 * m12 * x1 * x2 + m22 * x2 * x2;
  }
};

QuadMatrix assemble_matrix(const CCoeffs& c, const SweepPoint& pt);

/// The explicit two-factor polynomial det(M) = f(kappa, p, gamma) of the
/// fixed W22 recipe (a = 1-gamma, b = 2 sqrt 2), coded as displayed rather
/// than through the matrix, so the two routes cross-check each other.
double det_f(double kappa, double p, double gamma);

/// f is quadratic in gamma, so f_gamma = A gamma + B with
/// A = -(1/2) k^2 (2k + (4-b)(1-k))^2 <= 0 and B independent of gamma.
struct DetDiagnostics {
  double f_value = 0.0;
  double A = 0.0;
  double B = 0.0;
  double f_gamma(double gamma) const { return A * gamma + B; }
};

DetDiagnostics det_f_diagnostics(double kappa, double p, double gamma);

/// The three uniform positive-definiteness conditions as rigorous
/// polynomials in kappa (interval coefficients, built by the defining
/// algebra): 2c1+c2 >= c, c3 >= c, det(M) >= c.
struct KappaConditions {
  KPoly two_c1_plus_c2;
  KPoly c3;
  KPoly det;

  static constexpr const char* kNames[3] = {"2c1+c2", "c3", "det(M)"};
  const KPoly& by_index(int k) const { return k == 0 ? two_c1_plus_c2 : (k == 1 ? c3 : det); }
};

KappaConditions build_kappa_conditions(const WeightRecipe& w, const ParamSet& params);

enum class CertifyMethod { lipschitz_sweep, interval_sweep };
enum class Verdict { accept, reject, inconclusive };

const char* to_string(CertifyMethod m);
const char* to_string(Verdict v);

/// One kappa-cell of a certificate with its verified lower bound for
/// min{2c1+c2, c3, det(M)}.
struct CertCell {
  double lo = 0.0;
  double hi = 0.0;
  double bound = 0.0;
};

/// Rejection evidence: a kappa at which one condition has a certified upper
/// bound below the target margin.
struct CertWitness {
  double kappa = 0.0;
  std::string condition;
  double upper_bound = 0.0;
};

/// Machine-checkable record of a uniform positive-definiteness sweep over
/// kappa in [0,1]. On accept, `margin` is a certified uniform lower bound
/// for min{2c1+c2, c3, det(M)}; the cells cover [0,1] without gaps.
struct Certificate {
  ParamSet params;
  WeightRecipe weights;
  CertifyMethod method = CertifyMethod::lipschitz_sweep;
  Verdict verdict = Verdict::inconclusive;
  double target_margin = 0.0;
  double margin = 0.0;
  int max_depth = 0;
  std::vector<CertCell> cells;
  std::optional<CertWitness> witness;
  std::string lambda_note;

  std::string to_json() const;
};

struct CertifyOptions {
  CertifyMethod method = CertifyMethod::lipschitz_sweep;
  int max_depth = 44;
  bool keep_cells = true;  ///< region scans drop the cell lists to save memory
};

/// Adaptively bisects kappa in [0,1] and bounds min{2c1+c2, c3, det(M)}
/// from below on each cell. Accepts iff the global certified bound reaches
/// `target_margin` > 0; rejects with a witness if some kappa has a certified
/// value below the target; otherwise inconclusive (bounded depth).
Certificate certify(const WeightRecipe& w, const ParamSet& params, double target_margin,
                    const CertifyOptions& opts = {});

/// Roots in w1 of det(M(theta)) = 0 for the general-s recipe
/// (w2 = p+s, w3 = w4 = 0):
///   w1_pm = (p+s)/(P+S) (sqrt(P+S-K) -/+ sqrt(P))^2,
/// plus the closed-form extrema over theta in [0,1] and, when the sign
/// condition admits them, the stationary points theta1/theta2.
struct RootAnalysis {
  ParamSet params;
  double sup_w1_minus = 0.0;  ///< (sqrt(p-1+s-gamma) - sqrt(p-1))^2
  double inf_w1_plus = 0.0;   ///< min{2(p+s), (sqrt(p-1+s-gamma) + sqrt(p-1))^2}
  std::optional<double> theta1;  ///< stationary point of w1_minus (sign cond > 0)
  std::optional<double> theta2;  ///< stationary point of w1_plus (sign cond < 0)
  double numeric_sup_w1_minus = 0.0;  ///< dense-extremization cross-check
  double numeric_inf_w1_plus = 0.0;

  double w1_minus(double theta) const;
  double w1_plus(double theta) const;
};

/// Lower/upper root at one theta. Requires s > gamma + 1 - p (which keeps
/// P+S-K positive); throws std::invalid_argument otherwise.
std::pair<double, double> w1_bounds(double theta, const ParamSet& params);

/// Closed-form extrema cross-validated against dense numerical
/// extremization over theta in [0,1] (relative tolerance 1e-8; a mismatch
/// throws std::logic_error).
RootAnalysis extremal_bounds(const ParamSet& params);

/// Which admissible s-branch (if any) a triple satisfies:
///   optimal: s > max{gamma+1-p, -2-gamma}
///   second:  -2-gamma >= s > max{gamma+1-p, 2p-4-gamma-2 sqrt(2(p-1)(p-2-gamma))}
enum class SBranch { optimal_branch, second_branch, inadmissible };

const char* to_string(SBranch b);

SBranch admissible_s(double p, double gamma, double s);

/// Direct evaluation of the window condition 2(p+s) > (sqrt(p-1+s-gamma) -
/// sqrt(p-1))^2; equivalent to admissible_s != inadmissible under
/// s > gamma+1-p.
bool restriction_s_holds(double p, double gamma, double s);

/// Picks the general-s weights w2 = p+s, w3 = w4 = 0,
/// w1 = sup w1_minus + eta with eta = min(window, 1)/2, halving eta on
/// certify rejection (at most 40 times). Throws std::invalid_argument on an
/// inadmissible triple and std::runtime_error if no eta certifies.
WeightRecipe select_weights_general_s(double p, double gamma, double s,
                                      double target_margin = 1e-8);

/// Policy for the s exponent during a region scan.
struct SPolicy {
  enum class Mode { w22, fixed_s } mode = Mode::w22;
  double s = 0.0;
};

struct RegionPoint {
  double p = 0.0;
  double gamma = 0.0;
  Verdict verdict = Verdict::inconclusive;
  double margin = 0.0;       ///< certified bound (accept) or witness upper bound (reject)
  double kappa_star = 0.0;   ///< sampled argmin / rejection witness
  double min_sampled = 0.0;  ///< sampled min over kappa (diagnostic, not certified)
};

/// Dense (kappa x p) matrix of values at a fixed gamma, gnuplot-ready.
struct FigureMatrix {
  double gamma = 0.0;
  std::vector<double> kappas;
  std::vector<double> ps;
  std::vector<double> values;  ///< row-major: [ip * kappas.size() + ik]

  double at(size_t ip, size_t ik) const { return values[ip * kappas.size() + ik]; }
};

/// Certified facts about the two boundary slices of the W22 recipe:
/// f_gamma(.,.,-1) <= bound < 0 and f(.,.,1) = k(1-k) h with h >= bound > 0,
/// plus sampled checks of the monotonicity-in-gamma implication.
struct SliceCheck {
  bool fgamma_nonpositive = false;
  double fgamma_upper_bound = 0.0;   ///< certified max of f_gamma on gamma = -1 slice
  bool f_nonneg = false;
  double h_lower_bound = 0.0;        ///< certified min of f/(k(1-k)) on gamma = 1 slice
  double mono_violation = 0.0;       ///< max sampled f(k,p,1) - f(k,p,gamma); <= 0 expected
  double fgamma_max_sampled = 0.0;   ///< max sampled f_gamma over the scanned box
};

struct RegionMap {
  std::vector<RegionPoint> points;  ///< gamma-major: [ig * n_p + ip]
  std::vector<double> p_values;
  std::vector<double> gamma_values;
  std::optional<FigureMatrix> figure_f_at_gamma1;
  std::optional<FigureMatrix> figure_fgamma_at_gammam1;
  std::optional<SliceCheck> slice_check;

  std::string to_csv() const;
};

struct ScanRequest {
  double p_lo = 3.0, p_hi = 40.0, p_step = 0.5;
  double gamma_lo = -0.95, gamma_hi = 0.95, gamma_step = 0.05;
  SPolicy s_policy;
  double target_margin = 1e-4;
  int kappa_resolution = 101;  ///< kappa samples for figures / argmin reporting
  bool with_figures = false;   ///< W22 recipe only: emit the two boundary slices
  int workers = 0;             ///< 0 = hardware concurrency
  CertifyOptions certify_opts{};
};

/// Certifies every grid point of the (p,gamma) rectangle and optionally the
/// two boundary-slice landscapes. Results are deterministic regardless of
/// worker count. Empty ranges yield an empty map.
RegionMap scan_region(const ScanRequest& req);

/// Certified lower bound of f_gamma's negation on the gamma = -1 slice and
/// of h = f/(kappa(1-kappa)) on the gamma = 1 slice, at a fixed p. The
/// polynomials carry two-sided enclosures of b = 2 sqrt 2, so the bounds
/// hold for the exact-irrational coefficient as well.
KPoly fgamma_slice_poly(double p, double gamma);
KPoly h_factor_poly(double p);

/// Certified bound of min(poly) over [0,1]; pair = (bound, decided).
std::pair<double, bool> certified_poly_min(const KPoly& poly, double stop_below,
                                           int max_depth = 40);

}  // namespace pparab
