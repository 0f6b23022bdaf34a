#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace pparab {

inline double step_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double step_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

/// Closed interval with outward rounding. Instead of switching the FPU
/// rounding mode, every operation widens its correctly-rounded result by one
/// ulp per side, which keeps the enclosure valid at the cost of a slightly
/// wider interval.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  explicit Interval(double v) : lo(v), hi(v) {}
  Interval(double l, double h) : lo(l), hi(h) {}

  static Interval hull(double a, double b) {
    return {std::min(a, b), std::max(a, b)};
  }
  /// Two-sided enclosure of a value known only through a rounded double.
  static Interval around(double v) { return {step_down(v), step_up(v)}; }

  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
};

inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator+(Interval a, Interval b) {
  return {step_down(a.lo + b.lo), step_up(a.hi + b.hi)};
}

inline Interval operator-(Interval a, Interval b) {
  return {step_down(a.lo - b.hi), step_up(a.hi - b.lo)};
}

inline Interval operator*(Interval a, Interval b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return {step_down(std::min({p1, p2, p3, p4})), step_up(std::max({p1, p2, p3, p4}))};
}

inline Interval operator+(Interval a, double b) { return a + Interval(b); }
inline Interval operator+(double a, Interval b) { return Interval(a) + b; }
inline Interval operator-(Interval a, double b) { return a - Interval(b); }
inline Interval operator-(double a, Interval b) { return Interval(a) - b; }
inline Interval operator*(Interval a, double b) { return a * Interval(b); }
inline Interval operator*(double a, Interval b) { return Interval(a) * b; }

/// Tighter than a*a because the two factors are the same number.
inline Interval square(Interval a) {
  if (a.lo >= 0.0) return {step_down(a.lo * a.lo), step_up(a.hi * a.hi)};
  if (a.hi <= 0.0) return {step_down(a.hi * a.hi), step_up(a.lo * a.lo)};
  const double m = std::max(-a.lo, a.hi);
  return {0.0, step_up(m * m)};
}

inline Interval abs(Interval a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return -a;
  return {0.0, std::max(-a.lo, a.hi)};
}

/// Polynomial in one variable with interval coefficients, index = degree.
/// This is the workhorse of the kappa-sweep certifier: the three
/// positive-definiteness conditions are built from such polynomials by the
/// same algebra that defines them, so the resulting enclosures are rigorous
/// for the actual floating-point weight values in use.
struct KPoly {
  std::vector<Interval> c;

  KPoly() = default;
  static KPoly constant(Interval v) { return KPoly{{v}}; }
  static KPoly constant(double v) { return KPoly{{Interval(v)}}; }
  static KPoly var() { return KPoly{{Interval(0.0), Interval(1.0)}}; }
  explicit KPoly(std::vector<Interval> coeffs) : c(std::move(coeffs)) {}

  int degree() const { return static_cast<int>(c.size()) - 1; }

  Interval eval(Interval x) const {
    if (c.empty()) return Interval(0.0);
    Interval acc = c.back();
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) acc = acc * x + c[k];
    return acc;
  }
  Interval eval(double x) const { return eval(Interval(x)); }

  KPoly derivative() const {
    if (c.size() <= 1) return KPoly::constant(0.0);
    std::vector<Interval> d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
    return KPoly(std::move(d));
  }

  /// Upper bound for |p'| over the cell, used as a Lipschitz constant.
  double lipschitz_bound(Interval cell) const {
    const Interval d = derivative().eval(cell);
    return d.mag();
  }
};

inline KPoly operator+(const KPoly& a, const KPoly& b) {
  std::vector<Interval> c(std::max(a.c.size(), b.c.size()), Interval(0.0));
  for (size_t k = 0; k < a.c.size(); ++k) c[k] = c[k] + a.c[k];
  for (size_t k = 0; k < b.c.size(); ++k) c[k] = c[k] + b.c[k];
  return KPoly(std::move(c));
}

inline KPoly operator-(const KPoly& a, const KPoly& b) {
  std::vector<Interval> c(std::max(a.c.size(), b.c.size()), Interval(0.0));
  for (size_t k = 0; k < a.c.size(); ++k) c[k] = c[k] + a.c[k];
  for (size_t k = 0; k < b.c.size(); ++k) c[k] = c[k] - b.c[k];
  return KPoly(std::move(c));
}

inline KPoly operator*(const KPoly& a, const KPoly& b) {
  if (a.c.empty() || b.c.empty()) return KPoly::constant(0.0);
  std::vector<Interval> c(a.c.size() + b.c.size() - 1, Interval(0.0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) c[i + j] = c[i + j] + a.c[i] * b.c[j];
  return KPoly(std::move(c));
}

inline KPoly operator*(const KPoly& a, Interval s) { return a * KPoly::constant(s); }
inline KPoly operator*(const KPoly& a, double s) { return a * KPoly::constant(s); }
inline KPoly operator*(double s, const KPoly& a) { return a * KPoly::constant(s); }

/// Certified lower bound for the polynomial over the cell.
/// `lipschitz`: endpoint enclosures minus slope * half-width;
/// otherwise a direct interval evaluation over the cell.
inline double cell_lower_bound(const KPoly& p, Interval cell, bool lipschitz) {
  if (!lipschitz) return p.eval(cell).lo;
  const double ends = std::min(p.eval(cell.lo).lo, p.eval(cell.hi).lo);
  const Interval penalty = Interval(0.5) * Interval(cell.width()) * Interval(p.lipschitz_bound(cell));
  return (Interval(ends) - penalty).lo;
}

}  // namespace pparab
