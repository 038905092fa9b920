#include "plyse/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace plyse {

namespace {

double poly(double a, double b, double c, double d, double x) { return ((a * x + b) * x + c) * x + d; }
double dpoly(double a, double b, double c, double x) { return (3.0 * a * x + 2.0 * b) * x + c; }

template <class F, class DF>
double polish(double x, F f, DF df) {
  for (int i = 0; i < 8; ++i) {
    double fx = f(x);
    double d = df(x);
    if (fx == 0.0 || d == 0.0 || !std::isfinite(d)) break;
    double nx = x - fx / d;
    if (!std::isfinite(nx) || std::abs(f(nx)) >= std::abs(fx)) break;
    x = nx;
  }
  return x;
}

// Roots of t^3 + P t + Q = 0 via the trigonometric form; empty when the
// arccos argument leaves [-1, 1].
std::vector<double> trig_depressed(double P, double Q) {
  if (!(P < 0.0)) return {};
  double arg = (3.0 * Q / (2.0 * P)) * std::sqrt(-3.0 / P);
  if (!(arg >= -1.0 && arg <= 1.0)) return {};
  double m = 2.0 * std::sqrt(-P / 3.0);
  double th = std::acos(arg) / 3.0;
  std::vector<double> t;
  for (int k = 0; k < 3; ++k) t.push_back(m * std::cos(th - 2.0 * std::numbers::pi * k / 3.0));
  return t;
}

std::vector<double> cardano_depressed(double P, double Q) {
  double disc = Q * Q / 4.0 + P * P * P / 27.0;
  if (disc >= 0.0) {
    double sq = std::sqrt(disc);
    return {std::cbrt(-Q / 2.0 + sq) + std::cbrt(-Q / 2.0 - sq)};
  }
  // Three real roots but the trig path rejected the argument through rounding.
  double m = 2.0 * std::sqrt(-P / 3.0);
  double arg = std::clamp((3.0 * Q / (2.0 * P)) * std::sqrt(-3.0 / P), -1.0, 1.0);
  double th = std::acos(arg) / 3.0;
  std::vector<double> t;
  for (int k = 0; k < 3; ++k) t.push_back(m * std::cos(th - 2.0 * std::numbers::pi * k / 3.0));
  return t;
}

}  // namespace

double e_max_u(const SystemParams& p) {
  return p.e_col_unit * p.r_max + p.p_max * p.T + p.kappa_c * p.f_max_u * p.f_max_u * p.f_max_u * p.T;
}

double q_max_bound(const SystemParams& p) { return p.V + p.r_max; }

std::vector<double> solve_cubic_real(double a, double b, double c, double d) {
  if (a == 0.0 || !std::isfinite(a)) throw CubicError("solve_cubic_real: leading coefficient must be nonzero");
  double B = b / a, C = c / a, D = d / a;
  double shift = B / 3.0;
  double P = C - B * B / 3.0;
  double Q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
  std::vector<double> t = trig_depressed(P, Q);
  if (t.empty()) t = cardano_depressed(P, Q);
  std::vector<double> x;
  for (double ti : t) {
    double xi = ti - shift;
    x.push_back(polish(xi, [&](double v) { return poly(a, b, c, d, v); }, [&](double v) { return dpoly(a, b, c, v); }));
  }
  std::sort(x.begin(), x.end());
  return x;
}

double cubic_eval(double A1, double A2, double A3, double x) {
  double u = A1 * x + A2;
  return x * u * u + A3;
}

std::vector<double> cubic_roots_trig(double A1, double A2, double A3) {
  if (A1 == 0.0 || !std::isfinite(A1)) throw CubicError("cubic_roots_trig: degenerate cubic (A1 = 0)");
  // Depressed form t^3 + P t + Q with x = t - 2 A2 / (3 A1); P and Q are
  // written directly in A1..A3 to avoid cancellation.
  double P = -A2 * A2 / (3.0 * A1 * A1);
  double Q = (-2.0 * A2 * A2 * A2 + 27.0 * A1 * A3) / (27.0 * A1 * A1 * A1);
  double shift = 2.0 * A2 / (3.0 * A1);
  std::vector<double> t = trig_depressed(P, Q);
  if (t.empty()) return solve_cubic_real(A1 * A1, 2.0 * A1 * A2, A2 * A2, A3);
  std::vector<double> x;
  for (double ti : t) {
    double xi = ti - shift;
    x.push_back(polish(
        xi, [&](double v) { return cubic_eval(A1, A2, A3, v); },
        [&](double v) { return (A1 * v + A2) * (3.0 * A1 * v + A2); }));
  }
  std::sort(x.begin(), x.end());
  return x;
}

double capacity_condition(const SystemParams& p, double Omega) {
  double x = Omega - p.lambda_e * e_max_u(p);
  if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
  double q = p.V + p.r_max;
  double s = std::sqrt(q / (3.0 * p.lambda_e * x * p.kappa_c * p.C));
  return p.lambda_e * p.kappa_e * s * s * s * p.T + q * p.W * p.T / (x * std::numbers::ln2);
}

CapacityReport omega_threshold(const SystemParams& p) {
  CapacityReport r;
  r.q_max = q_max_bound(p);
  r.e_max_u = e_max_u(p);
  double q = r.q_max;
  r.A1 = 3.0 * p.C * p.kappa_c * p.B_min / (p.kappa_e * q * p.T);
  r.A2 = -3.0 * p.C * p.W * p.kappa_c / (p.kappa_e * std::numbers::ln2);
  r.A3 = -q / (3.0 * p.lambda_e * p.C * p.kappa_c);
  r.roots = cubic_roots_trig(r.A1, r.A2, r.A3);
  if (r.roots.empty()) throw CubicError("omega_threshold: cubic has no real root");
  r.x_max = r.roots.back();
  r.sensing_term = p.V / (p.lambda_e * p.e_col_unit) + p.lambda_e * r.e_max_u;
  r.cubic_term = r.x_max + p.lambda_e * r.e_max_u;
  r.branch = r.sensing_term >= r.cubic_term ? "sensing" : "cubic";
  r.omega_threshold = std::max(r.sensing_term, r.cubic_term) + p.lambda_e * p.E_max_h;
  return r;
}

double sensing_bound(const SystemParams& p) {
  return p.V / (p.lambda_e * p.e_col_unit) + p.lambda_e * (e_max_u(p) + p.E_max_h);
}

}  // namespace plyse
