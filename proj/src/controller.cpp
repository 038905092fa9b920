#include "plyse/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace plyse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

double l_off(double pu, double gamma, const SystemParams& p) { return p.W * p.T * std::log2(1.0 + pu * gamma); }
double l_loc(double f, const SystemParams& p) { return f * p.T / p.C; }

}  // namespace

double per_slot_objective(const SystemState& s, const ControlAction& a, const RandomEvent& ev, const SystemParams& p) {
  SlotOutcome o = derive_outcome(a, ev, p);
  return p.V * a.r + s.Z * p.lambda_c * (p.c_th - o.e_edg) + p.lambda_e * (s.B - p.Omega) * (o.e_u - ev.e_h) +
         s.Q_U * (o.l_off + o.l_loc - a.r) + s.Q_S * (o.l_edg - o.l_off);
}

double per_slot_gain(const SystemState& s, const ControlAction& a, const RandomEvent& ev, const SystemParams& p) {
  SlotOutcome o = derive_outcome(a, ev, p);
  return p.V * a.r - s.Z * p.lambda_c * o.e_edg + p.lambda_e * (s.B - p.Omega) * o.e_u +
         s.Q_U * (o.l_off + o.l_loc - a.r) + s.Q_S * (o.l_edg - o.l_off);
}

double task_objective(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double f_u, double p_u) {
  double bt = s.B - p.Omega;
  double gamma = sinr(ev, p);
  double F = p.lambda_e * bt * p.kappa_c * f_u * f_u * f_u * p.T + s.Q_U * f_u * p.T / p.C;
  double G = p.lambda_e * bt * p_u * p.T + (s.Q_U - s.Q_S) * p.T * p.W * std::log2(1.0 + p_u * gamma);
  return F + G;
}

double edge_objective(const SystemState& s, const SystemParams& p, double f_s) {
  return -s.Z * p.lambda_c * p.kappa_e * f_s * f_s * f_s * p.T + s.Q_S * f_s * p.T / p.C;
}

double opt_edge_freq(const SystemState& s, const SystemParams& p) {
  if (s.Q_S <= 0.0) return 0.0;
  double cap = std::min(s.Q_S * p.C / p.T, p.f_max_s);
  double f = cap;
  if (s.Z > 0.0) f = std::min(std::sqrt(s.Q_S / (3.0 * s.Z * p.lambda_c * p.C * p.kappa_e)), cap);
  while (f > 0.0 && f * p.T / p.C > s.Q_S) f = std::nextafter(f, 0.0);
  return f;
}

double sensing_cost(const SystemState& s, const SystemParams& p) {
  return s.Q_U - p.V - p.lambda_e * (s.B - p.Omega) * p.e_col_unit;
}

double opt_sensing(const SystemState& s, const SystemParams& p) { return sensing_cost(s, p) <= 0.0 ? p.r_max : 0.0; }

double power_cap(const RandomEvent& ev, const SystemParams& p) {
  if (ev.a == 0) return p.p_max;
  double cap = std::min((p.Gamma_th - p.W * p.delta_p2) / ev.h_bar, p.p_max);
  cap = std::max(cap, 0.0);
  while (cap > 0.0 && p.W * p.delta_p2 + cap * ev.h_bar - p.Gamma_th > 0.0) cap = std::nextafter(cap, 0.0);
  return cap;
}

double F_p(const SystemState& s, double gamma, const SystemParams& p, double f) {
  double e = (s.Q_U - f * p.T / p.C) / (p.W * p.T);
  return std::expm1(e * kLn2) / gamma;
}

double F_f(const SystemState& s, double gamma, const SystemParams& p, double pu) {
  return (s.Q_U - p.W * p.T * std::log2(1.0 + pu * gamma)) * p.C / p.T;
}

ExecThresholds exec_thresholds(const SystemState& s, const RandomEvent& ev, const SystemParams& p) {
  ExecThresholds th;
  th.gamma = sinr(ev, p);
  th.p_th = power_cap(ev, p);
  th.p_bar_th = std::max(std::min(th.p_th, F_p(s, th.gamma, p, 0.0)), 0.0);
  th.f_bar_th = std::max(std::min(p.f_max_u, F_f(s, th.gamma, p, 0.0)), 0.0);
  th.B_tilde = s.B - p.Omega;
  return th;
}

TaskInterior task_interior(const SystemState& s, const ExecThresholds& th, const SystemParams& p) {
  TaskInterior in;
  if (th.B_tilde == 0.0) {
    in.f_tilde = p.f_max_u;
    in.p_tilde = th.p_th;
  } else {
    in.f_tilde = std::sqrt(-s.Q_U / (3.0 * p.lambda_e * th.B_tilde * p.kappa_c * p.C));
    in.p_tilde = (s.Q_S - s.Q_U) * p.W / (p.lambda_e * th.B_tilde * kLn2) - 1.0 / th.gamma;
  }
  in.f_hat = std::min(in.f_tilde, th.f_bar_th);
  in.p_hat = std::clamp(in.p_tilde, 0.0, th.p_bar_th);
  return in;
}

double U_prime(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double f) {
  double bt = s.B - p.Omega;
  double gamma = sinr(ev, p);
  double quad = 3.0 * p.lambda_e * p.kappa_c * p.T * bt * f * f;
  // -(lambda_e B~ T ln2 / (W C gamma)) 2^(...) is positive for B~ < 0; evaluate
  // in the log domain so a large exponent saturates to +inf instead of NaN.
  double coef = -p.lambda_e * bt * p.T * kLn2 / (p.W * p.C * gamma);
  double expo = (s.Q_U / (p.W * p.T) - f / (p.W * p.C)) * kLn2;
  double arg = std::log(coef) + expo;
  double term = arg > 709.0 ? kInf : std::exp(arg);
  return quad + term + p.T / p.C * s.Q_S;
}

double bisect_U_prime(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisect_U_prime: tol must be > 0");
  if (!(s.B - p.Omega < 0.0)) throw std::invalid_argument("bisect_U_prime: requires B < Omega");
  if (U_prime(s, ev, p, 0.0) <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = p.f_max_u;
  int grow = 0;
  while (!(U_prime(s, ev, p, hi) < 0.0)) {
    lo = hi;
    hi *= 2.0;
    if (++grow > kBisectMaxIter || !std::isfinite(hi))
      throw BisectionError("bisect_U_prime: could not bracket the root");
  }
  for (int it = 0; it < kBisectMaxIter; ++it) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    double mid = 0.5 * (lo + hi);
    if (U_prime(s, ev, p, mid) > 0.0) lo = mid;
    else hi = mid;
  }
  if (hi - lo <= tol) return 0.5 * (lo + hi);
  throw BisectionError("bisect_U_prime: no convergence after " + std::to_string(kBisectMaxIter) + " iterations");
}

void fit_to_backlog(const SystemState& s, double gamma, const SystemParams& p, double& f_u, double& p_u) {
  if (l_off(p_u, gamma, p) + l_loc(f_u, p) <= s.Q_U) return;
  if (l_loc(f_u, p) > s.Q_U) {
    f_u = std::max(s.Q_U * p.C / p.T, 0.0);
    while (f_u > 0.0 && l_loc(f_u, p) > s.Q_U) f_u = std::nextafter(f_u, 0.0);
    p_u = 0.0;
    return;
  }
  p_u = std::clamp(F_p(s, gamma, p, f_u), 0.0, p_u);
  for (int i = 0; i < 64 && p_u > 0.0 && l_off(p_u, gamma, p) + l_loc(f_u, p) > s.Q_U; ++i)
    p_u = std::nextafter(p_u, 0.0);
  while (p_u > 0.0 && l_off(p_u, gamma, p) + l_loc(f_u, p) > s.Q_U) p_u *= 1.0 - 1e-12;
  if (l_off(p_u, gamma, p) + l_loc(f_u, p) > s.Q_U) {
    p_u = 0.0;
    while (f_u > 0.0 && l_loc(f_u, p) > s.Q_U) f_u = std::nextafter(f_u, 0.0);
  }
}

std::pair<double, double> opt_task_exec(const SystemState& s, const RandomEvent& ev, const SystemParams& p) {
  ExecThresholds th = exec_thresholds(s, ev, p);
  TaskInterior in = task_interior(s, th, p);
  double f = in.f_hat;
  double pu = 0.0;

  if (s.Q_U < s.Q_S) {
    pu = 0.0;
  } else if (l_off(in.p_hat, th.gamma, p) + l_loc(in.f_hat, p) <= s.Q_U * (1.0 + kCaseASlack)) {
    pu = in.p_hat;
  } else if (th.B_tilde == 0.0) {
    pu = std::clamp(F_p(s, th.gamma, p, in.f_hat), 0.0, th.p_bar_th);
  } else {
    double ub = in.f_hat;
    double lb = std::min(std::max(0.0, F_f(s, th.gamma, p, in.p_hat)), ub);
    double root = bisect_U_prime(s, ev, p);
    f = std::clamp(root, lb, ub);
    pu = std::clamp(F_p(s, th.gamma, p, f), 0.0, th.p_bar_th);
  }
  fit_to_backlog(s, th.gamma, p, f, pu);
  return {f, pu};
}

ControlAction plyse_action(const SystemState& s, const RandomEvent& ev, const SystemParams& p) {
  ControlAction a;
  a.r = opt_sensing(s, p);
  a.f_s = opt_edge_freq(s, p);
  auto [f, pu] = opt_task_exec(s, ev, p);
  a.f_u = f;
  a.p_u = pu;
  return a;
}

}  // namespace plyse
