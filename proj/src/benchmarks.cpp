#include "plyse/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plyse/controller.hpp"

namespace plyse {

namespace {

struct Alloc {
  double f = 0.0;
  double p = 0.0;
};

// Inner maximizer of l_loc + l_off - mu (e_loc + e_off) over the boxes.
Alloc price_alloc(double mu, double p_cap, double gamma, const SystemParams& pr) {
  Alloc a;
  if (mu <= 0.0) {
    a.f = pr.f_max_u;
    a.p = p_cap;
    return a;
  }
  a.f = std::min(std::sqrt(1.0 / (3.0 * mu * pr.kappa_c * pr.C)), pr.f_max_u);
  a.p = std::clamp(pr.W / (mu * std::numbers::ln2) - 1.0 / gamma, 0.0, p_cap);
  return a;
}

double alloc_energy(const Alloc& a, const SystemParams& p) { return p.kappa_c * a.f * a.f * a.f * p.T + a.p * p.T; }

double alloc_load(const Alloc& a, double gamma, const SystemParams& p) {
  return a.f * p.T / p.C + p.W * p.T * std::log2(1.0 + a.p * gamma);
}

// Smallest price whose allocation satisfies pred; pred is monotone in mu.
template <class Pred>
double smallest_price(Pred ok) {
  if (ok(0.0)) return 0.0;
  double hi = 1.0;
  for (int i = 0; i < 2100 && !ok(hi); ++i) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (ok(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace

ControlAction lco_action(const SystemState& s, const RandomEvent& ev, const SystemParams& p) {
  ControlAction a;
  a.r = opt_sensing(s, p);
  a.f_s = opt_edge_freq(s, p);
  ExecThresholds th = exec_thresholds(s, ev, p);
  a.f_u = task_interior(s, th, p).f_hat;
  a.p_u = 0.0;
  fit_to_backlog(s, th.gamma, p, a.f_u, a.p_u);
  return a;
}

ControlAction eco_action(const SystemState& s, const RandomEvent& ev, const SystemParams& p) {
  ControlAction a;
  a.r = opt_sensing(s, p);
  a.f_s = opt_edge_freq(s, p);
  ExecThresholds th = exec_thresholds(s, ev, p);
  a.f_u = 0.0;
  a.p_u = s.Q_U >= s.Q_S ? task_interior(s, th, p).p_hat : 0.0;
  fit_to_backlog(s, th.gamma, p, a.f_u, a.p_u);
  return a;
}

double qso_energy_budget(const SystemState& s, double r, const SystemParams& p) {
  return usable_battery(s.B, p) / p.lambda_e - p.e_col_unit * r;
}

std::pair<double, double> qso_task(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double r) {
  double E = qso_energy_budget(s, r, p);
  if (!(E > 0.0) || !(s.Q_U > 0.0)) return {0.0, 0.0};
  double gamma = sinr(ev, p);
  double p_cap = power_cap(ev, p);

  double mu_e = smallest_price([&](double mu) { return alloc_energy(price_alloc(mu, p_cap, gamma, p), p) <= E; });
  double mu_d = smallest_price([&](double mu) { return alloc_load(price_alloc(mu, p_cap, gamma, p), gamma, p) <= s.Q_U; });
  Alloc a = price_alloc(std::max(mu_e, mu_d), p_cap, gamma, p);

  double f = a.f, pu = a.p;
  fit_to_backlog(s, gamma, p, f, pu);
  // Match the engine's energy test bit for bit.
  ControlAction act{r, pu, f, 0.0};
  for (int i = 0; i < 200; ++i) {
    SlotOutcome o = derive_outcome(act, ev, p);
    if (p.lambda_e * o.e_u <= usable_battery(s.B, p)) break;
    act.p_u *= 1.0 - 1e-12;
    act.f_u *= 1.0 - 1e-12;
  }
  return {act.f_u, act.p_u};
}

ControlAction qs_oblivious_action(const SystemState& s, const RandomEvent& ev, const SystemParams& p) {
  ControlAction a;
  a.r = opt_sensing(s, p);
  a.f_s = opt_edge_freq(s, p);
  auto [f, pu] = qso_task(s, ev, p, a.r);
  a.f_u = f;
  a.p_u = pu;
  return a;
}

ControlAction policy_action(PolicyId id, const SystemState& s, const RandomEvent& ev, const SystemParams& p) {
  switch (id) {
    case PolicyId::Plyse: return plyse_action(s, ev, p);
    case PolicyId::Lco: return lco_action(s, ev, p);
    case PolicyId::Eco: return eco_action(s, ev, p);
    case PolicyId::QsOblivious: return qs_oblivious_action(s, ev, p);
  }
  return {};
}

}  // namespace plyse
