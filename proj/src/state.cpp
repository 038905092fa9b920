#include "plyse/state.hpp"

#include <algorithm>
#include <cmath>

namespace plyse {

std::string FeasibilityReport::describe() const {
  std::string s;
  auto add = [&](bool ok, const char* name) {
    if (ok) return;
    if (!s.empty()) s += ",";
    s += name;
  };
  add(interference, "interference");
  add(data_user, "data_user");
  add(data_edge, "data_edge");
  add(energy, "energy");
  add(boxes, "boxes");
  return s.empty() ? "ok" : s;
}

SlotOutcome derive_outcome(const ControlAction& a, const RandomEvent& ev, const SystemParams& p) {
  SlotOutcome o;
  o.l_off = p.W * p.T * std::log2(1.0 + a.p_u * sinr(ev, p));
  o.e_off = a.p_u * p.T;
  o.l_loc = a.f_u * p.T / p.C;
  o.e_loc = p.kappa_c * a.f_u * a.f_u * a.f_u * p.T;
  o.l_edg = a.f_s * p.T / p.C;
  o.e_edg = p.kappa_e * a.f_s * a.f_s * a.f_s * p.T;
  o.e_col = p.e_col_unit * a.r;
  o.e_u = o.e_col + o.e_off + o.e_loc;
  return o;
}

FeasibilityReport check_feasible(const SystemState& s, const ControlAction& a, const RandomEvent& ev,
                                 const SlotOutcome& o, const SystemParams& p) {
  FeasibilityReport rep;
  rep.interference = ev.a == 0 || p.W * p.delta_p2 + a.p_u * ev.h_bar - p.Gamma_th <= 0.0;
  rep.data_user = o.l_off + o.l_loc <= s.Q_U;
  rep.data_edge = a.f_s * p.T / p.C <= s.Q_S;
  rep.energy = p.lambda_e * o.e_u <= usable_battery(s.B, p);
  rep.boxes = a.r >= 0.0 && a.r <= p.r_max && a.p_u >= 0.0 && a.p_u <= p.p_max && a.f_u >= 0.0 &&
              a.f_u <= p.f_max_u && a.f_s >= 0.0 && a.f_s <= p.f_max_s;
  return rep;
}

SystemState step(const SystemState& s, const ControlAction& a, const RandomEvent& ev, const SystemParams& p) {
  SlotOutcome o = derive_outcome(a, ev, p);
  FeasibilityReport rep = check_feasible(s, a, ev, o, p);
  if (!rep.ok()) throw InfeasibleAction("step: infeasible action at slot " + std::to_string(s.slot) + " (" + rep.describe() + ")");

  SystemState n;
  // Feasibility bounds each subtraction by the current backlog, so the max()
  // only absorbs the last-ulp rounding of the difference.
  n.Q_U = std::max(s.Q_U - o.l_off - o.l_loc + a.r, 0.0);
  n.Q_S = std::max(s.Q_S - o.l_edg + o.l_off, 0.0);
  n.B = std::min(std::max(s.B - p.lambda_e * o.e_u, 0.0) + p.lambda_e * ev.e_h, p.Omega);
  n.Z = std::max(s.Z + p.lambda_c * o.e_edg - p.lambda_c * p.c_th, 0.0);
  n.slot = s.slot + 1;
  return n;
}

}  // namespace plyse
