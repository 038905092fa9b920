#pragma once

#include <stdexcept>
#include <utility>

#include "plyse/config.hpp"
#include "plyse/environment.hpp"
#include "plyse/state.hpp"

namespace plyse {

struct BisectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExecThresholds {
  double p_th = 0.0;
  double p_bar_th = 0.0;
  double f_bar_th = 0.0;
  double B_tilde = 0.0;
  double gamma = 0.0;
};

// Unconstrained stationary points clipped to the box caps.
struct TaskInterior {
  double f_tilde = 0.0;
  double p_tilde = 0.0;
  double f_hat = 0.0;
  double p_hat = 0.0;
};

inline constexpr double kBisectTolHz = 1.0;
inline constexpr int kBisectMaxIter = 200;
inline constexpr double kCaseASlack = 1e-9;

// Full per-slot objective being maximized, with lambda-scaled terms.
double per_slot_objective(const SystemState& s, const ControlAction& a, const RandomEvent& ev, const SystemParams& p);
// Objective minus its value at the all-zero action; same maximizer, but free
// of the large action-independent terms that swamp double precision.
double per_slot_gain(const SystemState& s, const ControlAction& a, const RandomEvent& ev, const SystemParams& p);
// F(f) + G(p): the part that depends on (f_u, p_u).
double task_objective(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double f_u, double p_u);
double edge_objective(const SystemState& s, const SystemParams& p, double f_s);

double opt_edge_freq(const SystemState& s, const SystemParams& p);
double sensing_cost(const SystemState& s, const SystemParams& p);
double opt_sensing(const SystemState& s, const SystemParams& p);

// Largest p_u allowed by the box and the interference constraint. The
// returned value satisfies the interference inequality exactly in floating point.
double power_cap(const RandomEvent& ev, const SystemParams& p);

double F_p(const SystemState& s, double gamma, const SystemParams& p, double f);
double F_f(const SystemState& s, double gamma, const SystemParams& p, double pu);

ExecThresholds exec_thresholds(const SystemState& s, const RandomEvent& ev, const SystemParams& p);
TaskInterior task_interior(const SystemState& s, const ExecThresholds& th, const SystemParams& p);

double U_prime(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double f);
double bisect_U_prime(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double tol = kBisectTolHz);

std::pair<double, double> opt_task_exec(const SystemState& s, const RandomEvent& ev, const SystemParams& p);

// Lowers p_u (then f_u) by a few ulps until l_off + l_loc <= Q_U holds exactly.
void fit_to_backlog(const SystemState& s, double gamma, const SystemParams& p, double& f_u, double& p_u);

ControlAction plyse_action(const SystemState& s, const RandomEvent& ev, const SystemParams& p);

}  // namespace plyse
