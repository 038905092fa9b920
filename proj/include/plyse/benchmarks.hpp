#pragma once

#include <utility>

#include "plyse/config.hpp"
#include "plyse/environment.hpp"
#include "plyse/state.hpp"

namespace plyse {

ControlAction lco_action(const SystemState& s, const RandomEvent& ev, const SystemParams& p);
ControlAction eco_action(const SystemState& s, const RandomEvent& ev, const SystemParams& p);
ControlAction qs_oblivious_action(const SystemState& s, const RandomEvent& ev, const SystemParams& p);

// Energy available to the WD for computing after sensing r bits, Joules.
double qso_energy_budget(const SystemState& s, double r, const SystemParams& p);

// Maximizer of l_loc + l_off under the budget, data causality and boxes.
std::pair<double, double> qso_task(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double r);

ControlAction policy_action(PolicyId id, const SystemState& s, const RandomEvent& ev, const SystemParams& p);

}  // namespace plyse
