#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "plyse/config.hpp"
#include "plyse/environment.hpp"

namespace plyse {

struct SystemState {
  double Q_U = 0.0;
  double Q_S = 0.0;
  double B = 0.0;
  double Z = 0.0;
  std::int64_t slot = 0;

  bool operator==(const SystemState&) const = default;
};

struct ControlAction {
  double r = 0.0;
  double p_u = 0.0;
  double f_u = 0.0;
  double f_s = 0.0;

  bool operator==(const ControlAction&) const = default;
};

struct SlotOutcome {
  double l_off = 0.0;
  double l_loc = 0.0;
  double l_edg = 0.0;
  double e_col = 0.0;
  double e_off = 0.0;
  double e_loc = 0.0;
  double e_u = 0.0;
  double e_edg = 0.0;
};

struct FeasibilityReport {
  bool interference = true;
  bool data_user = true;  // l_off + l_loc <= Q_U
  bool data_edge = true;  // f_s T / C <= Q_S
  bool energy = true;     // lambda_e e_u <= B 1{B >= B_min}
  bool boxes = true;

  bool ok() const { return interference && data_user && data_edge && energy && boxes; }
  std::string describe() const;
};

struct InfeasibleAction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SlotOutcome derive_outcome(const ControlAction& action, const RandomEvent& ev, const SystemParams& p);

FeasibilityReport check_feasible(const SystemState& s, const ControlAction& action, const RandomEvent& ev,
                                 const SlotOutcome& out, const SystemParams& p);

// Spendable energy in lambda_e-scaled battery units.
inline double usable_battery(double B, const SystemParams& p) { return B >= p.B_min ? B : 0.0; }

SystemState step(const SystemState& s, const ControlAction& action, const RandomEvent& ev, const SystemParams& p);

}  // namespace plyse
