#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plyse/config.hpp"
#include "plyse/environment.hpp"
#include "plyse/state.hpp"

namespace plyse {

struct Divergence {
  bool flag = false;
  double slope = 0.0;  // per window
  double mean = 0.0;
};

// Least-squares slope over the second half of a windowed trace; flagged when
// positive and larger than 1% of the whole-trace mean per window.
Divergence detect_divergence(const std::vector<double>& trace);

struct WindowTraces {
  std::vector<double> Q_U;
  std::vector<double> Q_S;
  std::vector<double> c;
  std::vector<double> B;
};

struct RunMetrics {
  PolicyId policy = PolicyId::Plyse;
  std::uint64_t seed = 0;
  std::int64_t N = 0;
  std::int64_t window = 0;

  double R_bar = 0.0;
  double Q_U_bar = 0.0;
  double Q_S_bar = 0.0;
  double c_bar = 0.0;
  std::int64_t energy_violations = 0;
  std::int64_t interference_violations = 0;

  double max_Q_U = 0.0;
  double min_B = 0.0;
  double max_B = 0.0;
  double l_off_active = 0.0;
  double l_off_idle = 0.0;
  double l_loc_total = 0.0;
  std::int64_t active_slots = 0;

  WindowTraces traces;
  Divergence q_u_divergence;
  Divergence q_s_divergence;
  bool diverged = false;

  std::vector<std::string> warnings;
};

struct StateRecord {
  SystemState state;   // at the start of the slot
  ControlAction action;  // as executed
  int a = 0;
};

struct RunOptions {
  bool record_states = false;
  bool record_events = false;
  const std::vector<RandomEvent>* replay = nullptr;  // N is taken from its length
};

struct RunResult {
  RunMetrics metrics;
  std::vector<StateRecord> states;
  std::vector<RandomEvent> events;
};

struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunMetrics run(const SystemParams& p, PolicyId policy);
RunResult run_detailed(const SystemParams& p, PolicyId policy, const RunOptions& opt);

const std::vector<std::string>& sweepable_params();

struct SweepSpec {
  std::string param;
  std::vector<double> values;
  int replications = 5;
  SystemParams base;
  std::vector<PolicyId> policies;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepCell {
  double value = 0.0;
  PolicyId policy = PolicyId::Plyse;
  int replication = 0;
  std::uint64_t seed = 0;
  RunMetrics metrics;
  std::string error;
};

struct Stat {
  double mean = 0.0;
  double std = 0.0;
};

struct SweepAggregate {
  double value = 0.0;
  PolicyId policy = PolicyId::Plyse;
  int runs = 0;
  int included = 0;  // neither failed nor diverged
  int diverged = 0;
  int failed = 0;
  Stat R_bar, Q_U_bar, Q_S_bar, c_bar, l_off_active, l_off_idle;
  std::int64_t energy_violations = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // value-major, then policy, then replication
  std::vector<SweepAggregate> aggregates;
};

void validate(const SweepSpec& spec);
SystemParams cell_params(const SweepSpec& spec, double value, int replication);
SweepResult sweep(const SweepSpec& spec);

}  // namespace plyse
