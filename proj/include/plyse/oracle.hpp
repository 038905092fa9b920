#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "plyse/config.hpp"
#include "plyse/environment.hpp"
#include "plyse/state.hpp"

namespace plyse {

// Brute-force maximizers over dense grids of the feasible sets. They only
// evaluate objectives and constraints, never the closed forms.
namespace grid {

struct Point2 {
  double f = 0.0;
  double p = 0.0;
  double value = 0.0;
};

// Feasible (f_u, p_u) region of the task-execution problem, n x n points.
Point2 task_max(const SystemState& s, const RandomEvent& ev, const SystemParams& p, int n);
// Local-only: f_u on [0, min(f_max_u, Q_U C / T)], p_u = 0.
Point2 lco_max(const SystemState& s, const RandomEvent& ev, const SystemParams& p, int n);
// Edge-only: p_u on its feasible interval, f_u = 0.
Point2 eco_max(const SystemState& s, const RandomEvent& ev, const SystemParams& p, int n);
// l_loc + l_off under the energy budget, data causality and boxes.
Point2 qso_max(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double r, int n);
double edge_max_freq(const SystemState& s, const SystemParams& p, int n);
// Full per-slot action from separate grids over each decision block.
ControlAction plyse_max(const SystemState& s, const RandomEvent& ev, const SystemParams& p, int n_task, int n_edge);

}  // namespace grid

struct OracleCase {
  SystemState state;
  RandomEvent event;
};

OracleCase random_case(std::mt19937_64& rng, const SystemParams& p);
std::uint64_t case_hash(const OracleCase& c);

struct OracleRow {
  std::size_t index = 0;
  std::uint64_t hash = 0;
  std::string op;
  double closed_form = 0.0;
  double oracle = 0.0;
  double gap = 0.0;
  bool pass = true;
};

struct OracleSummary {
  std::string op;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_gap = 0.0;
};

struct OracleReport {
  double tolerance = 1e-4;
  std::vector<OracleRow> rows;
  std::vector<OracleSummary> summary;
  std::size_t failures() const;
};

// Gap of a claimed maximum against a grid maximum, relative to the range the
// grid found above the do-nothing value. Positive means the grid beat the claim.
double relative_gap(double closed_form, double oracle, double baseline);

OracleReport oracle_check(const SystemParams& p, std::size_t n, std::uint64_t seed, double tolerance = 1e-4,
                          int grid_n = 200);

}  // namespace plyse
