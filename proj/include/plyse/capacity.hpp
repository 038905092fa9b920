#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "plyse/config.hpp"

namespace plyse {

struct CubicError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityReport {
  double q_max = 0.0;
  double e_max_u = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
  std::vector<double> roots;
  double x_max = 0.0;
  double sensing_term = 0.0;  // V/(lambda_e e_col_unit) + lambda_e e_max_u
  double cubic_term = 0.0;    // x_max + lambda_e e_max_u
  double omega_threshold = 0.0;
  std::string branch;  // "sensing" or "cubic"
};

double e_max_u(const SystemParams& p);
double q_max_bound(const SystemParams& p);

// Real roots of a x^3 + b x^2 + c x + d, ascending. Trigonometric form when
// three real roots exist, Cardano otherwise; each root gets Newton polishing.
std::vector<double> solve_cubic_real(double a, double b, double c, double d);

// Real roots of A1^2 x^3 + 2 A1 A2 x^2 + A2^2 x + A3, ascending.
std::vector<double> cubic_roots_trig(double A1, double A2, double A3);
double cubic_eval(double A1, double A2, double A3, double x);

// Left-hand side of the energy-causality condition on the battery capacity;
// the guarantee holds when it does not exceed B_min.
double capacity_condition(const SystemParams& p, double Omega);

CapacityReport omega_threshold(const SystemParams& p);

// Smallest Omega for which the sensing decision alone never drains the
// battery below one slot of worst-case spending plus a worst-case harvest:
// V/(lambda_e e_col_unit) + lambda_e (e_max_u + E_max_h).
double sensing_bound(const SystemParams& p);

}  // namespace plyse
