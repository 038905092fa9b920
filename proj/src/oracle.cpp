#include "plyse/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "plyse/benchmarks.hpp"
#include "plyse/controller.hpp"

namespace plyse {

namespace grid {

namespace {

double lin(double hi, int i, int n) { return n <= 1 ? 0.0 : hi * static_cast<double>(i) / static_cast<double>(n - 1); }

double interference_cap(const RandomEvent& ev, const SystemParams& p) {
  if (ev.a == 0) return p.p_max;
  return std::clamp((p.Gamma_th - p.W * p.delta_p2) / ev.h_bar, 0.0, p.p_max);
}

// Largest p_u with W T log2(1 + p gamma) <= room.
double power_for_bits(double room, double gamma, const SystemParams& p) {
  if (room <= 0.0) return 0.0;
  double e = room / (p.W * p.T);
  if (e > 1000.0) return std::numeric_limits<double>::infinity();
  return (std::pow(2.0, e) - 1.0) / gamma;
}

double task_value(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double f, double pu) {
  double g = ev.h / (ev.a * p.P_B * ev.g_bar + p.W * p.delta_s2);
  double bt = s.B - p.Omega;
  return p.lambda_e * bt * (p.kappa_c * f * f * f * p.T + pu * p.T) + s.Q_U * f * p.T / p.C +
         (s.Q_U - s.Q_S) * p.W * p.T * std::log2(1.0 + pu * g);
}

}  // namespace

Point2 task_max(const SystemState& s, const RandomEvent& ev, const SystemParams& p, int n) {
  double g = ev.h / (ev.a * p.P_B * ev.g_bar + p.W * p.delta_s2);
  double f_hi = std::min(p.f_max_u, s.Q_U * p.C / p.T);
  double cap = interference_cap(ev, p);
  Point2 best{0.0, 0.0, task_value(s, ev, p, 0.0, 0.0)};
  for (int i = 0; i < n; ++i) {
    double f = lin(f_hi, i, n);
    double p_hi = std::min(cap, power_for_bits(s.Q_U - f * p.T / p.C, g, p));
    for (int j = 0; j < n; ++j) {
      double pu = lin(p_hi, j, n);
      double v = task_value(s, ev, p, f, pu);
      if (v > best.value) best = {f, pu, v};
    }
  }
  return best;
}

Point2 lco_max(const SystemState& s, const RandomEvent& ev, const SystemParams& p, int n) {
  double f_hi = std::min(p.f_max_u, s.Q_U * p.C / p.T);
  Point2 best{0.0, 0.0, task_value(s, ev, p, 0.0, 0.0)};
  for (int i = 0; i < n; ++i) {
    double f = lin(f_hi, i, n);
    double v = task_value(s, ev, p, f, 0.0);
    if (v > best.value) best = {f, 0.0, v};
  }
  return best;
}

Point2 eco_max(const SystemState& s, const RandomEvent& ev, const SystemParams& p, int n) {
  double g = ev.h / (ev.a * p.P_B * ev.g_bar + p.W * p.delta_s2);
  double p_hi = std::min(interference_cap(ev, p), power_for_bits(s.Q_U, g, p));
  Point2 best{0.0, 0.0, task_value(s, ev, p, 0.0, 0.0)};
  for (int j = 0; j < n; ++j) {
    double pu = lin(p_hi, j, n);
    double v = task_value(s, ev, p, 0.0, pu);
    if (v > best.value) best = {0.0, pu, v};
  }
  return best;
}

Point2 qso_max(const SystemState& s, const RandomEvent& ev, const SystemParams& p, double r, int n) {
  double budget = (s.B >= p.B_min ? s.B : 0.0) / p.lambda_e - p.e_col_unit * r;
  Point2 best{0.0, 0.0, 0.0};
  if (budget <= 0.0 || s.Q_U <= 0.0) return best;
  double g = ev.h / (ev.a * p.P_B * ev.g_bar + p.W * p.delta_s2);
  double f_hi = std::min({p.f_max_u, s.Q_U * p.C / p.T, std::cbrt(budget / (p.kappa_c * p.T))});
  double cap = interference_cap(ev, p);
  for (int i = 0; i < n; ++i) {
    double f = lin(f_hi, i, n);
    double left = budget - p.kappa_c * f * f * f * p.T;
    double p_hi = std::min({cap, power_for_bits(s.Q_U - f * p.T / p.C, g, p), std::max(left / p.T, 0.0)});
    for (int j = 0; j < n; ++j) {
      double pu = lin(p_hi, j, n);
      double v = f * p.T / p.C + p.W * p.T * std::log2(1.0 + pu * g);
      if (v > best.value) best = {f, pu, v};
    }
  }
  return best;
}

double edge_max_freq(const SystemState& s, const SystemParams& p, int n) {
  double hi = std::min(s.Q_S * p.C / p.T, p.f_max_s);
  double best_f = 0.0;
  double best_v = 0.0;
  for (int i = 0; i < n; ++i) {
    double f = lin(hi, i, n);
    double v = -s.Z * p.lambda_c * p.kappa_e * f * f * f * p.T + s.Q_S * f * p.T / p.C;
    if (v > best_v) {
      best_v = v;
      best_f = f;
    }
  }
  return best_f;
}

ControlAction plyse_max(const SystemState& s, const RandomEvent& ev, const SystemParams& p, int n_task, int n_edge) {
  ControlAction best;
  ControlAction on{p.r_max, 0.0, 0.0, 0.0};
  if (per_slot_gain(s, on, ev, p) > 0.0) best.r = p.r_max;
  best.f_s = edge_max_freq(s, p, n_edge);
  Point2 t = task_max(s, ev, p, n_task);
  best.f_u = t.f;
  best.p_u = t.p;
  return best;
}

}  // namespace grid

OracleCase random_case(std::mt19937_64& rng, const SystemParams& p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double qmax = p.V + p.r_max;
  auto backlog = [&]() {
    double x = u(rng);
    if (x < 0.1) return 0.0;
    return std::exp(std::log(1e3) + u(rng) * (std::log(qmax) - std::log(1e3)));
  };
  OracleCase c;
  c.state.Q_U = backlog();
  double qs = u(rng);
  c.state.Q_S = qs < 0.1 ? c.state.Q_U : backlog();
  double b = u(rng);
  if (b < 0.2) c.state.B = p.Omega;
  else if (b < 0.3) c.state.B = u(rng) * p.B_min;
  else c.state.B = u(rng) * p.Omega;
  c.state.Z = u(rng) < 0.2 ? 0.0 : std::exp(std::log(1e3) + u(rng) * (std::log(1e16) - std::log(1e3)));
  EventRng er(rng());
  c.event = sample_event(er, p);
  c.event.a = u(rng) < 0.5 ? 1 : 0;
  return c;
}

std::uint64_t case_hash(const OracleCase& c) {
  const double v[] = {c.state.Q_U, c.state.Q_S, c.state.B, c.state.Z, static_cast<double>(c.event.a),
                      c.event.e_h, c.event.h, c.event.g_bar, c.event.h_bar};
  std::uint64_t h = 1469598103934665603ULL;
  unsigned char bytes[sizeof v];
  std::memcpy(bytes, v, sizeof v);
  for (unsigned char byte : bytes) {
    h ^= byte;
    h *= 1099511628211ULL;
  }
  return h;
}

std::size_t OracleReport::failures() const {
  std::size_t n = 0;
  for (const auto& s : summary) n += s.failures;
  return n;
}

double relative_gap(double closed_form, double oracle, double baseline) {
  double scale = std::max({oracle - baseline, std::abs(oracle) * 1e-12, std::numeric_limits<double>::min()});
  return (oracle - closed_form) / scale;
}

OracleReport oracle_check(const SystemParams& p, std::size_t n, std::uint64_t seed, double tolerance, int grid_n) {
  OracleReport rep;
  rep.tolerance = tolerance;
  const int line_n = 10000;
  std::mt19937_64 rng(seed);
  const char* ops[] = {"plyse", "lco", "eco", "qso"};
  std::vector<OracleSummary> sum;
  for (const char* op : ops) sum.push_back({op, 0, 0, -std::numeric_limits<double>::infinity()});

  for (std::size_t i = 0; i < n; ++i) {
    OracleCase c = random_case(rng, p);
    const SystemState& s = c.state;
    const RandomEvent& ev = c.event;
    std::uint64_t h = case_hash(c);
    auto record = [&](int k, double cf, double orc, double base) {
      OracleRow row{i, h, ops[k], cf, orc, relative_gap(cf, orc, base), true};
      row.pass = row.gap <= tolerance;
      sum[k].cases++;
      if (!row.pass) sum[k].failures++;
      sum[k].max_gap = std::max(sum[k].max_gap, row.gap);
      rep.rows.push_back(row);
    };

    {
      ControlAction cf = plyse_action(s, ev, p);
      ControlAction orc = grid::plyse_max(s, ev, p, grid_n, line_n);
      record(0, per_slot_gain(s, cf, ev, p), per_slot_gain(s, orc, ev, p), 0.0);
    }
    {
      ControlAction cf = lco_action(s, ev, p);
      grid::Point2 orc = grid::lco_max(s, ev, p, line_n);
      record(1, task_objective(s, ev, p, cf.f_u, 0.0), orc.value, 0.0);
    }
    {
      ControlAction cf = eco_action(s, ev, p);
      grid::Point2 orc = grid::eco_max(s, ev, p, line_n);
      record(2, task_objective(s, ev, p, 0.0, cf.p_u), orc.value, 0.0);
    }
    {
      ControlAction cf = qs_oblivious_action(s, ev, p);
      grid::Point2 orc = grid::qso_max(s, ev, p, cf.r, grid_n);
      double gamma = sinr(ev, p);
      double value = cf.f_u * p.T / p.C + p.W * p.T * std::log2(1.0 + cf.p_u * gamma);
      record(3, value, orc.value, 0.0);
    }
  }
  for (auto& s : sum)
    if (s.cases == 0) s.max_gap = 0.0;
  rep.summary = sum;
  return rep;
}

}  // namespace plyse
