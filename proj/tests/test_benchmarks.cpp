#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "plyse/benchmarks.hpp"
#include "plyse/controller.hpp"
#include "plyse/oracle.hpp"

using namespace plyse;

namespace {

double rel_gap(double cf, double orc, double base) {
  return (orc - cf) / std::max({orc - base, std::abs(orc) * 1e-12, 1e-300});
}

double gamma_of(const RandomEvent& ev, const SystemParams& p) {
  return ev.h / (ev.a * p.P_B * ev.g_bar + p.W * p.delta_s2);
}

}  // namespace

TEST(Lco, EmptyQueueComputesNothing) {
  SystemParams p = default_params();
  RandomEvent ev{0, 0.1, 4e-11, 1e-12, 1e-10};
  ControlAction a = lco_action(SystemState{0.0, 0.0, 0.5 * p.Omega, 0.0, 0}, ev, p);
  EXPECT_EQ(a.f_u, 0.0);
  EXPECT_EQ(a.p_u, 0.0);
}

TEST(Lco, FullBatteryRunsAtMaxFrequency) {
  SystemParams p = default_params();
  RandomEvent ev{0, 0.1, 4e-11, 1e-12, 1e-10};
  ControlAction a = lco_action(SystemState{2.0 * p.f_max_u * p.T / p.C, 0.0, p.Omega, 0.0, 0}, ev, p);
  EXPECT_EQ(a.f_u, p.f_max_u);
}

TEST(Eco, NoOffloadWhenEdgeQueueLonger) {
  SystemParams p = default_params();
  RandomEvent ev{0, 0.1, 4e-11, 1e-12, 1e-10};
  ControlAction a = eco_action(SystemState{1e6, 2e6, 0.9 * p.Omega, 0.0, 0}, ev, p);
  EXPECT_EQ(a.p_u, 0.0);
  EXPECT_EQ(a.f_u, 0.0);
}

TEST(Eco, ZeroInterferenceHeadroom) {
  SystemParams p = default_params();
  p.Gamma_th = p.W * p.delta_p2;
  RandomEvent ev{1, 0.1, 4e-11, 1e-12, 1e-10};
  EXPECT_EQ(eco_action(SystemState{1e7, 0.0, 0.9 * p.Omega, 0.0, 0}, ev, p).p_u, 0.0);
}

TEST(Qso, DeadBatteryOrEmptyQueueIdles) {
  SystemParams p = default_params();
  RandomEvent ev{0, 0.1, 4e-11, 1e-12, 1e-10};
  auto dead = qso_task(SystemState{1e7, 0.0, 0.5 * p.B_min, 0.0, 0}, ev, p, 0.0);
  EXPECT_EQ(dead.first, 0.0);
  EXPECT_EQ(dead.second, 0.0);
  auto empty = qso_task(SystemState{0.0, 0.0, p.Omega, 0.0, 0}, ev, p, 0.0);
  EXPECT_EQ(empty.first, 0.0);
  EXPECT_EQ(empty.second, 0.0);
}

TEST(Benchmarks, MatchOneDimensionalGrids) {
  SystemParams p = default_params();
  std::mt19937_64 g(20);
  for (int i = 0; i < 1000; ++i) {
    OracleCase c = random_case(g, p);
    double base = task_objective(c.state, c.event, p, 0.0, 0.0);
    ControlAction l = lco_action(c.state, c.event, p);
    EXPECT_EQ(l.p_u, 0.0);
    grid::Point2 lg = grid::lco_max(c.state, c.event, p, 10000);
    EXPECT_LE(rel_gap(task_objective(c.state, c.event, p, l.f_u, 0.0), lg.value, base), 1e-4) << "lco " << i;

    ControlAction e = eco_action(c.state, c.event, p);
    EXPECT_EQ(e.f_u, 0.0);
    grid::Point2 eg = grid::eco_max(c.state, c.event, p, 10000);
    EXPECT_LE(rel_gap(task_objective(c.state, c.event, p, 0.0, e.p_u), eg.value, base), 1e-4) << "eco " << i;
  }
}

TEST(Benchmarks, QsoMatchesTwoDimensionalGrid) {
  SystemParams p = default_params();
  std::mt19937_64 g(21);
  for (int i = 0; i < 1000; ++i) {
    OracleCase c = random_case(g, p);
    ControlAction a = qs_oblivious_action(c.state, c.event, p);
    double gamma = gamma_of(c.event, p);
    double v = a.f_u * p.T / p.C + p.W * p.T * std::log2(1.0 + a.p_u * gamma);
    grid::Point2 best = grid::qso_max(c.state, c.event, p, a.r, 200);
    EXPECT_LE(rel_gap(v, best.value, 0.0), 1e-4) << "case " << i;
  }
}

TEST(Benchmarks, ActionsAreFeasible) {
  SystemParams p = default_params();
  std::mt19937_64 g(22);
  for (int i = 0; i < 2000; ++i) {
    OracleCase c = random_case(g, p);
    for (PolicyId id : all_policies()) {
      ControlAction a = policy_action(id, c.state, c.event, p);
      FeasibilityReport r = check_feasible(c.state, a, c.event, derive_outcome(a, c.event, p), p);
      EXPECT_TRUE(r.interference && r.data_user && r.data_edge && r.boxes)
          << to_string(id) << " case " << i << ": " << r.describe();
      if (id == PolicyId::QsOblivious) EXPECT_TRUE(r.energy) << "case " << i;
    }
  }
}

TEST(Benchmarks, AxisRestrictionsAgreeWithFullSolver) {
  SystemParams p = default_params();
  std::mt19937_64 g(23);
  for (int i = 0; i < 500; ++i) {
    OracleCase c = random_case(g, p);
    // With the radio disabled the full solver reduces to local computing.
    SystemParams q = p;
    q.p_max = 0.0;
    auto full = opt_task_exec(c.state, c.event, q);
    ControlAction l = lco_action(c.state, c.event, p);
    double base = task_objective(c.state, c.event, p, 0.0, 0.0);
    double vf = task_objective(c.state, c.event, p, full.first, 0.0);
    double vl = task_objective(c.state, c.event, p, l.f_u, 0.0);
    EXPECT_LE(std::abs(vf - vl), 1e-6 * std::max(std::abs(vf - base), 1.0)) << "case " << i;
  }
}

TEST(Benchmarks, QsoIgnoresEdgeQueue) {
  SystemParams p = default_params();
  RandomEvent ev{0, 0.1, 4e-11, 1e-12, 1e-10};
  SystemState a{5e6, 0.0, 0.5 * p.Omega, 1e9, 0};
  SystemState b = a;
  b.Q_S = 1e9;
  ControlAction x = qs_oblivious_action(a, ev, p), y = qs_oblivious_action(b, ev, p);
  EXPECT_EQ(x.r, y.r);
  EXPECT_EQ(x.f_u, y.f_u);
  EXPECT_EQ(x.p_u, y.p_u);
}
