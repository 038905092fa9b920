#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "plyse/environment.hpp"

using namespace plyse;

TEST(PathLoss, UnitArgumentGivesAntennaGain) {
  SystemParams p = default_params();
  double d = kSpeedOfLight / (4.0 * 3.14159265358979323846 * p.f_c);
  EXPECT_NEAR(path_loss(d, 2.7, p), p.G_A, 1e-12);
  EXPECT_NEAR(path_loss(d, 4.0, p), p.G_A, 1e-12);
}

TEST(PathLoss, HandComputedValue) {
  SystemParams p = default_params();
  // 4 pi 2.4e9 50 / 3e8 = 5026.5482457..., raised to -2.7 gives 1.01524624e-10
  double ratio = 4.0 * 3.141592653589793 * 2.4e9 * 50.0 / 3e8;
  double expected = 4.11 / std::exp(2.7 * std::log(ratio));
  EXPECT_NEAR(ratio, 5026.548245743668, 1e-8);
  EXPECT_NEAR(path_loss(50.0, 2.7, p) / expected, 1.0, 1e-12);
  EXPECT_NEAR(path_loss(50.0, 2.7, p), 4.11 * 1.0152462419e-10, 1e-19);
}

TEST(PathLoss, DoublingDistance) {
  SystemParams p = default_params();
  EXPECT_NEAR(path_loss(100.0, 2.7, p) / path_loss(50.0, 2.7, p), std::pow(2.0, -2.7), 1e-12);
}

TEST(PathLoss, RejectsBadArguments) {
  SystemParams p = default_params();
  EXPECT_THROW(path_loss(0.0, 2.7, p), std::invalid_argument);
  EXPECT_THROW(path_loss(50.0, -1.0, p), std::invalid_argument);
}

TEST(Sinr, IdleSpectrumHasNoPrimaryInterference) {
  SystemParams p = default_params();
  RandomEvent ev{0, 0.1, 3e-11, 5.0, 1e-11};
  EXPECT_DOUBLE_EQ(sinr(ev, p), 3e-11 / (p.W * p.delta_s2));
}

TEST(Sinr, DecreasesWithPrimaryGain) {
  SystemParams p = default_params();
  RandomEvent ev{1, 0.1, 3e-11, 1e-14, 1e-11};
  double last = sinr(ev, p);
  for (double g = 1e-13; g < 1e3; g *= 10.0) {
    ev.g_bar = g;
    double v = sinr(ev, p);
    EXPECT_LT(v, last);
    last = v;
  }
  EXPECT_LT(last, 1e-10);
}

TEST(Sinr, MatchesSeparateEvaluation) {
  SystemParams p = default_params();
  EventRng rng(77);
  for (int i = 0; i < 200; ++i) {
    RandomEvent ev = sample_event(rng, p);
    double noise = p.W * p.delta_s2;
    double interf = ev.a == 1 ? p.P_B * ev.g_bar : 0.0;
    EXPECT_NEAR(sinr(ev, p) / (ev.h / (interf + noise)), 1.0, 1e-14);
  }
}

TEST(Events, ZeroHarvestAndDegenerateActivity) {
  SystemParams p = default_params();
  p.E_max_h = 0.0;
  p.a_bar = 1.0;
  EventRng rng(3);
  for (int i = 0; i < 1000; ++i) {
    RandomEvent ev = sample_event(rng, p);
    EXPECT_EQ(ev.e_h, 0.0);
    EXPECT_EQ(ev.a, 1);
  }
  p.a_bar = 0.0;
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_event(rng, p).a, 0);
}

TEST(Events, MonteCarloMeans) {
  SystemParams p = default_params();
  EventRng rng(2024);
  const int n = 100000;
  double h = 0.0, g = 0.0, hb = 0.0, a = 0.0, e = 0.0;
  for (int i = 0; i < n; ++i) {
    RandomEvent ev = sample_event(rng, p);
    h += ev.h;
    g += ev.g_bar;
    hb += ev.h_bar;
    a += ev.a;
    e += ev.e_h;
    ASSERT_GT(ev.h, 0.0);
    ASSERT_GE(ev.e_h, 0.0);
    ASSERT_LE(ev.e_h, p.E_max_h);
  }
  EXPECT_NEAR(h / n / path_loss(p.d_h, p.sigma_h, p), 1.0, 0.02);
  EXPECT_NEAR(g / n / path_loss(p.d_g, p.sigma_g, p), 1.0, 0.02);
  EXPECT_NEAR(hb / n / path_loss(p.d_hbar, p.sigma_hbar, p), 1.0, 0.02);
  EXPECT_NEAR(a / n / p.a_bar, 1.0, 0.02);
  EXPECT_NEAR(e / n / (p.E_max_h / 2.0), 1.0, 0.02);
}

TEST(Events, MarkovActivityRates) {
  SystemParams p = default_params();
  p.pu_model = PuModel::TwoStateMarkov;
  p.p01 = 0.1;
  p.p10 = 0.3;
  EventRng rng(11);
  const int n = 200000;
  int prev = sample_event(rng, p).a;
  long active = 0, from0 = 0, to1 = 0;
  for (int i = 0; i < n; ++i) {
    int a = sample_event(rng, p).a;
    active += a;
    if (prev == 0) {
      ++from0;
      to1 += a;
    }
    prev = a;
  }
  EXPECT_NEAR(static_cast<double>(to1) / from0, 0.1, 0.005);
  EXPECT_NEAR(static_cast<double>(active) / n, 0.25, 0.01);
}

TEST(Events, ActivityModelLeavesChannelsUntouched) {
  SystemParams p = default_params();
  SystemParams q = p;
  q.pu_model = PuModel::TwoStateMarkov;
  EventRng r1(5), r2(5);
  for (int i = 0; i < 100; ++i) {
    RandomEvent a = sample_event(r1, p), b = sample_event(r2, q);
    EXPECT_EQ(a.h, b.h);
    EXPECT_EQ(a.e_h, b.e_h);
  }
}

TEST(Events, SeedDeterminism) {
  SystemParams p = default_params();
  EventSource a(p, 9), b(p, 9), c(p, 10);
  bool differs = false;
  for (int i = 0; i < 50; ++i) {
    RandomEvent x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= !(x == c.next());
  }
  EXPECT_TRUE(differs);
}

TEST(Events, TraceRoundTripIsExact) {
  SystemParams p = default_params();
  EventSource src(p, 42);
  std::vector<RandomEvent> evs;
  for (int i = 0; i < 100; ++i) evs.push_back(src.next());
  std::stringstream ss;
  write_event_trace(ss, evs);
  std::vector<RandomEvent> back = read_event_trace(ss);
  ASSERT_EQ(back.size(), evs.size());
  for (std::size_t i = 0; i < evs.size(); ++i) EXPECT_EQ(back[i], evs[i]);

  EventSource replay(back);
  EXPECT_TRUE(replay.replaying());
  for (std::size_t i = 0; i < evs.size(); ++i) EXPECT_EQ(replay.next(), evs[i]);
  EXPECT_THROW(replay.next(), std::out_of_range);
}

TEST(Events, TraceReaderRejectsGarbage) {
  std::stringstream ss("slot,a,e_h,h,g_bar,h_bar\n0,2,0.1,1,1,1\n");
  EXPECT_ANY_THROW(read_event_trace(ss));
}
