#include "plyse/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "plyse/benchmarks.hpp"
#include "plyse/capacity.hpp"
#include "plyse/controller.hpp"

namespace plyse {

Divergence detect_divergence(const std::vector<double>& trace) {
  if (trace.size() < 10) throw std::invalid_argument("detect_divergence: need at least 10 windows");
  Divergence d;
  double total = 0.0;
  for (double v : trace) total += v;
  d.mean = total / static_cast<double>(trace.size());

  std::size_t start = trace.size() / 2;
  double n = static_cast<double>(trace.size() - start);
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = start; k < trace.size(); ++k) {
    sx += static_cast<double>(k);
    sy += trace[k];
  }
  double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = start; k < trace.size(); ++k) {
    double dx = static_cast<double>(k) - mx;
    sxy += dx * (trace[k] - my);
    sxx += dx * dx;
  }
  d.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  d.flag = d.slope > 0.0 && d.slope > 0.01 * std::abs(d.mean);
  return d;
}

namespace {

struct WindowAcc {
  double q_u = 0.0, q_s = 0.0, c = 0.0, b = 0.0;
  std::int64_t n = 0;
};

void flush(WindowAcc& w, WindowTraces& tr) {
  if (w.n == 0) return;
  double n = static_cast<double>(w.n);
  tr.Q_U.push_back(w.q_u / n);
  tr.Q_S.push_back(w.q_s / n);
  tr.c.push_back(w.c / n);
  tr.B.push_back(w.b / n);
  w = WindowAcc{};
}

}  // namespace

RunMetrics run(const SystemParams& p, PolicyId policy) { return run_detailed(p, policy, RunOptions{}).metrics; }

RunResult run_detailed(const SystemParams& p, PolicyId policy, const RunOptions& opt) {
  validate(p);
  RunResult res;
  RunMetrics& m = res.metrics;
  m.policy = policy;
  m.seed = p.seed;
  m.window = p.window;
  m.N = opt.replay ? static_cast<std::int64_t>(opt.replay->size()) : p.N;
  if (m.N < 1) throw RunError("run: horizon must be at least one slot");

  if (policy == PolicyId::Plyse) {
    double thr = omega_threshold(p).omega_threshold;
    if (p.Omega < thr)
      m.warnings.push_back("Omega below the capacity threshold; the energy-causality guarantee does not apply");
  }

  EventSource src = opt.replay ? EventSource(*opt.replay) : EventSource(p, p.seed);
  if (opt.record_states) res.states.reserve(static_cast<std::size_t>(m.N));
  if (opt.record_events) res.events.reserve(static_cast<std::size_t>(m.N));

  SystemState s;
  double sum_r = 0.0, sum_qu = 0.0, sum_qs = 0.0, sum_c = 0.0;
  m.min_B = std::numeric_limits<double>::infinity();
  m.max_B = -std::numeric_limits<double>::infinity();
  WindowAcc w;

  for (std::int64_t t = 0; t < m.N; ++t) {
    RandomEvent ev = src.next();
    if (opt.record_events) res.events.push_back(ev);

    ControlAction a;
    try {
      a = policy_action(policy, s, ev, p);
    } catch (const std::exception& e) {
      throw RunError("run: slot " + std::to_string(t) + ": " + e.what());
    }
    SlotOutcome o = derive_outcome(a, ev, p);
    FeasibilityReport rep = check_feasible(s, a, ev, o, p);
    if (!rep.interference) {
      ++m.interference_violations;
      a.p_u = 0.0;
    }
    if (!rep.energy) {
      // The WD cannot pay for the decision: it idles this slot.
      ++m.energy_violations;
      a.r = 0.0;
      a.p_u = 0.0;
      a.f_u = 0.0;
    }
    if (!rep.interference || !rep.energy) {
      o = derive_outcome(a, ev, p);
      rep = check_feasible(s, a, ev, o, p);
    }
    if (!rep.ok())
      throw RunError("run: slot " + std::to_string(t) + ": infeasible action (" + rep.describe() + ")");

    if (opt.record_states) res.states.push_back({s, a, ev.a});

    sum_r += a.r;
    sum_qu += s.Q_U;
    sum_qs += s.Q_S;
    sum_c += o.e_edg;
    m.max_Q_U = std::max(m.max_Q_U, s.Q_U);
    m.min_B = std::min(m.min_B, s.B);
    m.max_B = std::max(m.max_B, s.B);
    if (ev.a) {
      m.l_off_active += o.l_off;
      ++m.active_slots;
    } else {
      m.l_off_idle += o.l_off;
    }
    m.l_loc_total += o.l_loc;

    w.q_u += s.Q_U;
    w.q_s += s.Q_S;
    w.c += o.e_edg;
    w.b += s.B;
    if (++w.n == p.window) flush(w, m.traces);

    s = step(s, a, ev, p);
  }
  flush(w, m.traces);
  m.max_Q_U = std::max(m.max_Q_U, s.Q_U);
  m.min_B = std::min(m.min_B, s.B);
  m.max_B = std::max(m.max_B, s.B);

  double n = static_cast<double>(m.N);
  m.R_bar = sum_r / n;
  m.Q_U_bar = sum_qu / n;
  m.Q_S_bar = sum_qs / n;
  m.c_bar = sum_c / n;
  if (m.traces.Q_S.size() >= 10) {
    m.q_u_divergence = detect_divergence(m.traces.Q_U);
    m.q_s_divergence = detect_divergence(m.traces.Q_S);
  }
  m.diverged = m.q_u_divergence.flag || m.q_s_divergence.flag;
  return res;
}

const std::vector<std::string>& sweepable_params() {
  static const std::vector<std::string> names = {"V", "sigma_h", "c_th", "E_max_h", "r_max", "Gamma_th", "a_bar"};
  return names;
}

void validate(const SweepSpec& spec) {
  const auto& names = sweepable_params();
  if (std::find(names.begin(), names.end(), spec.param) == names.end())
    throw ConfigError("sweep: parameter '" + spec.param + "' cannot be swept");
  if (spec.values.empty()) throw ConfigError("sweep: value list is empty");
  if (spec.replications < 1) throw ConfigError("sweep: replications must be >= 1");
  if (spec.policies.empty()) throw ConfigError("sweep: no policy selected");
}

SystemParams cell_params(const SweepSpec& spec, double value, int replication) {
  SystemParams p = spec.base;
  set_numeric(p, spec.param, value);
  p.seed = spec.base.seed + static_cast<std::uint64_t>(replication);
  resolve(p);
  return p;
}

namespace {

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    s.std = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return s;
}

}  // namespace

SweepResult sweep(const SweepSpec& spec) {
  validate(spec);
  SweepResult res;
  res.spec = spec;
  for (double v : spec.values)
    for (PolicyId pol : spec.policies)
      for (int r = 0; r < spec.replications; ++r) {
        SweepCell c;
        c.value = v;
        c.policy = pol;
        c.replication = r;
        c.seed = spec.base.seed + static_cast<std::uint64_t>(r);
        res.cells.push_back(c);
      }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < res.cells.size(); i = next++) {
      SweepCell& c = res.cells[i];
      try {
        SystemParams p = cell_params(spec, c.value, c.replication);
        c.metrics = run(p, c.policy);
      } catch (const std::exception& e) {
        c.error = e.what();
      }
    }
  };
  unsigned nt = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, res.cells.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < nt; ++k) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < res.cells.size(); i += static_cast<std::size_t>(spec.replications)) {
    SweepAggregate agg;
    agg.value = res.cells[i].value;
    agg.policy = res.cells[i].policy;
    std::vector<double> r, qu, qs, c, la, li;
    for (int k = 0; k < spec.replications; ++k) {
      const SweepCell& cell = res.cells[i + static_cast<std::size_t>(k)];
      ++agg.runs;
      if (!cell.error.empty()) {
        ++agg.failed;
        continue;
      }
      agg.energy_violations += cell.metrics.energy_violations;
      if (cell.metrics.diverged) {
        ++agg.diverged;
        continue;
      }
      ++agg.included;
      r.push_back(cell.metrics.R_bar);
      qu.push_back(cell.metrics.Q_U_bar);
      qs.push_back(cell.metrics.Q_S_bar);
      c.push_back(cell.metrics.c_bar);
      la.push_back(cell.metrics.l_off_active);
      li.push_back(cell.metrics.l_off_idle);
    }
    agg.R_bar = stat_of(r);
    agg.Q_U_bar = stat_of(qu);
    agg.Q_S_bar = stat_of(qs);
    agg.c_bar = stat_of(c);
    agg.l_off_active = stat_of(la);
    agg.l_off_idle = stat_of(li);
    res.aggregates.push_back(agg);
  }
  return res;
}

}  // namespace plyse
