// Command-line front end: run, sweep, capacity, oracle-check, replay.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plyse/capacity.hpp"
#include "plyse/config.hpp"
#include "plyse/engine.hpp"
#include "plyse/environment.hpp"
#include "plyse/oracle.hpp"
#include "plyse/output.hpp"

namespace fs = std::filesystem;
using namespace plyse;

namespace {

constexpr const char* kOutEnv = "PLYSE_OUT_DIR";

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string policy;
  std::int64_t seed = -1;
  std::string out;
  std::int64_t window = 0;
};

void add_common(CLI::App* app, Common& c, bool with_policy) {
  app->add_option("--config", c.config, "key=value parameter file");
  app->add_option("--set", c.sets, "override, key=value (repeatable)");
  if (with_policy) app->add_option("--policy", c.policy, "plyse | lco | eco | qso | all");
  app->add_option("--seed", c.seed, "master RNG seed");
  app->add_option("--out", c.out, std::string("output directory (default $") + kOutEnv + " or ./out)");
  app->add_option("--window", c.window, "moving-window length in slots");
}

ConfigDocument build_doc(const Common& c) {
  ConfigDocument doc = c.config.empty() ? ConfigDocument{} : ConfigDocument::from_file(c.config);
  for (const auto& s : c.sets) doc.set_assignment(s);
  if (c.seed >= 0) doc.set("seed", std::to_string(c.seed));
  if (c.window > 0) doc.set("window", std::to_string(c.window));
  if (!c.policy.empty() && c.policy != "all") doc.set("policy", c.policy);
  return doc;
}

fs::path out_dir(const Common& c) {
  std::string dir = c.out;
  if (dir.empty()) {
    const char* env = std::getenv(kOutEnv);
    dir = env && *env ? env : "out";
  }
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

std::vector<PolicyId> policies_from(const std::string& arg, PolicyId fallback) {
  if (arg.empty()) return {fallback};
  if (arg == "all") return all_policies();
  std::vector<PolicyId> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_policy(item));
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = std::stod(item, &used);
    if (used != item.size()) throw ConfigError("bad number in list: '" + item + "'");
    v.push_back(x);
  }
  return v;
}

void report_warnings(const RunMetrics& m) {
  for (const auto& w : m.warnings) std::cerr << "warning: " << to_string(m.policy) << ": " << w << "\n";
}

void write_run_artifacts(const fs::path& dir, const std::string& stem, const RunResult& res, const SystemParams& p) {
  auto js = open_out(dir / (stem + ".json"));
  write_run_json(js, res.metrics, p);
  auto tr = open_out(dir / (stem + "_trace.csv"));
  write_state_trace_csv(tr, res.states, p);
  auto wt = open_out(dir / (stem + "_windows.csv"));
  write_window_trace_csv(wt, res.metrics, p);
}

void print_metrics_line(const RunMetrics& m) {
  std::cout << to_string(m.policy) << " seed=" << m.seed << " R_bar=" << fmt12(m.R_bar) << " Q_U_bar=" << fmt12(m.Q_U_bar)
            << " Q_S_bar=" << fmt12(m.Q_S_bar) << " c_bar=" << fmt12(m.c_bar)
            << " energy_violations=" << m.energy_violations << " diverged=" << (m.diverged ? 1 : 0) << "\n";
}

int cmd_run(const Common& c, bool dump_events) {
  SystemParams base = load_params(build_doc(c));
  fs::path dir = out_dir(c);
  for (PolicyId pol : policies_from(c.policy, base.policy)) {
    SystemParams p = base;
    p.policy = pol;
    RunOptions opt;
    opt.record_states = true;
    opt.record_events = dump_events;
    RunResult res = run_detailed(p, pol, opt);
    report_warnings(res.metrics);
    std::string stem = "run_" + to_string(pol) + "_seed" + std::to_string(p.seed);
    write_run_artifacts(dir, stem, res, p);
    if (dump_events) {
      auto ev = open_out(dir / (stem + "_events.csv"));
      write_event_trace(ev, res.events);
    }
    print_metrics_line(res.metrics);
  }
  return 0;
}

int cmd_replay(const Common& c, const std::string& events_path) {
  SystemParams base = load_params(build_doc(c));
  std::ifstream in(events_path);
  if (!in) throw std::runtime_error("cannot open event trace '" + events_path + "'");
  std::vector<RandomEvent> events = read_event_trace(in);
  if (events.empty()) throw std::runtime_error("event trace is empty");
  base.N = static_cast<std::int64_t>(events.size());
  fs::path dir = out_dir(c);
  for (PolicyId pol : policies_from(c.policy, base.policy)) {
    SystemParams p = base;
    p.policy = pol;
    RunOptions opt;
    opt.record_states = true;
    opt.replay = &events;
    RunResult res = run_detailed(p, pol, opt);
    report_warnings(res.metrics);
    write_run_artifacts(dir, "replay_" + to_string(pol), res, p);
    print_metrics_line(res.metrics);
  }
  return 0;
}

int cmd_capacity(const Common& c) {
  SystemParams p = load_params(build_doc(c));
  CapacityReport r = omega_threshold(p);
  std::string text = json_text(capacity_json(r, p));
  auto f = open_out(out_dir(c) / "capacity.json");
  f << text;
  std::cout << text;
  return 0;
}

int cmd_oracle(const Common& c, std::size_t n, double tol) {
  SystemParams p = load_params(build_doc(c));
  OracleReport rep = oracle_check(p, n, p.seed, tol);
  fs::path dir = out_dir(c);
  auto csv = open_out(dir / "oracle_check.csv");
  write_oracle_csv(csv, rep, p, p.seed);
  std::string summary = json_text(oracle_summary_json(rep, p, p.seed));
  auto js = open_out(dir / "oracle_summary.json");
  js << summary;
  for (const auto& s : rep.summary)
    std::cout << (s.failures == 0 ? "PASS " : "FAIL ") << s.op << " cases=" << s.cases << " failures=" << s.failures
              << " max_gap=" << fmt12(s.max_gap) << "\n";
  return rep.failures() == 0 ? 0 : 1;
}

struct SweepJob {
  std::string param;
  std::vector<double> values;
};

std::vector<double> powers_of_two_e7() {
  std::vector<double> v;
  for (double x = 1; x <= 1024; x *= 2) v.push_back(x * 1e7);
  return v;
}

void print_aggregates(const SweepResult& r) {
  for (const auto& a : r.aggregates)
    std::cout << r.spec.param << "=" << fmt12(a.value) << " " << to_string(a.policy) << " R_bar=" << fmt12(a.R_bar.mean)
              << "+-" << fmt12(a.R_bar.std) << " Q_U_bar+Q_S_bar=" << fmt12(a.Q_U_bar.mean + a.Q_S_bar.mean)
              << " included=" << a.included << "/" << a.runs << "\n";
}

int cmd_fig2(const Common& c, int reps) {
  SystemParams base = load_params(build_doc(c));
  fs::path dir = out_dir(c);
  auto f = open_out(dir / "fig2-feasibility.csv");
  write_params_comment(f, base);
  f << "c_th,policy,seed,window_index,slot_end,Q_U,Q_S,c,B,diverged\n";
  for (double cth : {1.6, 0.2}) {
    SweepSpec spec;
    spec.param = "c_th";
    spec.values = {cth};
    spec.replications = reps;
    spec.base = base;
    spec.policies = all_policies();
    SweepResult r = sweep(spec);
    for (const auto& cell : r.cells) {
      if (!cell.error.empty()) {
        std::cerr << "error: " << to_string(cell.policy) << " seed " << cell.seed << ": " << cell.error << "\n";
        continue;
      }
      const RunMetrics& m = cell.metrics;
      for (std::size_t k = 0; k < m.traces.Q_U.size(); ++k) {
        std::int64_t end = std::min<std::int64_t>(static_cast<std::int64_t>(k + 1) * m.window, m.N);
        f << fmt12(cth) << ',' << to_string(m.policy) << ',' << m.seed << ',' << k << ',' << end << ','
          << fmt12(m.traces.Q_U[k]) << ',' << fmt12(m.traces.Q_S[k]) << ',' << fmt12(m.traces.c[k]) << ','
          << fmt12(m.traces.B[k]) << ',' << (m.diverged ? 1 : 0) << '\n';
      }
    }
    print_aggregates(r);
  }
  return 0;
}

int cmd_sweep(const Common& c, const std::string& family, const std::string& param, const std::string& values,
              int reps, unsigned threads) {
  if (family == "fig2-feasibility") return cmd_fig2(c, reps);
  SystemParams base = load_params(build_doc(c));
  std::vector<SweepJob> jobs;
  std::vector<PolicyId> pols;
  std::string name = family;
  if (family.empty()) {
    if (param.empty() || values.empty()) throw ConfigError("sweep: give --family or both --param and --values");
    jobs.push_back({param, parse_list(values)});
    pols = policies_from(c.policy.empty() ? "plyse" : c.policy, base.policy);
    name = "sweep_" + param;
  } else if (family == "fig3-Vsweep") {
    jobs.push_back({"V", powers_of_two_e7()});
    pols = policies_from(c.policy.empty() ? "plyse" : c.policy, base.policy);
  } else if (family == "fig4-activity") {
    jobs.push_back({"a_bar", {0.2, 0.4, 0.6, 0.8}});
    std::vector<double> g;
    for (double m : {5.0, 25.0, 125.0, 625.0}) g.push_back(gamma_th_from_multiplier(m, base));
    jobs.push_back({"Gamma_th", g});
    pols = policies_from(c.policy.empty() ? "plyse" : c.policy, base.policy);
  } else if (family == "fig5-comparisons") {
    jobs.push_back({"sigma_h", {2.5, 2.6, 2.7, 2.8, 2.9, 3.0}});
    jobs.push_back({"c_th", {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6}});
    jobs.push_back({"E_max_h", {0.0375, 0.075, 0.15, 0.3, 0.6, 1.2}});
    jobs.push_back({"r_max", {2.5e6, 5e6, 1e7, 2e7}});
    pols = policies_from(c.policy.empty() ? "all" : c.policy, base.policy);
  } else {
    throw ConfigError("sweep: unknown family '" + family + "'");
  }

  fs::path dir = out_dir(c);
  auto rows = open_out(dir / (name + ".csv"));
  auto summary = open_out(dir / (name + "_summary.csv"));
  bool first = true;
  for (const auto& job : jobs) {
    SweepSpec spec;
    spec.param = job.param;
    spec.values = job.values;
    spec.replications = reps;
    spec.base = base;
    spec.policies = pols;
    spec.threads = threads;
    SweepResult r = sweep(spec);
    write_sweep_csv(rows, r, first);
    write_sweep_summary_csv(summary, r, first);
    first = false;
    for (const auto& cell : r.cells)
      if (!cell.error.empty())
        std::cerr << "error: " << job.param << "=" << fmt12(cell.value) << " " << to_string(cell.policy) << ": "
                  << cell.error << "\n";
    print_aggregates(r);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbed-Lyapunov control simulator for a cognitive energy-harvesting edge-computing link"};
  app.require_subcommand(1);

  Common run_c, sweep_c, cap_c, orc_c, rep_c;
  bool dump_events = false;
  auto* run = app.add_subcommand("run", "simulate N slots under one policy (or all)");
  add_common(run, run_c, true);
  run->add_flag("--dump-events", dump_events, "also write the per-slot event trace");

  std::string family, param, values;
  int reps = 5;
  unsigned threads = 0;
  auto* sw = app.add_subcommand("sweep", "replicated parameter sweep");
  add_common(sw, sweep_c, true);
  sw->add_option("--family", family, "fig2-feasibility | fig3-Vsweep | fig4-activity | fig5-comparisons");
  sw->add_option("--param", param, "swept parameter");
  sw->add_option("--values", values, "comma-separated values");
  sw->add_option("--replications", reps, "runs per cell")->check(CLI::PositiveNumber);
  sw->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* cap = app.add_subcommand("capacity", "battery-capacity threshold report");
  add_common(cap, cap_c, false);

  std::size_t n = 1000;
  double tol = 1e-4;
  auto* orc = app.add_subcommand("oracle-check", "compare closed-form decisions with grid maxima");
  add_common(orc, orc_c, false);
  orc->add_option("--n", n, "number of random (state, event) cases");
  orc->add_option("--tol", tol, "relative objective-gap tolerance");

  std::string events_path;
  auto* rep = app.add_subcommand("replay", "rerun a policy on a dumped event trace");
  add_common(rep, rep_c, true);
  rep->add_option("--events", events_path, "event trace CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_c, dump_events);
    if (*sw) return cmd_sweep(sweep_c, family, param, values, reps, threads);
    if (*cap) return cmd_capacity(cap_c);
    if (*orc) return cmd_oracle(orc_c, n, tol);
    if (*rep) return cmd_replay(rep_c, events_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
