#include "plyse/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace plyse {

using nlohmann::ordered_json;

std::string fmt12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", kOutputDigits, v);
  return buf;
}

double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(fmt12(v));
}

namespace {

ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

ordered_json series(const std::vector<double>& xs) {
  ordered_json a = ordered_json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

ordered_json divergence_json(const Divergence& d) {
  return ordered_json{{"flag", d.flag}, {"slope_per_window", num(d.slope)}, {"trace_mean", num(d.mean)}};
}

void emit(std::string& out, const ordered_json& j, int depth) {
  auto pad = [&](int d) { out.append(static_cast<std::size_t>(2 * d), ' '); };
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        pad(depth + 1);
        out += ordered_json(it.key()).dump() + ": ";
        emit(out, it.value(), depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      pad(depth);
      out += "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        pad(depth + 1);
        emit(out, j[i], depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      pad(depth);
      out += "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      double v = j.get<double>();
      out += std::isfinite(v) ? fmt12(v) : "null";
      return;
    }
    default: out += j.dump();
  }
}

}  // namespace

std::string json_text(const ordered_json& j) {
  std::string out;
  emit(out, j, 0);
  out += "\n";
  return out;
}

ordered_json params_json(const SystemParams& p) {
  ordered_json j;
  for (const auto& [k, v] : describe(p, kOutputDigits)) {
    if (k == "omega_mode" || k == "pu_model" || k == "policy") {
      j[k] = v;
    } else if (k == "N" || k == "window") {
      j[k] = std::stoll(v);
    } else if (k == "seed") {
      j[k] = std::stoull(v);
    } else {
      j[k] = num(std::stod(v));
    }
  }
  return j;
}

ordered_json metrics_json(const RunMetrics& m) {
  ordered_json j;
  j["policy"] = to_string(m.policy);
  j["seed"] = m.seed;
  j["N"] = m.N;
  j["window"] = m.window;
  j["R_bar"] = num(m.R_bar);
  j["Q_U_bar"] = num(m.Q_U_bar);
  j["Q_S_bar"] = num(m.Q_S_bar);
  j["c_bar"] = num(m.c_bar);
  j["energy_violations"] = m.energy_violations;
  j["interference_violations"] = m.interference_violations;
  j["max_Q_U"] = num(m.max_Q_U);
  j["min_B"] = num(m.min_B);
  j["max_B"] = num(m.max_B);
  j["l_off_active"] = num(m.l_off_active);
  j["l_off_idle"] = num(m.l_off_idle);
  j["l_loc_total"] = num(m.l_loc_total);
  j["active_slots"] = m.active_slots;
  j["q_u_divergence"] = divergence_json(m.q_u_divergence);
  j["q_s_divergence"] = divergence_json(m.q_s_divergence);
  j["diverged"] = m.diverged;
  j["warnings"] = m.warnings;
  j["traces"] = ordered_json{{"Q_U", series(m.traces.Q_U)},
                             {"Q_S", series(m.traces.Q_S)},
                             {"c", series(m.traces.c)},
                             {"B", series(m.traces.B)}};
  return j;
}

ordered_json capacity_json(const CapacityReport& r, const SystemParams& p) {
  ordered_json roots = ordered_json::array();
  for (double x : r.roots) roots.push_back(num(x));
  ordered_json j;
  j["q_max"] = num(r.q_max);
  j["e_max_u"] = num(r.e_max_u);
  j["A1"] = num(r.A1);
  j["A2"] = num(r.A2);
  j["A3"] = num(r.A3);
  j["roots"] = roots;
  j["x_max"] = num(r.x_max);
  j["sensing_term"] = num(r.sensing_term);
  j["cubic_term"] = num(r.cubic_term);
  j["omega_threshold"] = num(r.omega_threshold);
  j["branch"] = r.branch;
  j["condition_at_threshold"] = num(capacity_condition(p, r.omega_threshold));
  j["sensing_bound"] = num(sensing_bound(p));
  j["params"] = params_json(p);
  return j;
}

void write_params_comment(std::ostream& out, const SystemParams& p) {
  for (const auto& [k, v] : describe(p, kOutputDigits)) out << "# " << k << "=" << v << "\n";
}

void write_run_json(std::ostream& out, const RunMetrics& m, const SystemParams& p) {
  ordered_json j;
  j["metrics"] = metrics_json(m);
  j["params"] = params_json(p);
  out << json_text(j);
}

void write_state_trace_csv(std::ostream& out, const std::vector<StateRecord>& states, const SystemParams& p) {
  write_params_comment(out, p);
  out << "slot,Q_U,Q_S,B,Z,r,p_u,f_u,f_s,a_t\n";
  for (const auto& rec : states) {
    out << rec.state.slot << ',' << fmt12(rec.state.Q_U) << ',' << fmt12(rec.state.Q_S) << ',' << fmt12(rec.state.B)
        << ',' << fmt12(rec.state.Z) << ',' << fmt12(rec.action.r) << ',' << fmt12(rec.action.p_u) << ','
        << fmt12(rec.action.f_u) << ',' << fmt12(rec.action.f_s) << ',' << rec.a << '\n';
  }
}

void write_window_trace_csv(std::ostream& out, const RunMetrics& m, const SystemParams& p) {
  write_params_comment(out, p);
  out << "policy,window_index,slot_end,Q_U,Q_S,c,B\n";
  for (std::size_t k = 0; k < m.traces.Q_U.size(); ++k) {
    std::int64_t end = std::min<std::int64_t>(static_cast<std::int64_t>(k + 1) * m.window, m.N);
    out << to_string(m.policy) << ',' << k << ',' << end << ',' << fmt12(m.traces.Q_U[k]) << ','
        << fmt12(m.traces.Q_S[k]) << ',' << fmt12(m.traces.c[k]) << ',' << fmt12(m.traces.B[k]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& r, bool header) {
  if (header) {
    write_params_comment(out, r.spec.base);
    out << "# replications=" << r.spec.replications << "\n";
    out << "param,value,policy,seed,R_bar,Q_U_bar,Q_S_bar,c_bar,violations,diverged,l_off_active,l_off_idle,error\n";
  }
  for (const auto& c : r.cells) {
    out << r.spec.param << ',' << fmt12(c.value) << ',' << to_string(c.policy) << ',' << c.seed << ',';
    if (c.error.empty()) {
      const RunMetrics& m = c.metrics;
      out << fmt12(m.R_bar) << ',' << fmt12(m.Q_U_bar) << ',' << fmt12(m.Q_S_bar) << ',' << fmt12(m.c_bar) << ','
          << m.energy_violations << ',' << (m.diverged ? 1 : 0) << ',' << fmt12(m.l_off_active) << ','
          << fmt12(m.l_off_idle) << ",\n";
    } else {
      std::string e = c.error;
      for (char& ch : e)
        if (ch == ',' || ch == '\n') ch = ';';
      out << ",,,,,,,," << e << '\n';
    }
  }
}

void write_sweep_summary_csv(std::ostream& out, const SweepResult& r, bool header) {
  if (header) {
    write_params_comment(out, r.spec.base);
    out << "# replications=" << r.spec.replications << "\n";
    out << "param,value,policy,runs,included,diverged,failed,R_bar_mean,R_bar_std,Q_U_bar_mean,Q_U_bar_std,"
         "Q_S_bar_mean,Q_S_bar_std,c_bar_mean,c_bar_std,l_off_active_mean,l_off_idle_mean,violations\n";
  }
  for (const auto& a : r.aggregates) {
    out << r.spec.param << ',' << fmt12(a.value) << ',' << to_string(a.policy) << ',' << a.runs << ',' << a.included
        << ',' << a.diverged << ',' << a.failed << ',' << fmt12(a.R_bar.mean) << ',' << fmt12(a.R_bar.std) << ','
        << fmt12(a.Q_U_bar.mean) << ',' << fmt12(a.Q_U_bar.std) << ',' << fmt12(a.Q_S_bar.mean) << ','
        << fmt12(a.Q_S_bar.std) << ',' << fmt12(a.c_bar.mean) << ',' << fmt12(a.c_bar.std) << ','
        << fmt12(a.l_off_active.mean) << ',' << fmt12(a.l_off_idle.mean) << ',' << a.energy_violations << '\n';
  }
}

void write_oracle_csv(std::ostream& out, const OracleReport& r, const SystemParams& p, std::uint64_t seed) {
  write_params_comment(out, p);
  out << "# oracle_seed=" << seed << "\n";
  out << "case,state_hash,op,closed_form,oracle,gap,pass\n";
  char hash[24];
  for (const auto& row : r.rows) {
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(row.hash));
    out << row.index << ',' << hash << ',' << row.op << ',' << fmt12(row.closed_form) << ',' << fmt12(row.oracle)
        << ',' << fmt12(row.gap) << ',' << (row.pass ? 1 : 0) << '\n';
  }
}

ordered_json oracle_summary_json(const OracleReport& r, const SystemParams& p, std::uint64_t seed) {
  ordered_json ops = ordered_json::array();
  for (const auto& s : r.summary)
    ops.push_back(ordered_json{{"op", s.op}, {"cases", s.cases}, {"failures", s.failures}, {"max_gap", num(s.max_gap)}});
  ordered_json j;
  j["tolerance"] = num(r.tolerance);
  j["oracle_seed"] = seed;
  j["failures"] = r.failures();
  j["pass"] = r.failures() == 0;
  j["ops"] = ops;
  j["params"] = params_json(p);
  return j;
}

}  // namespace plyse
