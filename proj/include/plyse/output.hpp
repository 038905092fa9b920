#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "plyse/capacity.hpp"
#include "plyse/config.hpp"
#include "plyse/engine.hpp"
#include "plyse/oracle.hpp"

namespace plyse {

inline constexpr int kOutputDigits = 12;

std::string fmt12(double v);
// Value rounded to 12 significant digits so JSON serializes it that way.
double round12(double v);

// Pretty JSON with every float printed at 12 significant digits.
std::string json_text(const nlohmann::ordered_json& j);

nlohmann::ordered_json params_json(const SystemParams& p);
nlohmann::ordered_json metrics_json(const RunMetrics& m);
nlohmann::ordered_json capacity_json(const CapacityReport& r, const SystemParams& p);

// "# key=value" lines carrying the resolved parameters ahead of a CSV header.
void write_params_comment(std::ostream& out, const SystemParams& p);

void write_run_json(std::ostream& out, const RunMetrics& m, const SystemParams& p);
void write_state_trace_csv(std::ostream& out, const std::vector<StateRecord>& states, const SystemParams& p);
void write_window_trace_csv(std::ostream& out, const RunMetrics& m, const SystemParams& p);
void write_sweep_csv(std::ostream& out, const SweepResult& r, bool header = true);
void write_sweep_summary_csv(std::ostream& out, const SweepResult& r, bool header = true);
void write_oracle_csv(std::ostream& out, const OracleReport& r, const SystemParams& p, std::uint64_t seed);
nlohmann::ordered_json oracle_summary_json(const OracleReport& r, const SystemParams& p, std::uint64_t seed);

}  // namespace plyse
