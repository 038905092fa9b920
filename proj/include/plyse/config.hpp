#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plyse {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

enum class PuModel { IidBernoulli, TwoStateMarkov };

// How Omega was obtained. Fixed is a user number; the other two are recomputed
// whenever V, lambda_e or the energy constants change (e.g. inside a sweep).
enum class OmegaMode { Fixed, Threshold, SensingBound };

enum class PolicyId { Plyse, Lco, Eco, QsOblivious };

std::string to_string(PolicyId id);
PolicyId parse_policy(const std::string& name);
std::vector<PolicyId> all_policies();

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SystemParams {
  double T = 1.0;
  double W = 1e6;
  double P_B = dbm_to_watts(33.0);
  double p_max = dbm_to_watts(20.0);
  double e_col_unit = 1e-8;
  double r_max = 1e7;
  double kappa_c = 1e-26;
  double kappa_e = 1e-26;
  double C = 100.0;
  double f_max_u = 4e8;
  double f_max_s = 4e9;
  double B_min = 1e-3;
  double delta_s2 = dbm_to_watts(-174.0);
  double delta_p2 = dbm_to_watts(-174.0);
  double c_th = 1.6;
  double Gamma_th = 125.0 * 1e6 * dbm_to_watts(-174.0);
  double a_bar = 0.6;
  double E_max_h = 0.6;
  double V = 256e7;
  double lambda_e = 1e7;
  double lambda_c = 1e7;
  double Omega = 0.0;
  OmegaMode omega_mode = OmegaMode::SensingBound;
  double d_g = 500.0;
  double d_h = 50.0;
  double d_hbar = 50.0;
  double sigma_g = 2.7;
  double sigma_h = 2.7;
  double sigma_hbar = 2.7;
  double G_A = 4.11;
  double f_c = 2.4e9;
  std::int64_t N = 60000;
  std::uint64_t seed = 1;
  PuModel pu_model = PuModel::IidBernoulli;
  std::optional<double> p01;  // idle -> active
  std::optional<double> p10;  // active -> idle
  std::int64_t window = 400;
  PolicyId policy = PolicyId::Plyse;

  bool operator==(const SystemParams&) const = default;
};

// Ordered key/value document. Later set() calls override earlier values.
class ConfigDocument {
 public:
  static ConfigDocument parse(const std::string& text);
  static ConfigDocument from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  void set_assignment(const std::string& key_eq_value);
  const std::map<std::string, std::string>& entries() const { return entries_; }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }

 private:
  std::map<std::string, std::string> entries_;
};

SystemParams load_params(const ConfigDocument& doc);
SystemParams default_params();

// Re-derive Omega (non-fixed modes) and validate. Call after editing fields.
void resolve(SystemParams& p);
void validate(const SystemParams& p);

double gamma_th_from_multiplier(double m, const SystemParams& p);

// Markov transition probabilities; defaults keep the stationary rate at a_bar.
double markov_p01(const SystemParams& p);
double markov_p10(const SystemParams& p);

// key=value text that load_params() maps back to an identical SystemParams.
std::string serialize(const SystemParams& p);

// Resolved values as (key, value) pairs in a fixed order; used to embed
// parameters in output artifacts.
std::vector<std::pair<std::string, std::string>> describe(const SystemParams& p, int digits);

const std::vector<std::string>& known_keys();

// Read-write access to the numeric fields a sweep can vary.
double get_numeric(const SystemParams& p, const std::string& key);
void set_numeric(SystemParams& p, const std::string& key, double value);

}  // namespace plyse
