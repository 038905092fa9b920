#include "plyse/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "plyse/capacity.hpp"

namespace plyse {

namespace {

struct DoubleField {
  const char* key;
  double SystemParams::*member;
  bool power;  // accepts dBm / dBm/Hz suffixes
};

const std::vector<DoubleField>& double_fields() {
  static const std::vector<DoubleField> fields = {
      {"T", &SystemParams::T, false},
      {"W", &SystemParams::W, false},
      {"P_B", &SystemParams::P_B, true},
      {"p_max", &SystemParams::p_max, true},
      {"e_col_unit", &SystemParams::e_col_unit, false},
      {"r_max", &SystemParams::r_max, false},
      {"kappa_c", &SystemParams::kappa_c, false},
      {"kappa_e", &SystemParams::kappa_e, false},
      {"C", &SystemParams::C, false},
      {"f_max_u", &SystemParams::f_max_u, false},
      {"f_max_s", &SystemParams::f_max_s, false},
      {"B_min", &SystemParams::B_min, false},
      {"delta_s2", &SystemParams::delta_s2, true},
      {"delta_p2", &SystemParams::delta_p2, true},
      {"c_th", &SystemParams::c_th, false},
      {"Gamma_th", &SystemParams::Gamma_th, true},
      {"a_bar", &SystemParams::a_bar, false},
      {"E_max_h", &SystemParams::E_max_h, false},
      {"V", &SystemParams::V, false},
      {"lambda_e", &SystemParams::lambda_e, false},
      {"lambda_c", &SystemParams::lambda_c, false},
      {"d_g", &SystemParams::d_g, false},
      {"d_h", &SystemParams::d_h, false},
      {"d_hbar", &SystemParams::d_hbar, false},
      {"sigma_g", &SystemParams::sigma_g, false},
      {"sigma_h", &SystemParams::sigma_h, false},
      {"sigma_hbar", &SystemParams::sigma_hbar, false},
      {"G_A", &SystemParams::G_A, false},
      {"f_c", &SystemParams::f_c, false},
  };
  return fields;
}

const DoubleField* find_field(const std::string& key) {
  for (const auto& f : double_fields())
    if (key == f.key) return &f;
  return nullptr;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

double parse_plain(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("parse error: key '" + key + "' expects a number, got '" + text + "'");
  return v;
}

double parse_value(const DoubleField& f, const std::string& text) {
  std::string t = trim(text);
  if (f.power) {
    if (ends_with(t, "dBm/Hz")) return dbm_to_watts(parse_plain(f.key, t.substr(0, t.size() - 6)));
    if (ends_with(t, "dBm")) return dbm_to_watts(parse_plain(f.key, t.substr(0, t.size() - 3)));
  }
  return parse_plain(f.key, t);
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  double v = parse_plain(key, text);
  if (v != std::floor(v) || std::abs(v) > 9.0e15)
    throw ConfigError("parse error: key '" + key + "' expects an integer, got '" + text + "'");
  return static_cast<std::int64_t>(v);
}

std::uint64_t parse_seed(const std::string& text) {
  std::string t = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (!t.empty() && ec == std::errc() && ptr == t.data() + t.size()) return v;
  std::int64_t i = parse_int("seed", text);
  if (i < 0) throw ConfigError("parse error: seed must be nonnegative");
  return static_cast<std::uint64_t>(i);
}

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string omega_word(OmegaMode m) {
  switch (m) {
    case OmegaMode::Threshold: return "auto";
    case OmegaMode::SensingBound: return "sensing-bound";
    case OmegaMode::Fixed: break;
  }
  return "fixed";
}

[[noreturn]] void invalid(const std::string& what) { throw ConfigError("validation error: " + what); }

}  // namespace

std::string to_string(PolicyId id) {
  switch (id) {
    case PolicyId::Plyse: return "plyse";
    case PolicyId::Lco: return "lco";
    case PolicyId::Eco: return "eco";
    case PolicyId::QsOblivious: return "qso";
  }
  return "unknown";
}

PolicyId parse_policy(const std::string& name) {
  std::string n;
  for (char c : trim(name)) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (n == "plyse") return PolicyId::Plyse;
  if (n == "lco") return PolicyId::Lco;
  if (n == "eco") return PolicyId::Eco;
  if (n == "qso" || n == "qs-oblivious" || n == "qs_oblivious") return PolicyId::QsOblivious;
  throw ConfigError("unknown policy '" + name + "' (expected plyse, lco, eco or qso)");
}

std::vector<PolicyId> all_policies() {
  return {PolicyId::Plyse, PolicyId::Lco, PolicyId::Eco, PolicyId::QsOblivious};
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : double_fields()) k.emplace_back(f.key);
    for (const char* extra : {"Gamma_th_mult", "Omega", "N", "seed", "pu_model", "p01", "p10", "window", "policy"})
      k.emplace_back(extra);
    return k;
  }();
  return keys;
}

ConfigDocument ConfigDocument::parse(const std::string& text) {
  ConfigDocument doc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("parse error: line " + std::to_string(lineno) + " has no '='");
    doc.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return doc;
}

ConfigDocument ConfigDocument::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ConfigDocument::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw ConfigError("parse error: unknown key '" + key + "'");
  entries_[key] = value;
}

void ConfigDocument::set_assignment(const std::string& key_eq_value) {
  auto eq = key_eq_value.find('=');
  if (eq == std::string::npos) throw ConfigError("parse error: override '" + key_eq_value + "' is not key=value");
  set(trim(key_eq_value.substr(0, eq)), trim(key_eq_value.substr(eq + 1)));
}

SystemParams default_params() { return load_params(ConfigDocument{}); }

SystemParams load_params(const ConfigDocument& doc) {
  SystemParams p;
  std::optional<double> gamma_mult;
  bool gamma_explicit = false;

  for (const auto& [key, value] : doc.entries()) {
    if (const DoubleField* f = find_field(key)) {
      p.*(f->member) = parse_value(*f, value);
      if (key == "Gamma_th") gamma_explicit = true;
    } else if (key == "Gamma_th_mult") {
      gamma_mult = parse_plain(key, value);
    } else if (key == "Omega") {
      std::string v = trim(value);
      if (v == "auto" || v == "threshold") {
        p.omega_mode = OmegaMode::Threshold;
      } else if (v == "sensing-bound") {
        p.omega_mode = OmegaMode::SensingBound;
      } else {
        p.omega_mode = OmegaMode::Fixed;
        p.Omega = parse_plain(key, v);
      }
    } else if (key == "N") {
      p.N = parse_int(key, value);
    } else if (key == "window") {
      p.window = parse_int(key, value);
    } else if (key == "seed") {
      p.seed = parse_seed(value);
    } else if (key == "pu_model") {
      std::string v = trim(value);
      if (v == "iid-bernoulli") p.pu_model = PuModel::IidBernoulli;
      else if (v == "two-state-markov") p.pu_model = PuModel::TwoStateMarkov;
      else throw ConfigError("parse error: pu_model must be iid-bernoulli or two-state-markov");
    } else if (key == "p01") {
      p.p01 = parse_plain(key, value);
    } else if (key == "p10") {
      p.p10 = parse_plain(key, value);
    } else if (key == "policy") {
      p.policy = parse_policy(value);
    }
  }

  if (gamma_explicit && gamma_mult) throw ConfigError("parse error: set either Gamma_th or Gamma_th_mult, not both");
  if (!gamma_explicit) {
    double m = gamma_mult.value_or(125.0);
    if (!(m > 0.0)) invalid("Gamma_th_mult must be > 0");
    p.Gamma_th = gamma_th_from_multiplier(m, p);
  }
  resolve(p);
  return p;
}

double gamma_th_from_multiplier(double m, const SystemParams& p) {
  if (!(m > 0.0)) throw std::invalid_argument("gamma_th_from_multiplier: m must be > 0");
  return m * p.W * p.delta_p2;
}

double markov_p01(const SystemParams& p) { return p.p01.value_or(0.5 * p.a_bar); }
double markov_p10(const SystemParams& p) { return p.p10.value_or(0.5 * (1.0 - p.a_bar)); }

void validate(const SystemParams& p) {
  for (const auto& f : double_fields()) {
    double v = p.*(f.member);
    if (!std::isfinite(v)) invalid(std::string(f.key) + " must be finite");
  }
  const std::pair<const char*, double> positive[] = {
      {"T", p.T}, {"W", p.W}, {"P_B", p.P_B}, {"e_col_unit", p.e_col_unit}, {"kappa_c", p.kappa_c},
      {"kappa_e", p.kappa_e}, {"C", p.C}, {"f_max_u", p.f_max_u}, {"f_max_s", p.f_max_s},
      {"B_min", p.B_min}, {"delta_s2", p.delta_s2}, {"delta_p2", p.delta_p2}, {"c_th", p.c_th},
      {"Gamma_th", p.Gamma_th}, {"lambda_e", p.lambda_e}, {"lambda_c", p.lambda_c}, {"d_g", p.d_g},
      {"d_h", p.d_h}, {"d_hbar", p.d_hbar}, {"sigma_g", p.sigma_g}, {"sigma_h", p.sigma_h},
      {"sigma_hbar", p.sigma_hbar}, {"G_A", p.G_A}, {"f_c", p.f_c}};
  for (const auto& [name, v] : positive)
    if (!(v > 0.0)) invalid(std::string(name) + " must be > 0 (got " + fmt(v, 12) + ")");
  const std::pair<const char*, double> nonneg[] = {
      {"p_max", p.p_max}, {"r_max", p.r_max}, {"E_max_h", p.E_max_h}, {"V", p.V}};
  for (const auto& [name, v] : nonneg)
    if (!(v >= 0.0)) invalid(std::string(name) + " must be >= 0 (got " + fmt(v, 12) + ")");
  if (!(p.a_bar >= 0.0 && p.a_bar <= 1.0)) invalid("a_bar must lie in [0,1] (got " + fmt(p.a_bar, 12) + ")");
  if (p.Gamma_th < p.W * p.delta_p2) invalid("Gamma_th must be >= W*delta_p2");
  if (!(p.Omega > p.B_min) || !std::isfinite(p.Omega)) invalid("Omega must exceed B_min (got " + fmt(p.Omega, 12) + ")");
  if (p.N < 1) invalid("N must be >= 1");
  if (p.window < 1) invalid("window must be >= 1");
  for (auto [name, v] : {std::pair{"p01", markov_p01(p)}, std::pair{"p10", markov_p10(p)}})
    if (!(v >= 0.0 && v <= 1.0)) invalid(std::string(name) + " must lie in [0,1]");
}

void resolve(SystemParams& p) {
  switch (p.omega_mode) {
    case OmegaMode::Threshold: p.Omega = omega_threshold(p).omega_threshold; break;
    case OmegaMode::SensingBound: p.Omega = sensing_bound(p); break;
    case OmegaMode::Fixed: break;
  }
  validate(p);
}

std::string serialize(const SystemParams& p) {
  std::ostringstream out;
  for (const auto& f : double_fields()) out << f.key << " = " << fmt(p.*(f.member), 17) << "\n";
  if (p.omega_mode == OmegaMode::Fixed) out << "Omega = " << fmt(p.Omega, 17) << "\n";
  else out << "Omega = " << omega_word(p.omega_mode) << "\n";
  out << "N = " << p.N << "\n";
  out << "seed = " << p.seed << "\n";
  out << "pu_model = " << (p.pu_model == PuModel::IidBernoulli ? "iid-bernoulli" : "two-state-markov") << "\n";
  if (p.p01) out << "p01 = " << fmt(*p.p01, 17) << "\n";
  if (p.p10) out << "p10 = " << fmt(*p.p10, 17) << "\n";
  out << "window = " << p.window << "\n";
  out << "policy = " << to_string(p.policy) << "\n";
  return out.str();
}

std::vector<std::pair<std::string, std::string>> describe(const SystemParams& p, int digits) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& f : double_fields()) kv.emplace_back(f.key, fmt(p.*(f.member), digits));
  kv.emplace_back("Omega", fmt(p.Omega, digits));
  kv.emplace_back("omega_mode", omega_word(p.omega_mode));
  kv.emplace_back("N", std::to_string(p.N));
  kv.emplace_back("seed", std::to_string(p.seed));
  kv.emplace_back("pu_model", p.pu_model == PuModel::IidBernoulli ? "iid-bernoulli" : "two-state-markov");
  kv.emplace_back("p01", fmt(markov_p01(p), digits));
  kv.emplace_back("p10", fmt(markov_p10(p), digits));
  kv.emplace_back("window", std::to_string(p.window));
  kv.emplace_back("policy", to_string(p.policy));
  return kv;
}

double get_numeric(const SystemParams& p, const std::string& key) {
  if (const DoubleField* f = find_field(key)) return p.*(f->member);
  if (key == "Omega") return p.Omega;
  throw ConfigError("unknown numeric parameter '" + key + "'");
}

void set_numeric(SystemParams& p, const std::string& key, double value) {
  if (const DoubleField* f = find_field(key)) {
    p.*(f->member) = value;
    return;
  }
  if (key == "Omega") {
    p.Omega = value;
    p.omega_mode = OmegaMode::Fixed;
    return;
  }
  throw ConfigError("unknown numeric parameter '" + key + "'");
}

}  // namespace plyse
