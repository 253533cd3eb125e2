#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "eeplan/errors.hpp"
#include "eeplan/montecarlo.hpp"
#include "eeplan/optimizer.hpp"
#include "eeplan/pathloss.hpp"
#include "eeplan/power.hpp"
#include "eeplan/rng.hpp"
#include "eeplan/system_config.hpp"

namespace eeplan {

/// Grids, budgets and selections of an experiment run.
struct ExperimentSettings {
  std::vector<double> lambdas{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 60};
  std::vector<double> zetas{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> gammas{1, 3, 7};
  std::vector<Scheme> schemes{Scheme::mr, Scheme::zf, Scheme::mmse};
  std::string bound = "uatf";  // t1 | uatf | closed
  double design_lambda = 10.0;  // lambda for mk-surface and table4
  int M = 100;
  int K = 10;
  int M_min = 2, M_max = 120;
  int K_min = 1, K_max = 30;
  int deployments = 200;
  int draws = 50;
  std::uint64_t seed = 1;
  double side_km = 1.0;
  Projection projection = Projection::nearest;
};

/// Everything a run depends on. Parsed from a flat sectioned key/value file.
struct RunConfig {
  SystemConfig system;
  std::vector<double> alpha{0.0, 2.0, 4.0};
  std::vector<double> breakpoints_m{10.0, 446.0};
  double intercept_db = kFarInterceptDb;
  InterceptMode mode = InterceptMode::literal;
  ExperimentSettings exp;

  PathLossModel model() const {
    std::vector<double> km;
    for (double b : breakpoints_m) km.push_back(b / 1000.0);
    return make_pathloss_model(alpha, km, std::pow(10.0, intercept_db / 10.0), mode);
  }
  /// Far-field exponent and intercept only, for single-slope comparisons.
  PathLossModel single_slope_model() const {
    return single_slope(alpha.back(), std::pow(10.0, intercept_db / 10.0));
  }

  std::string canonical() const;
  std::uint64_t hash() const { return fnv1a(canonical()); }
  std::string hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::string s = trim(v);
  if (!s.empty() && s.front() == '[') {
    require(s.back() == ']', "config: unterminated list '" + v + "'");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw domain_error("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

inline std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
  return out;
}

inline int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  require(x == std::floor(x), "config: key '" + key + "' expects an integer");
  return static_cast<int>(x);
}

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s + "]";
}

}  // namespace detail

inline std::string RunConfig::canonical() const {
  using detail::fmt;
  const auto& s = system;
  std::string schemes;
  for (auto sc : exp.schemes) schemes += std::string(to_string(sc)) + ",";
  std::ostringstream o;
  o << "slopes.alpha=" << fmt(alpha) << "\nslopes.breakpoints_m=" << fmt(breakpoints_m)
    << "\nslopes.intercept_db_at_1km=" << fmt(intercept_db)
    << "\nslopes.mode=" << (mode == InterceptMode::literal ? "literal" : "continuity")
    << "\nradio.tau_c=" << fmt(s.tau_c) << "\nradio.B_w=" << fmt(s.B_w) << "\nradio.xi=" << fmt(s.xi)
    << "\nradio.sigma2=" << fmt(s.sigma2) << "\nradio.SNR0=" << fmt(s.SNR0) << "\nradio.SNRp=" << fmt(s.SNRp)
    << "\nradio.area=" << fmt(s.area_km2) << "\nhardware=" << fmt(std::vector<double>{s.P_FIX, s.P_LO, s.P_BS, s.P_UE, s.P_COD, s.P_DEC, s.P_BT, s.L_BS, s.eta})
    << "\nexperiment.lambda=" << fmt(exp.lambdas) << "\nexperiment.zeta=" << fmt(exp.zetas)
    << "\nexperiment.gamma=" << fmt(exp.gammas) << "\nexperiment.schemes=" << schemes
    << "\nexperiment.bound=" << exp.bound << "\nexperiment.design_lambda=" << fmt(exp.design_lambda) << "\nexperiment.MK=" << exp.M << "," << exp.K
    << "\nexperiment.ranges=" << exp.M_min << "," << exp.M_max << "," << exp.K_min << "," << exp.K_max
    << "\nexperiment.budget=" << exp.deployments << "," << exp.draws << "\nexperiment.seed=" << exp.seed
    << "\nexperiment.side_km=" << fmt(exp.side_km)
    << "\nexperiment.projection=" << (exp.projection == Projection::nearest ? "nearest" : "refit") << "\n";
  return o.str();
}

/// Apply one key (section-qualified) to the configuration.
inline void apply_config_key(RunConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  auto& s = c.system;
  auto& e = c.exp;
  const std::string v = trim(value);
  auto num = [&] { return to_double(key, v); };
  if (key == "slopes.alpha") c.alpha = to_doubles(key, v);
  else if (key == "slopes.breakpoints_m") c.breakpoints_m = to_doubles(key, v);
  else if (key == "slopes.intercept_db_at_1km") c.intercept_db = num();
  else if (key == "slopes.mode") {
    if (v == "literal") c.mode = InterceptMode::literal;
    else if (v == "continuity") c.mode = InterceptMode::continuity;
    else throw domain_error("config: slopes.mode must be literal or continuity");
  }
  else if (key == "hardware.P_FIX") s.P_FIX = num();
  else if (key == "hardware.P_LO") s.P_LO = num();
  else if (key == "hardware.P_BS") s.P_BS = num();
  else if (key == "hardware.P_UE") s.P_UE = num();
  else if (key == "hardware.P_COD") s.P_COD = num();
  else if (key == "hardware.P_DEC") s.P_DEC = num();
  else if (key == "hardware.P_BT") s.P_BT = num();
  else if (key == "hardware.L_BS_Gflops_per_W") s.L_BS = num() * 1e9;
  else if (key == "hardware.eta") s.eta = num();
  else if (key == "radio.tau_c") s.tau_c = num();
  else if (key == "radio.B_w_MHz") s.B_w = num() * 1e6;
  else if (key == "radio.xi") s.xi = num();
  else if (key == "radio.sigma2_dBm") s.sigma2 = dbm_to_watts(num());
  else if (key == "radio.SNR0_dB") s.SNR0 = db_to_linear(num());
  else if (key == "radio.SNRp_dB") s.SNRp = db_to_linear(num());
  else if (key == "radio.area_km2") s.area_km2 = num();
  else if (key == "experiment.lambda") e.lambdas = to_doubles(key, v);
  else if (key == "experiment.zeta") e.zetas = to_doubles(key, v);
  else if (key == "experiment.gamma") e.gammas = to_doubles(key, v);
  else if (key == "experiment.schemes") {
    e.schemes.clear();
    for (const auto& x : split_list(v)) e.schemes.push_back(parse_scheme(x));
  }
  else if (key == "experiment.bound") {
    require(v == "t1" || v == "uatf" || v == "closed", "config: experiment.bound must be t1, uatf or closed");
    e.bound = v;
  }
  else if (key == "experiment.design_lambda") e.design_lambda = num();
  else if (key == "experiment.M") e.M = to_int(key, v);
  else if (key == "experiment.K") e.K = to_int(key, v);
  else if (key == "experiment.M_range" || key == "experiment.K_range") {
    const auto r = to_doubles(key, v);
    require(r.size() == 2, "config: " + key + " expects [min,max]");
    (key == "experiment.M_range" ? e.M_min : e.K_min) = static_cast<int>(r[0]);
    (key == "experiment.M_range" ? e.M_max : e.K_max) = static_cast<int>(r[1]);
  }
  else if (key == "experiment.deployments") e.deployments = to_int(key, v);
  else if (key == "experiment.draws") e.draws = to_int(key, v);
  else if (key == "experiment.seed") e.seed = std::stoull(v);
  else if (key == "experiment.side_km") e.side_km = num();
  else if (key == "experiment.projection") {
    if (v == "nearest") e.projection = Projection::nearest;
    else if (v == "refit") e.projection = Projection::refit;
    else throw domain_error("config: experiment.projection must be nearest or refit");
  }
  else throw domain_error("config: unknown key '" + key + "'");
}

/// \brief Parse config text. Accepts `[section]` headers followed by bare
/// keys, or fully dotted keys. `#` and `;` start comments.
inline RunConfig parse_config(const std::string& text, RunConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      require(line.back() == ']', "config: malformed section header on line " + std::to_string(lineno));
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, "config: expected key = value on line " + std::to_string(lineno));
    std::string key = detail::trim(line.substr(0, eq));
    if (key.find('.') == std::string::npos) {
      require(!section.empty(), "config: key '" + key + "' outside any section");
      key = section + "." + key;
    }
    apply_config_key(base, key, line.substr(eq + 1));
  }
  base.system.validate();
  base.model();  // validates the slopes
  return base;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw domain_error("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace eeplan
