#include "plate/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "plate/errors.hpp"

namespace plate {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    KeyValueConfig tmp;
    tmp.set(key, item);
    out.push_back(tmp.get_double(key));
  }
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (cfg.values_.count(key)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string& s = get(key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("config key '" + key + "' is not a finite number: '" + s + "'");
  }
  return v;
}

int KeyValueConfig::get_int(const std::string& key) const {
  const std::string& s = get(key);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("config key '" + key + "' is not an integer: '" + s + "'");
  }
  return v;
}

Scenario parse_scenario(const std::string& name) {
  if (name == "open-loop") return Scenario::kOpenLoop;
  if (name == "state-feedback") return Scenario::kStateFeedback;
  if (name == "output-feedback") return Scenario::kOutputFeedback;
  throw ConfigError("unknown scenario '" + name +
                    "' (expected open-loop, state-feedback or output-feedback)");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::kOpenLoop:
      return "open-loop";
    case Scenario::kStateFeedback:
      return "state-feedback";
    case Scenario::kOutputFeedback:
      return "output-feedback";
  }
  return "unknown";
}

void RunConfig::validate() const {
  const DimensionlessParams d = dimensionless();
  if (modes < 0) throw ConfigError("modes must be nonnegative");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(dx > 0.0) || dx > 0.5) throw ConfigError("dx must lie in (0, 0.5]");
  const double intervals = 1.0 / dx;
  if (std::abs(intervals - std::round(intervals)) > 1e-9) {
    throw ConfigError("dx must divide [0, 1] into a whole number of cells");
  }
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  if (dt / dx > std::sqrt(d.mu2) * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "CFL violated: dt/dx = " << dt / dx << " exceeds sqrt(mu2) = " << std::sqrt(d.mu2);
    throw ConfigError(os.str());
  }
  if ((delta.array() <= 0.0).any()) throw ConfigError("delta1..3 must be positive");
  if ((observer_gain.array() <= 0.0).any()) throw ConfigError("obs_gain1..3 must be positive");
  if (kernel_m < 3) throw ConfigError("kernel_m must be at least 3");
  const long cells = std::lround(intervals);
  if ((kernel_m - 1) % cells != 0) {
    throw ConfigError("kernel_m - 1 must be a multiple of the number of x cells (" +
                      std::to_string(cells) + ")");
  }
  if (!(kernel_tol > 0.0)) throw ConfigError("kernel_tol must be positive");
  if (kernel_max_iter < 1) throw ConfigError("kernel_max_iter must be positive");
  if (y_points < 3) throw ConfigError("y_points must be at least 3");
  if (!(fit_t1 > fit_t0)) throw ConfigError("fit_t1 must exceed fit_t0");
  if (jobs < 0) throw ConfigError("jobs must be nonnegative");
  if (trace_stride < 1) throw ConfigError("trace_stride must be positive");
}

RunConfig reference_run_config() {
  RunConfig cfg;
  cfg.overrides.eps = 3.0;
  cfg.overrides.mu1 = 1.8;
  cfg.overrides.mu2 = 0.2;
  cfg.overrides.a = 0.2;
  cfg.overrides.theta = 0.057;
  cfg.overrides.xi = 0.2;
  cfg.overrides.L = 9.0;
  return cfg;
}

RunConfig run_config_from(const KeyValueConfig& kv) {
  RunConfig cfg;
  std::set<std::string> used;
  auto num = [&](const std::string& key, double& target) {
    if (kv.has(key)) {
      target = kv.get_double(key);
      used.insert(key);
    }
  };
  auto integer = [&](const std::string& key, int& target) {
    if (kv.has(key)) {
      target = kv.get_int(key);
      used.insert(key);
    }
  };
  auto opt = [&](const std::string& key, std::optional<double>& target) {
    if (kv.has(key)) {
      target = kv.get_double(key);
      used.insert(key);
    }
  };
  auto required = [&](const std::string& key, double& target) {
    target = kv.get_double(key);
    used.insert(key);
  };

  if (kv.has("profile")) {
    cfg.profile = kv.get("profile");
    used.insert("profile");
  }
  PhysicalParams& p = cfg.physical;
  required("L1_star", p.L1);
  required("L2_star", p.L2);
  required("h_star", p.h);
  required("rho_star", p.rho);
  required("E_star", p.E);
  required("G_star", p.G);
  required("k_prime", p.kprime);
  required("I_star", p.I);
  required("I1_star", p.I1);
  required("I2_star", p.I2);
  required("M_star", p.mach);
  required("rhof_star", p.rho_f);
  required("U_star", p.U);

  opt("epsilon", cfg.overrides.eps);
  opt("mu1", cfg.overrides.mu1);
  opt("mu2", cfg.overrides.mu2);
  opt("a", cfg.overrides.a);
  opt("theta", cfg.overrides.theta);
  opt("xi", cfg.overrides.xi);
  opt("L", cfg.overrides.L);

  num("delta1", cfg.delta(0));
  num("delta2", cfg.delta(1));
  num("delta3", cfg.delta(2));
  num("obs_gain1", cfg.observer_gain(0));
  num("obs_gain2", cfg.observer_gain(1));
  num("obs_gain3", cfg.observer_gain(2));
  if (kv.has("phi32")) {
    const std::string& v = kv.get("phi32");
    if (v == "scaled") {
      cfg.phi32 = Phi32Mode::kScaled;
    } else if (v == "literal") {
      cfg.phi32 = Phi32Mode::kLiteral;
    } else {
      throw ConfigError("config key 'phi32' must be 'scaled' or 'literal'");
    }
    used.insert("phi32");
  }
  if (kv.has("observer_boundary")) {
    const std::string& v = kv.get("observer_boundary");
    if (v == "consistent") {
      cfg.observer_boundary = ObserverBoundary::kConsistent;
    } else if (v == "literal") {
      cfg.observer_boundary = ObserverBoundary::kLiteral;
    } else {
      throw ConfigError("config key 'observer_boundary' must be 'consistent' or 'literal'");
    }
    used.insert("observer_boundary");
  }

  integer("modes", cfg.modes);
  num("dt", cfg.dt);
  num("dx", cfg.dx);
  num("T", cfg.T);
  if (kv.has("scenario")) {
    cfg.scenario = parse_scenario(kv.get("scenario"));
    used.insert("scenario");
  }
  integer("kernel_m", cfg.kernel_m);
  num("kernel_tol", cfg.kernel_tol);
  integer("kernel_max_iter", cfg.kernel_max_iter);
  integer("y_points", cfg.y_points);
  num("x1_0", cfg.x0(0));
  num("x2_0", cfg.x0(1));
  num("x3_0", cfg.x0(2));
  num("field_amplitude", cfg.field_amplitude);
  num("observer_field_amplitude", cfg.observer_field_amplitude);
  num("observer_x1_0", cfg.observer_x0(0));
  num("observer_x2_0", cfg.observer_x0(1));
  num("observer_x3_0", cfg.observer_x0(2));
  num("fit_t0", cfg.fit_t0);
  num("fit_t1", cfg.fit_t1);
  if (kv.has("snapshot_times")) {
    cfg.snapshot_times = parse_list("snapshot_times", kv.get("snapshot_times"));
    used.insert("snapshot_times");
  }
  integer("jobs", cfg.jobs);
  integer("trace_stride", cfg.trace_stride);

  for (const auto& [key, value] : kv.values()) {
    if (!used.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

std::string to_key_value_text(const RunConfig& c) {
  std::map<std::string, std::string> out;
  const PhysicalParams& p = c.physical;
  out["profile"] = c.profile;
  out["L1_star"] = fmt17(p.L1);
  out["L2_star"] = fmt17(p.L2);
  out["h_star"] = fmt17(p.h);
  out["rho_star"] = fmt17(p.rho);
  out["E_star"] = fmt17(p.E);
  out["G_star"] = fmt17(p.G);
  out["k_prime"] = fmt17(p.kprime);
  out["I_star"] = fmt17(p.I);
  out["I1_star"] = fmt17(p.I1);
  out["I2_star"] = fmt17(p.I2);
  out["M_star"] = fmt17(p.mach);
  out["rhof_star"] = fmt17(p.rho_f);
  out["U_star"] = fmt17(p.U);
  const DimensionlessParams d = c.dimensionless();
  out["epsilon"] = fmt17(d.eps);
  out["mu1"] = fmt17(d.mu1);
  out["mu2"] = fmt17(d.mu2);
  out["a"] = fmt17(d.a);
  out["theta"] = fmt17(d.theta);
  out["xi"] = fmt17(d.xi);
  out["L"] = fmt17(d.L);
  for (int i = 0; i < 3; ++i) {
    out["delta" + std::to_string(i + 1)] = fmt17(c.delta(i));
    out["obs_gain" + std::to_string(i + 1)] = fmt17(c.observer_gain(i));
    out["x" + std::to_string(i + 1) + "_0"] = fmt17(c.x0(i));
    out["observer_x" + std::to_string(i + 1) + "_0"] = fmt17(c.observer_x0(i));
  }
  out["phi32"] = c.phi32 == Phi32Mode::kScaled ? "scaled" : "literal";
  out["observer_boundary"] =
      c.observer_boundary == ObserverBoundary::kConsistent ? "consistent" : "literal";
  out["modes"] = std::to_string(c.modes);
  out["dt"] = fmt17(c.dt);
  out["dx"] = fmt17(c.dx);
  out["T"] = fmt17(c.T);
  out["scenario"] = to_string(c.scenario);
  out["kernel_m"] = std::to_string(c.kernel_m);
  out["kernel_tol"] = fmt17(c.kernel_tol);
  out["kernel_max_iter"] = std::to_string(c.kernel_max_iter);
  out["y_points"] = std::to_string(c.y_points);
  out["field_amplitude"] = fmt17(c.field_amplitude);
  out["observer_field_amplitude"] = fmt17(c.observer_field_amplitude);
  out["fit_t0"] = fmt17(c.fit_t0);
  out["fit_t1"] = fmt17(c.fit_t1);
  std::string times;
  for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
    if (i) times += ",";
    times += fmt17(c.snapshot_times[i]);
  }
  out["snapshot_times"] = times;
  out["jobs"] = std::to_string(c.jobs);
  out["trace_stride"] = std::to_string(c.trace_stride);

  std::string text;
  for (const auto& [k, v] : out) text += k + "=" + v + "\n";
  return text;
}

}  // namespace plate
