#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "plate/params.hpp"

namespace plate {

/// Flat key=value text. '#' starts a comment; blank lines are ignored.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

enum class Scenario { kOpenLoop, kStateFeedback, kOutputFeedback };

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario s);

/// How the observer closes its x = 1 boundary.
enum class ObserverBoundary {
  kConsistent,  // reflection relation implied by the characteristic variables
  kLiteral,     // h1 = 2e/(2-e), h2 = -e/(2-e), e = exp(-sqrt(eps) c1bar)
};

/// Everything a run needs, with all defaults materialized.
struct RunConfig {
  std::string profile = "reference";
  PhysicalParams physical;
  ParamOverrides overrides;

  Vec3 delta = Vec3::Constant(5.0);
  Vec3 observer_gain = Vec3::Constant(5.0);
  Phi32Mode phi32 = Phi32Mode::kScaled;
  ObserverBoundary observer_boundary = ObserverBoundary::kConsistent;

  int modes = 3;  // highest mode index N
  double dt = 0.001;
  double dx = 0.05;
  double T = 6.0;
  Scenario scenario = Scenario::kStateFeedback;

  int kernel_m = 41;
  double kernel_tol = 1e-10;
  int kernel_max_iter = 300;
  int y_points = 181;

  Vec3 x0 = Vec3(0.01, 0.02, 0.01);
  double field_amplitude = 0.01;
  double observer_field_amplitude = 0.0;
  Vec3 observer_x0 = Vec3::Zero();

  double fit_t0 = 0.5;
  double fit_t1 = 4.0;
  std::vector<double> snapshot_times = {0.0, 1.0, 2.0, 4.0, 6.0};
  int trace_stride = 10;  // control traces written every this many steps
  int jobs = 0;  // 0 means one worker per mode

  DimensionlessParams dimensionless() const { return nondimensionalize(physical, overrides); }

  /// Throws ConfigError on any inconsistent value (including CFL).
  void validate() const;
};

/// The shipped reference profile as a RunConfig.
RunConfig reference_run_config();

/// Builds a RunConfig from parsed text. Physical keys are mandatory; every
/// other key falls back to the reference default. Unknown keys are rejected.
RunConfig run_config_from(const KeyValueConfig& kv);

/// Serializes every resolved value as key=value lines (sorted, 17 digits).
std::string to_key_value_text(const RunConfig& cfg);

}  // namespace plate
