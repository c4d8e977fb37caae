#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ri {

/// One sub-check inside a report. Moment checks fill `value`, `oracle`,
/// `standard_error` and pass when |value - oracle| <= tolerance. KS checks fill
/// `statistic` and `p_value` and pass when p_value >= threshold.
struct Check {
  std::string name;
  std::string policy;  // "exact", "sigma", or "ks"
  double value = 0.0;
  double oracle = 0.0;
  std::optional<double> standard_error;
  double tolerance = 0.0;
  std::optional<double> statistic;
  std::optional<double> p_value;
  std::optional<double> threshold;
  bool pass = false;
};

struct TestReport {
  static constexpr const char* kSchema = "ri.report/1";

  std::string name;
  std::uint64_t seed = 0;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json context = nlohmann::json::object();
  std::vector<Check> checks;
  std::string error;  // non-empty when the test aborted

  /// Records |value - oracle| <= tolerance.
  Check& add_exact(std::string name, double value, double oracle, double tolerance);
  /// Records |value - oracle| <= sigmas * se.
  Check& add_sigma(std::string name, double value, double oracle, double se, double sigmas);
  Check& add_ks(std::string name, double statistic, double p_value, double threshold);

  bool pass() const;
  nlohmann::json to_json() const;
  /// One line per check, for terminals.
  std::string summary() const;
};

}  // namespace ri
