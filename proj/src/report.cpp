#include "ri/report.hpp"

#include <cmath>
#include <cstdio>

#include "ri/hash.hpp"

namespace ri {

Check& TestReport::add_exact(std::string check_name, double value, double oracle, double tolerance) {
  Check c;
  c.name = std::move(check_name);
  c.policy = "exact";
  c.value = value;
  c.oracle = oracle;
  c.tolerance = tolerance;
  c.pass = std::fabs(value - oracle) <= tolerance;
  return checks.emplace_back(std::move(c));
}

Check& TestReport::add_sigma(std::string check_name, double value, double oracle, double se, double sigmas) {
  Check c;
  c.name = std::move(check_name);
  c.policy = "sigma";
  c.value = value;
  c.oracle = oracle;
  c.standard_error = se;
  c.tolerance = sigmas * se;
  c.pass = std::fabs(value - oracle) <= c.tolerance;
  return checks.emplace_back(std::move(c));
}

Check& TestReport::add_ks(std::string check_name, double statistic, double p_value, double threshold) {
  Check c;
  c.name = std::move(check_name);
  c.policy = "ks";
  c.statistic = statistic;
  c.p_value = p_value;
  c.threshold = threshold;
  c.value = statistic;
  c.pass = p_value >= threshold;
  return checks.emplace_back(std::move(c));
}

bool TestReport::pass() const {
  if (!error.empty()) return false;
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

nlohmann::json TestReport::to_json() const {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["name"] = name;
  j["seed"] = seed;
  j["pass"] = pass();
  j["parameters"] = parameters;
  j["context"] = context;
  if (!error.empty()) j["error"] = error;
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const Check& c : checks) {
    nlohmann::json jc{{"name", c.name}, {"policy", c.policy}, {"pass", c.pass}};
    if (c.policy == "ks") {
      jc["statistic"] = *c.statistic;
      jc["p_value"] = *c.p_value;
      jc["threshold"] = *c.threshold;
    } else {
      jc["value"] = c.value;
      jc["oracle"] = c.oracle;
      jc["tolerance"] = c.tolerance;
      if (c.standard_error) jc["standard_error"] = *c.standard_error;
    }
    arr.push_back(std::move(jc));
  }
  return j;
}

std::string TestReport::summary() const {
  std::string out;
  char line[512];
  for (const Check& c : checks) {
    if (c.policy == "ks") {
      std::snprintf(line, sizeof line, "  [%s] %-48s D=%.5f p=%.4g (>= %.3g)\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), *c.statistic, *c.p_value, *c.threshold);
    } else {
      std::snprintf(line, sizeof line, "  [%s] %-48s %.8g vs %.8g (tol %.3g)\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.value, c.oracle, c.tolerance);
    }
    out += line;
  }
  if (!error.empty()) out += "  [FAIL] error: " + error + "\n";
  return out;
}

}  // namespace ri
