#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ri/graph.hpp"
#include "ri/potential.hpp"

namespace ri {

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Columns: row,col,value (window indices).
std::string green_csv(const GreenMatrix& green);
/// Columns: index,vertex,mass.
std::string equilibrium_csv(const WeightedWindow& window, const EquilibriumMeasure& measure);
/// Long format, columns: sample,vertex,value (window index in `vertex`).
std::string samples_csv(const Eigen::MatrixXd& samples);
/// Columns: index,vertex,value.
std::string vertex_values_csv(const WeightedWindow& window, const std::vector<double>& values);

}  // namespace ri
