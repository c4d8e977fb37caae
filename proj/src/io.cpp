#include "ri/io.hpp"

#include <cstdio>
#include <fstream>

#include "ri/errors.hpp"

namespace ri {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

std::string green_csv(const GreenMatrix& green) {
  std::string out = "row,col,value\n";
  for (Eigen::Index i = 0; i < green.size(); ++i) {
    for (Eigen::Index j = 0; j < green.size(); ++j) {
      out += std::to_string(i) + "," + std::to_string(j) + "," + format_double(green(i, j)) + "\n";
    }
  }
  return out;
}

std::string equilibrium_csv(const WeightedWindow& window, const EquilibriumMeasure& measure) {
  std::string out = "index,vertex,mass\n";
  for (int x : measure.support) {
    const auto i = static_cast<std::size_t>(x);
    out += std::to_string(x) + ",\"" + to_string(window.vertex(i)) + "\"," + format_double(measure.mass[i]) + "\n";
  }
  return out;
}

std::string samples_csv(const Eigen::MatrixXd& samples) {
  std::string out = "sample,vertex,value\n";
  out.reserve(static_cast<std::size_t>(samples.size()) * 28);
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    const std::string prefix = std::to_string(s) + ",";
    for (Eigen::Index v = 0; v < samples.cols(); ++v) {
      out += prefix;
      out += std::to_string(v);
      out += ',';
      out += format_double(samples(s, v));
      out += '\n';
    }
  }
  return out;
}

std::string vertex_values_csv(const WeightedWindow& window, const std::vector<double>& values) {
  std::string out = "index,vertex,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += std::to_string(i) + ",\"" + to_string(window.vertex(i)) + "\"," + format_double(values[i]) + "\n";
  }
  return out;
}

}  // namespace ri
