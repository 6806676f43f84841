#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "varcert/norm_space.hpp"
#include "varcert/report.hpp"
#include "varcert/sample_plan.hpp"
#include "varcert/sampling.hpp"

namespace varcert::cli {

inline constexpr int kSchemaVersion = 1;

/// Everything needed to re-run one command. Vectors are kept as given on the
/// command line (a single value broadcasts to the model dimension).
struct RunConfig {
  std::string command;
  std::string model = "gallery:quadratic";
  double p = 2.0;
  std::vector<double> weights;
  std::vector<double> center{0.0};
  std::vector<double> cstar{0.0};
  double r1 = 0.5;
  double r2 = 0.5;
  double eps = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;
  std::size_t grid = 101;
  std::size_t qmc = 0;
  std::optional<Box> box;
  /// Command-specific parameters (sigma, lambda, kind, flavor, ...).
  nlohmann::json params = nlohmann::json::object();
  Tolerances tolerances;
  std::optional<std::string> output;
  std::optional<std::string> csv;

  double param(const std::string& key, double fallback) const;
  std::string param(const std::string& key, const std::string& fallback) const;
  std::vector<double> param_list(const std::string& key, std::vector<double> fallback) const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& c, const std::string& path);

/// Expands a one-element list to n copies; otherwise requires length n.
Vec broadcast(const std::vector<double>& v, std::size_t n, const char* what);

/// Parses "1,2,3" into numbers.
std::vector<double> parse_list(const std::string& s);

}  // namespace varcert::cli
