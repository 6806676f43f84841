#include "varcert_cli/config.hpp"

#include <fstream>
#include <sstream>

#include "varcert/errors.hpp"
#include "varcert/subdiff_set.hpp"

namespace varcert::cli {

double RunConfig::param(const std::string& key, double fallback) const {
  if (!params.contains(key)) return fallback;
  return real_from_json(params.at(key));
}

std::string RunConfig::param(const std::string& key, const std::string& fallback) const {
  if (!params.contains(key)) return fallback;
  return params.at(key).get<std::string>();
}

std::vector<double> RunConfig::param_list(const std::string& key, std::vector<double> fallback) const {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (v.is_number()) return {v.get<double>()};
  std::vector<double> out;
  for (const auto& e : v) out.push_back(real_from_json(e));
  return out;
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = {{"command", c.command},
       {"model", c.model},
       {"norm", {{"p", c.p}, {"weights", c.weights}}},
       {"window", {{"center", c.center}, {"cstar", c.cstar}, {"r1", c.r1}, {"r2", c.r2}, {"eps", real_to_json(c.eps)}}},
       {"plan", {{"seed", c.seed}, {"grid", c.grid}, {"qmc", c.qmc}}},
       {"params", c.params},
       {"tolerances", c.tolerances}};
  if (c.box) {
    nlohmann::json b;
    to_json(b, *c.box);
    j["plan"]["box"] = b;
  } else {
    j["plan"]["box"] = nullptr;
  }
  j["output"] = c.output ? nlohmann::json(*c.output) : nlohmann::json(nullptr);
  j["csv"] = c.csv ? nlohmann::json(*c.csv) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  c = RunConfig{};
  c.command = j.value("command", "");
  c.model = j.value("model", c.model);
  if (j.contains("norm")) {
    const auto& n = j.at("norm");
    c.p = n.value("p", c.p);
    c.weights = n.value("weights", c.weights);
  }
  if (j.contains("window")) {
    const auto& w = j.at("window");
    c.center = w.value("center", c.center);
    c.cstar = w.value("cstar", c.cstar);
    c.r1 = w.value("r1", c.r1);
    c.r2 = w.value("r2", c.r2);
    if (w.contains("eps")) c.eps = real_from_json(w.at("eps"));
  }
  if (j.contains("plan")) {
    const auto& p = j.at("plan");
    c.seed = p.value("seed", c.seed);
    c.grid = p.value("grid", c.grid);
    c.qmc = p.value("qmc", c.qmc);
    if (p.contains("box") && !p.at("box").is_null()) c.box = p.at("box").get<Box>();
  }
  if (j.contains("params")) c.params = j.at("params");
  if (j.contains("tolerances")) c.tolerances = j.at("tolerances").get<Tolerances>();
  if (j.contains("output") && !j.at("output").is_null()) c.output = j.at("output").get<std::string>();
  if (j.contains("csv") && !j.at("csv").is_null()) c.csv = j.at("csv").get<std::string>();
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return j.get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config file '" + path + "': " + e.what());
  }
}

void save_config(const RunConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write config file '" + path + "'");
  nlohmann::json j = c;
  out << j.dump(2) << "\n";
}

Vec broadcast(const std::vector<double>& v, std::size_t n, const char* what) {
  if (v.size() == 1) return Vec(n, v[0]);
  if (v.size() != n) {
    throw InputError(std::string(what) + ": expected 1 or " + std::to_string(n) + " values, got " +
                     std::to_string(v.size()));
  }
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw InputError("empty entry in number list '" + s + "'");
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("'" + item + "' is not a number");
    }
  }
  if (out.empty()) throw InputError("empty number list '" + s + "'");
  return out;
}

}  // namespace varcert::cli
