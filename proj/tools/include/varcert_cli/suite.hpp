#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varcert/report.hpp"

namespace varcert::cli {

struct SuiteCase {
  std::string model;
  std::string label;
  Verdict expected;
  Verdict observed;
  double margin;
  bool matches() const { return expected == observed; }
};

/// Gallery models that have a stored verdict suite.
const std::vector<std::string>& suite_models();

/// Runs the stored verdict suite of one gallery model.
std::vector<SuiteCase> run_gallery_suite(const std::string& model, std::uint64_t seed = 1);

}  // namespace varcert::cli
