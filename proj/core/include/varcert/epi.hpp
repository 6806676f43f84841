#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "varcert/function_model.hpp"
#include "varcert/report.hpp"
#include "varcert/sample_plan.hpp"

namespace varcert {

/// φ¹, φ², ... given by a term oracle; k runs from 1 to terms.
struct FunctionSequence {
  std::string name;
  std::size_t dim = 1;
  std::size_t terms = 10000;
  std::function<double(std::size_t k, VecView x)> term;

  double eval(std::size_t k, VecView x) const { return term(k, x); }
};

/// A sequence x^k → x, k >= 1.
struct Path {
  std::string name;
  std::function<Vec(std::size_t k)> at;
};

using PathGenerator = std::function<std::vector<Path>(VecView x)>;

/// Constant path, x ± 0.1/k along the diagonal, and optionally x + 1/k.
PathGenerator default_paths(bool with_recovery = false);

/// Limit estimate from the tail of a sequence: the extreme over
/// [terms/2, terms] corrected by its difference to the extreme over
/// [terms/4, terms/2), which is exact for O(1/k) convergence.
struct TailEstimate {
  double liminf = 0.0;
  double limsup = 0.0;
};

TailEstimate tail_estimate(std::size_t terms, const std::function<double(std::size_t)>& value);

/// At each plan point x: liminf φ^k(x^k) >= φ(x) − tol along every path and
/// limsup φ^k(x^k) <= φ(x) + tol along at least one path.
CertificateReport epi_convergence_check(const FunctionSequence& seq, const FunctionModel& phi,
                                        const SamplePlan& grid, const PathGenerator& paths,
                                        const Tolerances& tol = {});

/// inf φ >= limsup inf φ^k − tol and, for tail k, every grid argmin of φ^k
/// within one grid step of the grid argmin set of φ.
CertificateReport argmin_limsup_check(const FunctionSequence& seq, const FunctionModel& phi,
                                      const SamplePlan& grid, const Tolerances& tol = {});

/// A sequence with a limit candidate, addressable by name.
struct EpiProblem {
  FunctionSequence seq;
  FunctionModel limit;
  bool needs_recovery = false;
};

const std::vector<std::string>& epi_problem_names();
EpiProblem epi_problem_lookup(const std::string& name);

}  // namespace varcert
