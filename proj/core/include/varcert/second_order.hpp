#pragma once

#include <string>
#include <vector>

#include "varcert/function_model.hpp"
#include "varcert/graph_patch.hpp"
#include "varcert/norm_space.hpp"
#include "varcert/report.hpp"
#include "varcert/sample_plan.hpp"
#include "varcert/sampling.hpp"

namespace varcert {

/// N̂((x, x*); gph ∂φ) from the model's graph patch.
NormalCone graph_regular_normal_cone(const FunctionModel& phi, VecView x, VecView xstar);

/// ∂̆²φ(x, x*)(w) = {z : (z, −w) ∈ N̂((x, x*); gph ∂φ)}.
SubdiffSet combined_second_subdiff(const FunctionModel& phi, VecView x, VecView xstar, VecView w);

/// ∂²φ(x̄, x̄*)(w): union of the combined sets over the patch strata whose
/// closures contain (x̄, x̄*).
SubdiffSet limiting_second_subdiff(const FunctionModel& phi, VecView xbar, VecView xbar_star, VecView w);

enum class SecondOrderFlavor { kCombined, kLimiting };

const char* to_string(SecondOrderFlavor f);
SecondOrderFlavor flavor_from_string(const std::string& s);

/// Unit test directions: ±1 in one dimension; ±eᵢ and eight seeded random
/// unit vectors otherwise.
std::vector<Vec> unit_directions(std::size_t n, std::uint64_t seed);

/// min over graph samples (x, y) ∈ (U × V) ∩ gph ∂φ, unit directions w and
/// z in the second-order set of ⟨z, w⟩ − σ‖w‖². Empty sets pass vacuously.
CertificateReport psd_certify(const FunctionModel& phi, const Window& w, double sigma, const SamplePlan& plan,
                              const NormModel& m, SecondOrderFlavor flavor = SecondOrderFlavor::kCombined,
                              const Tolerances& tol = {});

/// ⟨z, w⟩ > tol for every unit w and z ∈ ∂²φ(x̄, 0)(w).
CertificateReport pointbased_check(const FunctionModel& phi, VecView xbar, const SamplePlan& plan,
                                   const Tolerances& tol = {});

}  // namespace varcert
