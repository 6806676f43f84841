#pragma once

#include <vector>

#include "varcert/function_model.hpp"
#include "varcert/norm_space.hpp"
#include "varcert/report.hpp"
#include "varcert/sample_plan.hpp"
#include "varcert/sampling.hpp"

namespace varcert {

/// Largest r tried by the dyadic searches.
inline constexpr double kMaxProxR = 1024.0;

/// Smallest element of {0, 1, 2, 4, ..., kMaxProxR} that is >= required,
/// or +inf when none is.
double dyadic_ceiling(double required);

/// Three-scale test of the regular (Fréchet) subgradient inequality: for
/// ρ ∈ {radius, radius/4, radius/16}, the worst probe ratio
/// [φ(x′) − φ(x) − ⟨x*, x′ − x⟩]/‖x′ − x‖ over x′ ∈ B_ρ(x) \ {x}; the ratios
/// are extrapolated to ρ → 0. result: {"ratios": [...], "extrapolated": m0}.
CertificateReport regular_subgradient_check(const FunctionModel& phi, VecView x, VecView xstar, double radius,
                                            const SamplePlan& plan, const NormModel& m,
                                            const Tolerances& tol = {});

/// Smallest dyadic r with φ(x) >= φ(x̄) + ⟨x̄*, x − x̄⟩ − (r/2)‖x − x̄‖² on the
/// probe points of B_ε(x̄), for ε from the plan radius ladder.
/// result: {"r": r, "eps": ε, "required_r": value}.
CertificateReport proximal_subgradient_check(const FunctionModel& phi, VecView xbar, VecView xbar_star,
                                             const SamplePlan& plan, const NormModel& m,
                                             const Tolerances& tol = {});

/// Fits the smallest dyadic r with φ(x) >= φ(u) + ⟨u*, x − u⟩ − (r/2)‖x − u‖²
/// over attentive graph samples (u, u*) of the window and probe points x ∈ U.
CertificateReport prox_regularity_certify(const FunctionModel& phi, VecView xbar, VecView xbar_star,
                                          const Window& w, const SamplePlan& plan, const NormModel& m,
                                          const Tolerances& tol = {});

/// For ε ∈ {0.1, 0.01}, looks for δ in delta_grid such that every graph
/// sample in B_δ(x̄) × B_δ(x̄*) has |φ(x) − φ(x̄)| < ε.
CertificateReport subdiff_continuity_check(const FunctionModel& phi, VecView xbar, VecView xbar_star,
                                           const std::vector<double>& delta_grid, const SamplePlan& plan,
                                           const NormModel& m, const Tolerances& tol = {});

}  // namespace varcert
