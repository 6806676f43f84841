#pragma once

#include "varcert/function_model.hpp"
#include "varcert/minimize.hpp"
#include "varcert/norm_space.hpp"
#include "varcert/report.hpp"
#include "varcert/sample_plan.hpp"
#include "varcert/sampling.hpp"

namespace varcert {

/// Lipschitz ratios above this count as an unbounded modulus table.
inline constexpr double kMaxTiltModulus = 1e6;

/// M(x*) = argmin over u_box of φ(x) − ⟨x*, x⟩.
EnvelopeResult tilt_map(const FunctionModel& phi, const Box& u_box, VecView xstar, const SamplePlan& plan,
                        const Tolerances& tol = {});

/// Tilt grid x* = v_radius·i/11·e_k, i = −10..10, along each axis. CERTIFIED
/// iff M(0) = {x̄}, every M(x*) is a single interior cluster, and the
/// adjacent-pair modulus stays below kMaxTiltModulus. result.modulus_table
/// has rows {tilt1, tilt2, displacement, ratio}.
CertificateReport tilt_stability_certify(const FunctionModel& phi, VecView xbar, const Box& u_box,
                                         double v_radius, const SamplePlan& plan, const NormModel& m,
                                         const Tolerances& tol = {});

/// φ(x) >= φ(u) + ⟨u*, x − u⟩ + (σ/2)‖x − u‖² over attentive graph samples
/// and probe points x ∈ U.
CertificateReport second_order_growth_check(const FunctionModel& phi, const Window& w, double sigma,
                                            const SamplePlan& plan, const NormModel& m,
                                            const Tolerances& tol = {});

}  // namespace varcert
