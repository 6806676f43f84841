#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "varcert/function_model.hpp"
#include "varcert/minimize.hpp"
#include "varcert/norm_space.hpp"
#include "varcert/report.hpp"
#include "varcert/sample_plan.hpp"

namespace varcert {

/// Number of box doublings used to declare an envelope −∞.
inline constexpr int kUnboundedDoublings = 3;
/// Decrease per doubling that counts as divergence.
inline constexpr double kUnboundedDrop = 10.0;

/// e_λφ(x) = inf_w φ(w) + (2λ)⁻¹‖w − x‖² over plan.box, ‖·‖ from m.
/// When the minimum lands on the box boundary (or φ carries no
/// prox-boundedness certificate for this λ) the box is doubled
/// kUnboundedDoublings times; a drop of more than kUnboundedDrop at every
/// doubling reports value −∞.
EnvelopeResult moreau_envelope(const FunctionModel& phi, double lambda, VecView x, const SamplePlan& plan,
                               const NormModel& m, const Tolerances& tol = {});
EnvelopeResult moreau_envelope(const FunctionModel& phi, double lambda, VecView x, const SamplePlan& plan);

/// P_λφ(x): the minimizer set of moreau_envelope.
EnvelopeResult proximal_map(const FunctionModel& phi, double lambda, VecView x, const SamplePlan& plan,
                            const NormModel& m, const Tolerances& tol = {});

/// inf_w φ(w) − ⟨x*, w⟩ + (2λ)⁻¹‖w − x‖².
EnvelopeResult tilted_envelope(const FunctionModel& phi, double lambda, VecView xstar, VecView x,
                               const SamplePlan& plan, const NormModel& m, const Tolerances& tol = {});
EnvelopeResult tilted_prox(const FunctionModel& phi, double lambda, VecView xstar, VecView x,
                           const SamplePlan& plan, const NormModel& m, const Tolerances& tol = {});

/// λ⁻¹ J(x − P_λ^{x̄*}φ(x)). Throws NonSmoothError when the tilted prox is
/// wider than tol.cluster_tol.
Vec envelope_gradient(const FunctionModel& phi, double lambda, VecView xstar_bar, VecView x,
                      const NormModel& m, const SamplePlan& plan, const Tolerances& tol = {});

struct LambdaProbe {
  double lambda = 0.0;
  double value = 0.0;
  bool finite = true;
};

struct LambdaThreshold {
  /// Largest tested λ with a finite envelope (0 if none).
  double lambda0_lower = 0.0;
  /// Smallest tested λ whose envelope diverged (+inf if none).
  double lambda0_upper = 0.0;
  bool bracket_valid = false;
  std::vector<LambdaProbe> probes;
};

void to_json(nlohmann::json& j, const LambdaThreshold& t);

/// Tests finiteness of e_λφ at the plan center for each λ by doubling the
/// box up to 12 times; divergence means three consecutive drops larger than
/// kUnboundedDrop.
LambdaThreshold prox_bound_threshold(const FunctionModel& phi, const SamplePlan& plan,
                                     const std::vector<double>& lambda_grid, const NormModel& m,
                                     const Tolerances& tol = {});

/// e_λφ(x) = e_{λ'}ψ(x/(1+σλ)) + σ/(2(1+σλ))‖x‖² with λ' = λ/(1+σλ) and
/// ψ = φ − (σ/2)‖·‖². Euclidean geometry only.
CertificateReport check_shift_identity(const FunctionModel& phi, double sigma, double lambda, VecView x,
                                       const SamplePlan& plan, const NormModel& m,
                                       const Tolerances& tol = {});

}  // namespace varcert
