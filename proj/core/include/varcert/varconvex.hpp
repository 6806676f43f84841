#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "varcert/function_model.hpp"
#include "varcert/norm_space.hpp"
#include "varcert/report.hpp"
#include "varcert/sample_plan.hpp"
#include "varcert/sampling.hpp"

namespace varcert {

/// Quadratic term of the lower estimate φ(x) >= φ(u) + ⟨u*, x − u⟩ + (σ/2)q(u, x).
enum class LowerKernel {
  kLyapunov,         // q = Λ(u, x)
  kSquaredDistance,  // q = ‖x − u‖²
};

/// Tests the lower estimate for every sample (u, u*) and every point x.
/// Witness keys order ties by (sample, point).
CertificateReport certify_lower_estimate(const FunctionModel& phi, const std::vector<GraphSample>& samples,
                                         const std::vector<Vec>& points, double sigma, const NormModel& m,
                                         LowerKernel kernel, const Tolerances& tol = {});

/// φ(x) >= φ(u) + ⟨u*, x − u⟩ + (σ/2)Λ(u, x) over attentive graph samples
/// (u, u*) and probe points x ∈ U. σ = 0 tests variational convexity.
CertificateReport certify_variational_convexity(const FunctionModel& phi, VecView xbar, VecView xbar_star,
                                                double sigma, const Window& w, const NormModel& m,
                                                const SamplePlan& plan, const Tolerances& tol = {});

struct SigmaSearchResult {
  /// Largest certified σ (0 when even σ = 0 fails; see vc_at_zero).
  double sigma = 0.0;
  bool vc_at_zero = false;
  bool at_upper_bound = false;
  double sigma_max = 0.0;
  std::size_t iterations = 0;
};

void to_json(nlohmann::json& j, const SigmaSearchResult& r);

/// Bisection on σ ∈ [0, sigma_max] to `resolution` over one fixed sample set.
SigmaSearchResult sigma_search(const FunctionModel& phi, VecView xbar, VecView xbar_star, const Window& w,
                               const NormModel& m, const SamplePlan& plan, const Tolerances& tol = {},
                               double sigma_max = 64.0, double resolution = 1e-3);

/// φ̂(x) = max_i [φ(uᵢ) + ⟨uᵢ*, x − uᵢ⟩ + (σ/2)(‖uᵢ‖² − 2⟨J(uᵢ), x⟩)] + (σ/2)‖x‖²,
/// with ∂φ̂(x) = conv{uᵢ* − σJ(uᵢ) : i active} + σJ(x).
FunctionModel build_hull_function(const std::vector<GraphSample>& samples, double sigma, const NormModel& m);

/// Two-sided graph agreement on the window: attentive φ-graph samples lie in
/// gph ∂φ̂ with φ̂ = φ, and φ̂-graph samples in U × V with φ̂ = φ (to value_tol)
/// lie within √value_tol of ∂φ in the subgradient coordinate.
CertificateReport verify_graph_agreement(const FunctionModel& phi, const FunctionModel& hull, const Window& w,
                                         const SamplePlan& plan, const NormModel& m, const Tolerances& tol = {});

struct TransferReport {
  CertificateReport phi;  // φ with modulus σ
  CertificateReport psi;  // ψ = φ − (σ/2)‖·‖² with modulus 0
  bool agree = false;
};

void to_json(nlohmann::json& j, const TransferReport& r);

/// Runs the σ-test on φ and the plain test on ψ, the latter over the sheared
/// samples (u, u* − σJ(u)) centered at (x̄, x̄* − σJ(x̄)).
TransferReport quadratic_shift_transfer(const FunctionModel& phi, double sigma, VecView xbar, VecView xbar_star,
                                        const Window& w, const NormModel& m, const SamplePlan& plan,
                                        const Tolerances& tol = {});

/// A point pair supplied in addition to the random ones.
using PointPair = std::pair<Vec, Vec>;

/// λφ(x) + (1 − λ)φ(y) − φ(λx + (1 − λ)y) − σλ(1 − λ)‖x − y‖²/2 >= 0 on seeded
/// triples from the box (plan.qmc_points of them, else 1000).
CertificateReport polyak_strong_convexity_check(const FunctionModel& phi, double sigma, const Box& box,
                                                const SamplePlan& plan, const NormFn& norm,
                                                const Tolerances& tol = {});

/// Midpoint convexity of ψ = φ − (σ/2)‖·‖² on seeded pairs plus extra pairs.
/// result.extra_slacks lists the slack at each extra pair.
CertificateReport shift_strong_convexity_check(const FunctionModel& phi, double sigma, const Box& box,
                                               const SamplePlan& plan, const NormFn& norm,
                                               const std::vector<PointPair>& extra_pairs = {},
                                               const Tolerances& tol = {});

struct EnvelopeConvexityOptions {
  double radius = 0.25;
  /// Grid points per axis (odd, so midpoints of even-offset pairs are grid points).
  std::size_t grid = 21;
};

/// Midpoint strong convexity of x ↦ e_λ^{x̄*}φ(x) around x̄ with modulus
/// σ/(1 + σλ) for each λ; result.per_lambda holds the measured
/// 8·min[(e(x) + e(y))/2 − e((x + y)/2)]/‖x − y‖². In the Euclidean case
/// the untilted envelope around x̄ + λx̄* is tested as well.
CertificateReport certify_envelope_convexity(const FunctionModel& phi, VecView xbar, VecView xbar_star,
                                             const std::vector<double>& lambdas, double sigma,
                                             const NormModel& m, const SamplePlan& plan,
                                             const EnvelopeConvexityOptions& opts = {},
                                             const Tolerances& tol = {});

}  // namespace varcert
