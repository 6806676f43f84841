#pragma once

#include <cstddef>
#include <vector>

#include "varcert/function_model.hpp"
#include "varcert/norm_space.hpp"
#include "varcert/report.hpp"
#include "varcert/sample_plan.hpp"
#include "varcert/sampling.hpp"

namespace varcert {

/// Pairs scanned exhaustively up to this count; beyond it, a seeded subsample.
inline constexpr std::size_t kMaxPairs = 100000;

/// Minimum of a pairwise gap and the attaining pair (i < j).
struct PairGap {
  double gap = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t pairs = 0;
  /// Worst pairs, smallest gap first.
  std::vector<std::pair<std::size_t, std::size_t>> worst;
};

/// min over pairs of ⟨x₁* − x₂*, x₁ − x₂⟩.
PairGap monotone_gap(const std::vector<GraphSample>& samples, std::uint64_t seed = 1);
/// min over pairs of ⟨x₁* − x₂*, x₁ − x₂⟩ − σ⟨J(x₁) − J(x₂), x₁ − x₂⟩.
PairGap strong_gap_duality(const std::vector<GraphSample>& samples, double sigma, const NormModel& m,
                           std::uint64_t seed = 1);
/// min over pairs of ⟨x₁* − x₂*, x₁ − x₂⟩ − σ‖x₁ − x₂‖².
PairGap strong_gap_norm(const std::vector<GraphSample>& samples, double sigma, const NormModel& m,
                        std::uint64_t seed = 1);
PairGap strong_gap_norm(const std::vector<GraphSample>& samples, double sigma, const NormFn& norm,
                        std::uint64_t seed = 1);

enum class MonoKind { kDuality, kNorm };

const char* to_string(MonoKind k);
MonoKind mono_kind_from_string(const std::string& s);

/// Strong (σ > 0) or plain (σ = 0) monotonicity of ∂φ on the attentive window.
CertificateReport local_mono_certify(const FunctionModel& phi, const Window& w, double sigma, MonoKind kind,
                                     const SamplePlan& plan, const NormModel& m, const Tolerances& tol = {});

/// Solves y* ∈ ∂φ(x) + λJ(x) over x ∈ U for a grid of y* around
/// x̄* + λJ(x̄), and reports existence, single-valuedness, a modulus table of
/// the solution map, and monotonicity of ∂φ along the solutions. 1-D only.
CertificateReport resolvent_probe(const FunctionModel& phi, double lambda, const Window& w, const NormModel& m,
                                  const SamplePlan& plan, const Tolerances& tol = {});

}  // namespace varcert
