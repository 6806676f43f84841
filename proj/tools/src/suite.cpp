#include "varcert_cli/suite.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "varcert/varcert.hpp"

namespace varcert::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Step {
  std::string label;
  Verdict expected;
  std::function<CertificateReport()> run;
};

std::vector<SuiteCase> run_steps(const std::string& model, const std::vector<Step>& steps) {
  std::vector<SuiteCase> out;
  for (const auto& s : steps) {
    const CertificateReport r = s.run();
    out.push_back({model, s.label, s.expected, r.verdict, r.margin});
  }
  return out;
}

std::vector<Step> staircase_steps(std::uint64_t seed) {
  const FunctionModel phi = models::staircase();
  const NormModel m = NormModel::euclidean(1);
  const SamplePlan plan(seed, 101, 0, Box::cube(1, -1.0, 1.0));
  const Vec z{0.0};
  const Window w(z, z, 0.3, 0.3, 0.1);
  return {
      {"tilt_stability", Verdict::kCertified,
       [=] { return tilt_stability_certify(phi, z, Box::cube(1, -0.5, 0.5), 0.2, plan, m); }},
      {"prox_regularity", Verdict::kRefuted, [=] { return prox_regularity_certify(phi, z, z, w, plan, m); }},
      {"psd_sigma_0.5", Verdict::kRefuted, [=] { return psd_certify(phi, w, 0.5, plan, m); }},
      {"pointbased", Verdict::kRefuted, [=] { return pointbased_check(phi, z, plan); }},
      {"subdiff_continuity", Verdict::kCertified,
       [=] {
         return subdiff_continuity_check(phi, z, z, {0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001}, plan, m);
       }},
  };
}

std::vector<Step> zero_one_steps(std::uint64_t seed) {
  const FunctionModel phi = models::zero_one();
  const NormModel m = NormModel::euclidean(1);
  const SamplePlan plan(seed, 101, 0, Box::cube(1, -1.0, 1.0));
  const Vec z{0.0};
  const Window w(z, z, 0.5, 0.5, 0.5);
  return {
      {"strong_vc_sigma_1", Verdict::kCertified,
       [=] { return certify_variational_convexity(phi, z, z, 1.0, w, m, plan); }},
      {"subdiff_continuity", Verdict::kRefuted,
       [=] { return subdiff_continuity_check(phi, z, z, {0.5, 0.1, 0.01}, plan, m); }},
      {"prox_regularity", Verdict::kCertified, [=] { return prox_regularity_certify(phi, z, z, w, plan, m); }},
      {"psd_sigma_1", Verdict::kRefuted, [=] { return psd_certify(phi, w, 1.0, plan, m); }},
  };
}

std::vector<Step> quadratic_steps(std::uint64_t seed) {
  const FunctionModel phi = models::quadratic(1.0, 1);
  const NormModel m = NormModel::euclidean(1);
  const SamplePlan plan(seed, 101, 0, Box::cube(1, -1.0, 1.0));
  const Vec z{0.0};
  const Window w(z, z, 0.5, 0.5, kInf);
  return {
      {"strong_vc_sigma_1", Verdict::kCertified,
       [=] { return certify_variational_convexity(phi, z, z, 1.0, w, m, plan); }},
      {"strong_mono_sigma_1", Verdict::kCertified,
       [=] { return local_mono_certify(phi, w, 1.0, MonoKind::kDuality, plan, m); }},
      {"prox_regularity", Verdict::kCertified, [=] { return prox_regularity_certify(phi, z, z, w, plan, m); }},
      {"psd_sigma_1", Verdict::kCertified, [=] { return psd_certify(phi, w, 1.0, plan, m); }},
      {"tilt_stability", Verdict::kCertified,
       [=] { return tilt_stability_certify(phi, z, Box::cube(1, -0.5, 0.5), 0.2, plan, m); }},
      {"resolvent", Verdict::kCertified, [=] { return resolvent_probe(phi, 1.0, w, m, plan); }},
  };
}

std::vector<Step> abs_steps(std::uint64_t seed) {
  const FunctionModel phi = models::abs_value(1);
  const NormModel m = NormModel::euclidean(1);
  const SamplePlan plan(seed, 101, 0, Box::cube(1, -1.0, 1.0));
  const Vec z{0.0};
  const Window w(z, z, 0.5, 0.5, kInf);
  const Window wide(z, z, 0.5, 2.0, kInf);
  return {
      {"vc", Verdict::kCertified, [=] { return certify_variational_convexity(phi, z, z, 0.0, w, m, plan); }},
      {"pointbased", Verdict::kVacuous, [=] { return pointbased_check(phi, z, plan); }},
      {"tilt_stability", Verdict::kCertified,
       [=] { return tilt_stability_certify(phi, z, Box::cube(1, -0.5, 0.5), 0.2, plan, m); }},
      {"strong_vc_sigma_1_wide", Verdict::kRefuted,
       [=] { return certify_variational_convexity(phi, z, z, 1.0, wide, m, plan); }},
  };
}

std::vector<Step> huber_steps(std::uint64_t seed) {
  const FunctionModel phi = models::huber(0.5, 1);
  const NormModel m = NormModel::euclidean(1);
  const SamplePlan plan(seed, 101, 0, Box::cube(1, -1.0, 1.0));
  const Vec z{0.0};
  const Window w(z, z, 0.5, 0.5, kInf);
  return {
      {"vc", Verdict::kCertified, [=] { return certify_variational_convexity(phi, z, z, 0.0, w, m, plan); }},
      {"psd_sigma_0", Verdict::kCertified, [=] { return psd_certify(phi, w, 0.0, plan, m); }},
      {"tilt_stability", Verdict::kCertified,
       [=] { return tilt_stability_certify(phi, z, Box::cube(1, -0.5, 0.5), 0.2, plan, m); }},
  };
}

std::vector<Step> l1_steps(std::uint64_t seed) {
  constexpr std::size_t kGrid = 512;
  const FunctionModel phi = models::l1_weighted_square(kGrid);
  const Box box = Box::cube(kGrid, -1.0, 1.0);
  const NormFn norm = l1_grid_norm(kGrid);
  Vec u(kGrid), v(kGrid);
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / kGrid;
    u[i] = std::log(std::pow(t, 100) + 0.5);
    v[i] = std::log(1.5 - t);
  }
  return {
      {"polyak_sigma_2", Verdict::kCertified,
       [=] { return polyak_strong_convexity_check(phi, 2.0, box, SamplePlan(seed, 1, 1000, box), norm); }},
      {"shift_sigma_2", Verdict::kRefuted,
       [=] {
         return shift_strong_convexity_check(phi, 2.0, box, SamplePlan(seed, 1, 200, box), norm, {{u, v}});
       }},
  };
}

}  // namespace

const std::vector<std::string>& suite_models() {
  static const std::vector<std::string> names = {"staircase", "zero_one",      "quadratic",
                                                 "abs",       "huber_source", "l1_weighted_square"};
  return names;
}

std::vector<SuiteCase> run_gallery_suite(const std::string& model, std::uint64_t seed) {
  if (model == "staircase") return run_steps(model, staircase_steps(seed));
  if (model == "zero_one") return run_steps(model, zero_one_steps(seed));
  if (model == "quadratic") return run_steps(model, quadratic_steps(seed));
  if (model == "abs") return run_steps(model, abs_steps(seed));
  if (model == "huber_source") return run_steps(model, huber_steps(seed));
  if (model == "l1_weighted_square") return run_steps(model, l1_steps(seed));
  throw InputError("gallery: no verdict suite for '" + model + "'");
}

}  // namespace varcert::cli
