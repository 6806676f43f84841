#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace varcert {

/// Numeric tolerances shared by every certifier.
struct Tolerances {
  double value_tol = 1e-8;    // objective values treated as equal
  double cert_tol = 1e-6;     // slack accepted as nonnegative
  double cluster_tol = 1e-5;  // diameter of a "single-valued" minimizer cluster
};

void to_json(nlohmann::json& j, const Tolerances& t);
void from_json(const nlohmann::json& j, Tolerances& t);

enum class Verdict { kCertified, kRefuted, kVacuous };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// One tested inequality lhs >= rhs, with the data needed to re-evaluate it.
struct Witness {
  nlohmann::json inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const { return lhs - rhs; }
};

struct CertificateReport {
  std::string check;
  Verdict verdict = Verdict::kVacuous;
  /// Minimum slack over all tested inequalities (+inf when none were tested).
  double margin = 0.0;
  double tolerance = 0.0;
  std::size_t tested = 0;
  /// Worst cases, most negative slack first.
  std::vector<Witness> witnesses;
  nlohmann::json params = nlohmann::json::object();
  /// Check-specific outputs (fitted constants, tables).
  nlohmann::json result = nlohmann::json::object();
  std::vector<std::string> notes;

  bool certified() const { return verdict == Verdict::kCertified; }
  bool refuted() const { return verdict == Verdict::kRefuted; }
  bool vacuous() const { return verdict == Verdict::kVacuous; }
};

void to_json(nlohmann::json& j, const CertificateReport& r);

/// Sets verdict from margin and count: VACUOUS with nothing tested,
/// otherwise CERTIFIED iff margin >= -tolerance.
void settle(CertificateReport& r);

/// Number of witnesses kept per report.
inline constexpr std::size_t kMaxWitnesses = 5;

/// Keeps the k smallest (slack, key) pairs. Keys order ties, so the result
/// does not depend on the order in which partial collectors are merged.
class WorstK {
 public:
  struct Entry {
    double slack;
    std::uint64_t key;
  };

  WorstK() : k_(kMaxWitnesses) {}
  explicit WorstK(std::size_t k) : k_(k) {}

  void offer(double slack, std::uint64_t key);
  void merge(const WorstK& other);
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  double min_slack() const;

 private:
  std::size_t k_;
  std::vector<Entry> entries_;
};

}  // namespace varcert
