#include "varcert/report.hpp"

#include <algorithm>
#include <limits>

#include "varcert/errors.hpp"
#include "varcert/subdiff_set.hpp"

namespace varcert {

void to_json(nlohmann::json& j, const Tolerances& t) {
  j = {{"value_tol", t.value_tol}, {"cert_tol", t.cert_tol}, {"cluster_tol", t.cluster_tol}};
}

void from_json(const nlohmann::json& j, Tolerances& t) {
  t.value_tol = j.value("value_tol", t.value_tol);
  t.cert_tol = j.value("cert_tol", t.cert_tol);
  t.cluster_tol = j.value("cluster_tol", t.cluster_tol);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kCertified:
      return "CERTIFIED_ON_SAMPLES";
    case Verdict::kRefuted:
      return "REFUTED";
    case Verdict::kVacuous:
      return "VACUOUS";
  }
  return "?";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "CERTIFIED_ON_SAMPLES" || s == "CERTIFIED") return Verdict::kCertified;
  if (s == "REFUTED") return Verdict::kRefuted;
  if (s == "VACUOUS") return Verdict::kVacuous;
  throw InputError("unknown verdict '" + s + "'");
}

void to_json(nlohmann::json& j, const CertificateReport& r) {
  auto witnesses = nlohmann::json::array();
  for (const auto& w : r.witnesses) {
    witnesses.push_back({{"inputs", w.inputs},
                         {"lhs", real_to_json(w.lhs)},
                         {"rhs", real_to_json(w.rhs)},
                         {"slack", real_to_json(w.slack())}});
  }
  j = {{"check", r.check},
       {"verdict", to_string(r.verdict)},
       {"margin", real_to_json(r.margin)},
       {"tolerance", r.tolerance},
       {"tested", r.tested},
       {"witnesses", witnesses},
       {"params", r.params},
       {"result", r.result},
       {"notes", r.notes}};
}

void settle(CertificateReport& r) {
  if (r.tested == 0) {
    r.verdict = Verdict::kVacuous;
    r.margin = std::numeric_limits<double>::infinity();
    return;
  }
  r.verdict = r.margin >= -r.tolerance ? Verdict::kCertified : Verdict::kRefuted;
}

void WorstK::offer(double slack, std::uint64_t key) {
  const auto less = [](const Entry& a, const Entry& b) {
    return a.slack < b.slack || (a.slack == b.slack && a.key < b.key);
  };
  const Entry e{slack, key};
  if (entries_.size() == k_ && !less(e, entries_.back())) return;
  auto pos = std::upper_bound(entries_.begin(), entries_.end(), e, less);
  entries_.insert(pos, e);
  if (entries_.size() > k_) entries_.pop_back();
}

void WorstK::merge(const WorstK& other) {
  for (const auto& e : other.entries_) offer(e.slack, e.key);
}

double WorstK::min_slack() const {
  return entries_.empty() ? std::numeric_limits<double>::infinity() : entries_.front().slack;
}

}  // namespace varcert
