#pragma once

#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "evaluate.hpp"
#include "policy.hpp"

namespace microrl {

// One enumerable policy class behind a single interface.
class PolicyClass {
 public:
  static PolicyClass sd(const EpisodicTask& task, std::size_t cap = kDefaultEnumerationCap) {
    return PolicyClass(SdEnumeration(task, cap), "SD");
  }

  static PolicyClass sr_grid(const EpisodicTask& task, int resolution,
                             std::size_t cap = kDefaultEnumerationCap) {
    return PolicyClass(SrGridEnumeration(task, resolution, cap),
                       "SR-grid(" + std::to_string(resolution) + ")");
  }

  static PolicyClass fm_det(const EpisodicTask& task, const MemorySpec& spec,
                            const std::string& spec_label = "custom",
                            std::size_t cap = kDefaultEnumerationCap) {
    return PolicyClass(FmDetEnumeration(task, spec, cap), "FM-det(" + spec_label + ")");
  }

  std::size_t size() const {
    return std::visit([](const auto& e) { return e.size(); }, impl_);
  }

  Policy at(std::size_t index) const {
    return std::visit([&](const auto& e) { return e.at(index); }, impl_);
  }

  std::string label(std::size_t index) const {
    return std::visit([&](const auto& e) { return e.label(index); }, impl_);
  }

  const std::string& class_label() const { return label_; }

 private:
  template <class E>
  PolicyClass(E enumeration, std::string label)
      : impl_(std::move(enumeration)), label_(std::move(label)) {}

  std::variant<SdEnumeration, SrGridEnumeration, FmDetEnumeration> impl_;
  std::string label_;
};

struct FrontierEntry {
  std::string policy_id;
  std::vector<double> values;
  bool maximal = false;
};

struct FrontierResult {
  std::string class_label;
  AggregationMode mode = AggregationMode::episode_mean_zero_default;
  std::vector<FrontierEntry> entries;

  std::size_t maximal_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.maximal ? 1 : 0;
    return n;
  }
};

// Evaluates every policy in the class exactly and flags the entries whose
// value vectors no other entry strictly dominates under the task's order.
inline FrontierResult frontier(const EpisodicTask& task, const PolicyClass& policies,
                               AggregationMode mode = AggregationMode::episode_mean_zero_default) {
  FrontierResult result;
  result.class_label = policies.class_label();
  result.mode = mode;
  std::vector<std::vector<double>> vectors;
  for (std::size_t i = 0; i < policies.size(); ++i) {
    ExactResult eval = evaluate_exact(task, policies.at(i), mode);
    vectors.push_back(eval.values.values);
    result.entries.push_back({policies.label(i), eval.values.values, false});
  }
  for (std::size_t i : maximal_elements(task.order, vectors))
    result.entries[i].maximal = true;
  return result;
}

// CSV rendering: policy_id, v_1..v_k, maximal (1/0), one row per policy.
inline std::string frontier_csv(const FrontierResult& result) {
  std::string out = "policy_id";
  std::size_t k = result.entries.empty() ? 0 : result.entries.front().values.size();
  for (std::size_t i = 1; i <= k; ++i) out += ",v_" + std::to_string(i);
  out += ",maximal\n";
  char buf[40];
  for (const auto& e : result.entries) {
    out += e.policy_id;
    for (double v : e.values) {
      std::snprintf(buf, sizeof(buf), "%.12g", v);
      out += ",";
      out += buf;
    }
    out += e.maximal ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace microrl
