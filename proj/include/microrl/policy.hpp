#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rng.hpp"
#include "task.hpp"

namespace microrl {

// Probability distribution over actions, sorted by action index, positive
// entries only.
using ActionDist = std::vector<std::pair<ActionId, double>>;

// Stationary decision rule: one distribution per covered state. States an
// evaluator never queries (terminal states) may stay uncovered.
struct StationaryPolicy {
  std::vector<std::optional<ActionDist>> rule;  // indexed by state

  bool deterministic() const {
    for (const auto& d : rule)
      if (d && d->size() != 1) return false;
    return true;
  }
};

// Token-driven memory automaton: the finite-memory policy's view of history.
// Shares the monitor token alphabet, so evaluation augments state with a
// plain product.
struct MemoryAutomaton {
  std::vector<std::string> names;
  int initial = 0;
  std::vector<int> table;  // memory-major over the token alphabet
  int token_count = 0;
  int env_states = 0;
  int env_actions = 0;

  int size() const { return static_cast<int>(names.size()); }
  int advance(int m, Token t) const {
    return table[m * token_count + token_index(env_states, env_actions, t)];
  }
};

// Document-level description of a memory automaton plus, optionally, the
// states where enumerated policies get a free action choice (defaults to all
// non-terminal states).
struct MemorySpec {
  std::vector<std::string> memory_states;
  std::string initial;
  std::map<std::string, std::vector<StepRule>> update;
  std::optional<std::vector<std::string>> decision_states;
  bool operator==(const MemorySpec&) const = default;
};

inline MemoryAutomaton compile_memory(const MemorySpec& spec, const Mdp& mdp) {
  if (spec.memory_states.empty())
    throw std::invalid_argument("memory spec: no memory states");
  MemoryAutomaton m;
  m.names = spec.memory_states;
  m.env_states = mdp.state_count();
  m.env_actions = mdp.action_count();
  m.token_count = token_space_size(m.env_states, m.env_actions);
  m.initial = -1;
  for (std::size_t i = 0; i < spec.memory_states.size(); ++i)
    if (spec.memory_states[i] == spec.initial) m.initial = static_cast<int>(i);
  if (m.initial < 0)
    throw std::invalid_argument("memory spec: unknown initial memory state '" + spec.initial +
                                "'");
  m.table = detail::resolve_rule_table(spec.memory_states, spec.update, mdp, "memory spec");
  return m;
}

// History-dependent policy with finite memory: rule indexed by
// (memory, state), memory advanced on every consumed token.
struct FiniteMemoryPolicy {
  MemoryAutomaton memory;
  std::vector<std::optional<ActionDist>> rule;  // memory * state_count + state

  bool deterministic() const {
    for (const auto& d : rule)
      if (d && d->size() != 1) return false;
    return true;
  }
};

// Either policy class behind one interface: memory plumbing collapses to a
// single dummy memory state for stationary policies.
struct Policy {
  std::variant<StationaryPolicy, FiniteMemoryPolicy> impl;

  Policy() : impl(StationaryPolicy{}) {}
  Policy(StationaryPolicy p) : impl(std::move(p)) {}
  Policy(FiniteMemoryPolicy p) : impl(std::move(p)) {}

  bool stationary() const { return std::holds_alternative<StationaryPolicy>(impl); }

  int memory_count() const {
    if (auto* fm = std::get_if<FiniteMemoryPolicy>(&impl)) return fm->memory.size();
    return 1;
  }

  int initial_memory() const {
    if (auto* fm = std::get_if<FiniteMemoryPolicy>(&impl)) return fm->memory.initial;
    return 0;
  }

  int advance_memory(int m, Token t) const {
    if (auto* fm = std::get_if<FiniteMemoryPolicy>(&impl)) return fm->memory.advance(m, t);
    return 0;
  }

  // Action distribution at (memory, state); nullptr when uncovered.
  const ActionDist* dist(int m, StateId s) const {
    if (auto* sp = std::get_if<StationaryPolicy>(&impl)) {
      if (s < 0 || s >= static_cast<int>(sp->rule.size())) return nullptr;
      return sp->rule[s] ? &*sp->rule[s] : nullptr;
    }
    const auto& fm = std::get<FiniteMemoryPolicy>(impl);
    std::size_t idx = static_cast<std::size_t>(m) * fm.memory.env_states + s;
    if (idx >= fm.rule.size()) return nullptr;
    return fm.rule[idx] ? &*fm.rule[idx] : nullptr;
  }

  bool deterministic() const {
    if (auto* sp = std::get_if<StationaryPolicy>(&impl)) return sp->deterministic();
    return std::get<FiniteMemoryPolicy>(impl).deterministic();
  }
};

struct ActResult {
  ActionId action = 0;
  int memory = 0;
};

// Samples an action from the rule at (memory, state). Point-mass rules never
// touch the randomness source. Memory is returned as-is: token-driven
// updates happen through advance_memory once the transition lands.
template <UnitRandomSource R>
ActResult act(const Policy& policy, int memory, StateId s, R& rng) {
  const ActionDist* d = policy.dist(memory, s);
  if (!d || d->empty())
    throw std::invalid_argument("policy does not cover state index " + std::to_string(s));
  if (d->size() == 1) return {d->front().first, memory};
  return {sample_categorical<R, ActionId>(rng, {d->data(), d->size()}), memory};
}

// Distribution checks for hand-built or loaded policies.
inline ValidationReport validate_policy(const Policy& policy, const Mdp& mdp) {
  ValidationReport report;
  auto check = [&](const std::optional<ActionDist>& d, const std::string& field) {
    if (!d) return;
    if (d->empty()) {
      report.violations.push_back({field, "distribution is empty"});
      return;
    }
    double sum = 0.0;
    for (const auto& [a, p] : *d) {
      if (a < 0 || a >= mdp.action_count()) {
        report.violations.push_back({field, "references action index out of range"});
        return;
      }
      if (p < 0.0 || !std::isfinite(p)) {
        report.violations.push_back({field, "action probability must be finite and >= 0"});
        return;
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance)
      report.violations.push_back(
          {field, "action probabilities sum to " + std::to_string(sum) + ", expected 1"});
  };
  if (auto* sp = std::get_if<StationaryPolicy>(&policy.impl)) {
    for (std::size_t s = 0; s < sp->rule.size(); ++s)
      check(sp->rule[s], "rule[" + mdp.states[s] + "]");
  } else {
    const auto& fm = std::get<FiniteMemoryPolicy>(policy.impl);
    for (int m = 0; m < fm.memory.size(); ++m)
      for (StateId s = 0; s < mdp.state_count(); ++s)
        check(fm.rule[static_cast<std::size_t>(m) * mdp.state_count() + s],
              "rule[" + fm.memory.names[m] + "," + mdp.states[s] + "]");
  }
  return report;
}

// --- Convenience constructors ---

inline StationaryPolicy uniform_policy(const EpisodicTask& task) {
  StationaryPolicy p;
  p.rule.resize(task.mdp.state_count());
  int A = task.mdp.action_count();
  for (StateId s = 0; s < task.mdp.state_count(); ++s) {
    if (task.is_terminal(s)) continue;
    ActionDist d;
    for (ActionId a = 0; a < A; ++a) d.push_back({a, 1.0 / A});
    p.rule[s] = std::move(d);
  }
  return p;
}

inline StationaryPolicy deterministic_policy(const EpisodicTask& task,
                                             const std::map<std::string, std::string>& mapping) {
  StationaryPolicy p;
  p.rule.resize(task.mdp.state_count());
  for (const auto& [state, action] : mapping) {
    auto s = task.mdp.state_index(state);
    auto a = task.mdp.action_index(action);
    if (!s) throw std::invalid_argument("policy: unknown state '" + state + "'");
    if (!a) throw std::invalid_argument("policy: unknown action '" + action + "'");
    p.rule[*s] = ActionDist{{*a, 1.0}};
  }
  return p;
}

// Memory spec that records the initial state: one memory state per support
// state of the initial distribution, set by the initial token and never
// changed afterwards.
inline MemorySpec initial_state_memory(const EpisodicTask& task) {
  MemorySpec spec;
  for (const auto& [s, p] : task.mdp.initial) {
    (void)p;
    spec.memory_states.push_back("start-" + task.mdp.states[s]);
  }
  if (spec.memory_states.empty())
    throw std::invalid_argument("initial-state memory: empty initial distribution");
  spec.initial = spec.memory_states.front();
  for (const auto& m : spec.memory_states) {
    std::vector<StepRule> rules;
    for (const auto& [s, p] : task.mdp.initial) {
      (void)p;
      StepRule r;
      r.on_initial = true;
      r.state = task.mdp.states[s];
      r.to = "start-" + task.mdp.states[s];
      rules.push_back(std::move(r));
    }
    StepRule stay;
    stay.to = m;
    rules.push_back(std::move(stay));
    spec.update[m] = std::move(rules);
  }
  return spec;
}

namespace detail {

inline std::vector<StateId> decision_states(const EpisodicTask& task) {
  std::vector<StateId> out;
  for (StateId s = 0; s < task.mdp.state_count(); ++s)
    if (!task.is_terminal(s)) out.push_back(s);
  return out;
}

inline std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap,
                                 const std::string& what) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && n > cap / base)
      throw CapacityError(what + ": more than " + std::to_string(cap) + " policies");
    n *= base;
  }
  if (n > cap)
    throw CapacityError(what + ": " + std::to_string(n) + " policies exceed cap " +
                        std::to_string(cap));
  return n;
}

// All length-`parts` vectors of non-negative counts summing to `total`, in
// lexicographic order.
inline std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(parts, 0);
  auto rec = [&](auto&& self, int index, int remaining) -> void {
    if (index == parts - 1) {
      current[index] = remaining;
      out.push_back(current);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      current[index] = c;
      self(self, index + 1, remaining - c);
    }
  };
  if (parts > 0) rec(rec, 0, total);
  return out;
}

inline std::string format_probability(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", p);
  return buf;
}

}  // namespace detail

inline constexpr std::size_t kDefaultEnumerationCap = 1000000;

// All stationary deterministic policies over the task's non-terminal states,
// in a stable mixed-radix order (last decision state varies fastest).
class SdEnumeration {
 public:
  explicit SdEnumeration(const EpisodicTask& task,
                         std::size_t cap = kDefaultEnumerationCap)
      : task_(&task), decisions_(detail::decision_states(task)) {
    size_ = detail::checked_power(task.mdp.action_count(), decisions_.size(), cap,
                                  "stationary deterministic enumeration");
  }

  std::size_t size() const { return size_; }

  Policy at(std::size_t index) const {
    StationaryPolicy p;
    p.rule.resize(task_->mdp.state_count());
    int A = task_->mdp.action_count();
    for (auto it = decisions_.rbegin(); it != decisions_.rend(); ++it) {
      p.rule[*it] = ActionDist{{static_cast<ActionId>(index % A), 1.0}};
      index /= A;
    }
    return Policy(std::move(p));
  }

  std::string label(std::size_t index) const {
    std::string out;
    Policy p = at(index);
    for (StateId s : decisions_) {
      if (!out.empty()) out += ";";
      out += task_->mdp.states[s] + "=" + task_->mdp.actions[p.dist(0, s)->front().first];
    }
    return out;
  }

 private:
  const EpisodicTask* task_;
  std::vector<StateId> decisions_;
  std::size_t size_ = 0;
};

// Stationary random policies whose per-state action probabilities are
// multiples of 1/resolution. Contains every stationary deterministic policy;
// for even resolutions it contains the uniform policy.
class SrGridEnumeration {
 public:
  SrGridEnumeration(const EpisodicTask& task, int resolution,
                    std::size_t cap = kDefaultEnumerationCap)
      : task_(&task), decisions_(detail::decision_states(task)), resolution_(resolution) {
    if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
    cells_ = detail::compositions(resolution, task.mdp.action_count());
    size_ = detail::checked_power(cells_.size(), decisions_.size(), cap,
                                  "stationary grid enumeration");
  }

  std::size_t size() const { return size_; }

  Policy at(std::size_t index) const {
    StationaryPolicy p;
    p.rule.resize(task_->mdp.state_count());
    for (auto it = decisions_.rbegin(); it != decisions_.rend(); ++it) {
      const auto& cell = cells_[index % cells_.size()];
      index /= cells_.size();
      ActionDist d;
      for (std::size_t a = 0; a < cell.size(); ++a)
        if (cell[a] > 0)
          d.push_back({static_cast<ActionId>(a), static_cast<double>(cell[a]) / resolution_});
      p.rule[*it] = std::move(d);
    }
    return Policy(std::move(p));
  }

  std::string label(std::size_t index) const {
    Policy p = at(index);
    std::string out;
    for (StateId s : decisions_) {
      if (!out.empty()) out += ";";
      out += task_->mdp.states[s] + "=";
      const ActionDist& d = *p.dist(0, s);
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) out += "|";
        out += task_->mdp.actions[d[i].first] + ":" + detail::format_probability(d[i].second);
      }
    }
    return out;
  }

 private:
  const EpisodicTask* task_;
  std::vector<StateId> decisions_;
  int resolution_ = 1;
  std::vector<std::vector<int>> cells_;
  std::size_t size_ = 0;
};

// All deterministic finite-memory policies over a fixed memory automaton.
// Free choices range over (memory state, decision state) pairs; non-terminal
// states outside the decision set are pinned to the first action.
class FmDetEnumeration {
 public:
  FmDetEnumeration(const EpisodicTask& task, const MemorySpec& spec,
                   std::size_t cap = kDefaultEnumerationCap)
      : task_(&task), memory_(compile_memory(spec, task.mdp)) {
    if (spec.decision_states) {
      for (const auto& name : *spec.decision_states) {
        auto s = task.mdp.state_index(name);
        if (!s) throw std::invalid_argument("memory spec: unknown decision state '" + name + "'");
        decisions_.push_back(*s);
      }
    } else {
      decisions_ = detail::decision_states(task);
    }
    pinned_ = detail::decision_states(task);
    std::erase_if(pinned_, [&](StateId s) {
      return std::find(decisions_.begin(), decisions_.end(), s) != decisions_.end();
    });
    size_ = detail::checked_power(task.mdp.action_count(),
                                  static_cast<std::size_t>(memory_.size()) * decisions_.size(),
                                  cap, "finite-memory enumeration");
  }

  std::size_t size() const { return size_; }

  Policy at(std::size_t index) const {
    FiniteMemoryPolicy p;
    p.memory = memory_;
    int S = task_->mdp.state_count();
    int A = task_->mdp.action_count();
    p.rule.resize(static_cast<std::size_t>(memory_.size()) * S);
    for (int m = memory_.size() - 1; m >= 0; --m)
      for (auto it = decisions_.rbegin(); it != decisions_.rend(); ++it) {
        p.rule[static_cast<std::size_t>(m) * S + *it] =
            ActionDist{{static_cast<ActionId>(index % A), 1.0}};
        index /= A;
      }
    for (int m = 0; m < memory_.size(); ++m)
      for (StateId s : pinned_)
        p.rule[static_cast<std::size_t>(m) * S + s] = ActionDist{{0, 1.0}};
    return Policy(std::move(p));
  }

  std::string label(std::size_t index) const {
    Policy p = at(index);
    std::string out;
    for (int m = 0; m < memory_.size(); ++m)
      for (StateId s : decisions_) {
        if (!out.empty()) out += ";";
        out += memory_.names[m] + "." + task_->mdp.states[s] + "=" +
               task_->mdp.actions[p.dist(m, s)->front().first];
      }
    return out;
  }

 private:
  const EpisodicTask* task_;
  MemoryAutomaton memory_;
  std::vector<StateId> decisions_;
  std::vector<StateId> pinned_;
  std::size_t size_ = 0;
};

}  // namespace microrl
