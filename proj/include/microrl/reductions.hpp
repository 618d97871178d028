#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "evaluate.hpp"
#include "task.hpp"

namespace microrl {

// Conventional discounted objective: per-transition rewards and a discount
// factor, evaluated over the episodic horizon.
struct DiscountedObjectiveSpec {
  std::map<std::array<int, 3>, double> reward;  // (state, action, next state)
  double gamma = 1.0;
};

inline constexpr int kDefaultExpansionHorizonCap = 1000;

// Encodes a stationary deterministic target policy as one action-event
// micro-objective per non-terminal state under the componentwise order:
// "was the target's action taken at this state?" as an event probability.
inline EpisodicTask generality_reduction(const Mdp& mdp, std::vector<StateId> terminal,
                                         int horizon, const StationaryPolicy& target) {
  EpisodicTask task;
  task.mdp = mdp;
  task.terminal = std::move(terminal);
  task.horizon = horizon;
  task.order = PartialOrderSpec::pareto_order();
  for (StateId s = 0; s < mdp.state_count(); ++s) {
    if (task.is_terminal(s)) continue;
    if (s >= static_cast<int>(target.rule.size()) || !target.rule[s] ||
        target.rule[s]->size() != 1 || target.rule[s]->front().second != 1.0)
      throw std::invalid_argument(
          "generality reduction: target must pick exactly one action at state '" +
          mdp.states[s] + "'");
    ActionId a = target.rule[s]->front().first;
    MicroObjective obj;
    obj.name = "do-" + mdp.actions[a] + "-at-" + mdp.states[s];
    obj.initiation = StateSetSpec{{mdp.states[s]}};
    obj.termination = StateActionSetSpec{{{mdp.states[s], mdp.actions[a]}}};
    obj.horizon = 1;
    task.objectives.push_back(std::move(obj));
  }
  if (task.objectives.empty())
    throw std::invalid_argument("generality reduction: no non-terminal states");
  return task;
}

namespace detail {

// Acceptor for "the step (s, a, s') just happened": tracks whether the
// previous payload was s, accepts exactly on the following (a, s') token.
inline DfaSpec transition_event_dfa(const Mdp& mdp, StateId s, ActionId a, StateId s2) {
  const std::string& from = mdp.states[s];
  const std::string& action = mdp.actions[a];
  const std::string& to = mdp.states[s2];

  auto arm_rule = [&] {
    StepRule r;
    r.state = from;
    r.to = "armed";
    return r;
  };
  auto hit_rule = [&] {
    StepRule r;
    r.action = action;
    r.state = to;
    r.to = "hit";
    return r;
  };
  auto fallthrough = [] {
    StepRule r;
    r.to = "out";
    return r;
  };

  DfaSpec d;
  d.states = {"out", "armed", "hit"};
  d.start = "out";
  d.accepting = {"hit"};
  d.table["out"] = {arm_rule(), fallthrough()};
  d.table["armed"] = {hit_rule(), arm_rule(), fallthrough()};
  // After a hit the previous payload is s'; re-arm or reset accordingly.
  d.table["hit"] = s2 == s ? d.table["armed"] : d.table["out"];
  return d;
}

// States reachable with positive probability at each step under at least one
// policy (all actions considered).
inline std::vector<std::vector<bool>> support_reachable(const Mdp& mdp,
                                                        const std::vector<StateId>& terminal,
                                                        int horizon) {
  auto is_terminal = [&](StateId s) {
    return std::find(terminal.begin(), terminal.end(), s) != terminal.end();
  };
  std::vector<std::vector<bool>> reach(horizon + 1,
                                       std::vector<bool>(mdp.state_count(), false));
  for (const auto& [s, p] : mdp.initial)
    if (p > 0.0) reach[0][s] = true;
  for (int t = 0; t < horizon; ++t)
    for (StateId s = 0; s < mdp.state_count(); ++s) {
      if (!reach[t][s] || is_terminal(s)) continue;
      for (ActionId a = 0; a < mdp.action_count(); ++a) {
        const auto& row = mdp.transitions[s][a];
        if (!row) continue;
        for (const auto& [s2, p] : *row)
          if (p > 0.0) reach[t + 1][s2] = true;
      }
    }
  return reach;
}

}  // namespace detail

struct ExpansionResult {
  EpisodicTask task;
  std::vector<double> weights;
};

// Rewrites a discounted objective as a family of one-step event objectives:
// one per (t, s, a, s') with nonzero reward that an episode can reach, with
// weight gamma^t * r(s, a, s'). The weighted sum of the family's values
// under the default aggregation equals the discounted value.
inline ExpansionResult expansion_reduction(const Mdp& mdp, std::vector<StateId> terminal,
                                           int horizon, const DiscountedObjectiveSpec& spec,
                                           int horizon_cap = kDefaultExpansionHorizonCap) {
  if (spec.gamma < 0.0 || spec.gamma > 1.0)
    throw std::invalid_argument("expansion reduction: gamma must lie in [0,1]");
  if (horizon > horizon_cap)
    throw CapacityError("expansion reduction: horizon " + std::to_string(horizon) +
                        " exceeds cap " + std::to_string(horizon_cap));
  ExpansionResult result;
  result.task.mdp = mdp;
  result.task.terminal = terminal;
  result.task.horizon = horizon;
  result.task.order = PartialOrderSpec::pareto_order();

  auto reach = detail::support_reachable(mdp, terminal, horizon);
  auto is_terminal = [&](StateId s) {
    return std::find(terminal.begin(), terminal.end(), s) != terminal.end();
  };
  for (int t = 0; t < horizon; ++t) {
    for (const auto& [key, r] : spec.reward) {
      if (r == 0.0) continue;
      auto [s, a, s2] = key;
      if (s < 0 || s >= mdp.state_count() || a < 0 || a >= mdp.action_count() || s2 < 0 ||
          s2 >= mdp.state_count())
        throw std::invalid_argument("expansion reduction: reward references unknown ids");
      if (is_terminal(s) || !reach[t][s]) continue;
      MicroObjective obj;
      obj.name = "t" + std::to_string(t) + "-" + mdp.states[s] + "-" + mdp.actions[a] + "-" +
                 mdp.states[s2];
      obj.initiation = TimedStateSetSpec{{mdp.states[s]}, {t}};
      obj.termination = detail::transition_event_dfa(mdp, s, a, s2);
      obj.horizon = 1;
      result.task.objectives.push_back(std::move(obj));
      result.weights.push_back(std::pow(spec.gamma, t) * r);
    }
  }
  return result;
}

// Finite-horizon discounted policy value by backward induction over
// (step, state, policy memory). Terminal states yield no further reward.
inline double discounted_policy_value(const Mdp& mdp, const std::vector<StateId>& terminal,
                                      int horizon, const DiscountedObjectiveSpec& spec,
                                      const Policy& policy) {
  auto is_terminal = [&](StateId s) {
    return std::find(terminal.begin(), terminal.end(), s) != terminal.end();
  };
  auto reward = [&](StateId s, ActionId a, StateId s2) {
    auto it = spec.reward.find({s, a, s2});
    return it == spec.reward.end() ? 0.0 : it->second;
  };
  const int S = mdp.state_count();
  const int M = policy.memory_count();
  std::vector<double> value(static_cast<std::size_t>(S) * M, 0.0);
  for (int t = horizon - 1; t >= 0; --t) {
    std::vector<double> prev(static_cast<std::size_t>(S) * M, 0.0);
    for (StateId s = 0; s < S; ++s) {
      if (is_terminal(s)) continue;
      for (int m = 0; m < M; ++m) {
        const ActionDist* actions = policy.dist(m, s);
        if (!actions)
          throw std::invalid_argument(
              "discounted_policy_value: policy does not cover state '" + mdp.states[s] + "'");
        double v = 0.0;
        for (const auto& [a, pa] : *actions) {
          if (pa <= 0.0) continue;
          const auto& row = mdp.transitions[s][a];
          if (!row)
            throw std::invalid_argument(
                "discounted_policy_value: missing transition row for state '" + mdp.states[s] +
                "'");
          for (const auto& [s2, ps2] : *row) {
            if (ps2 <= 0.0) continue;
            int m2 = policy.advance_memory(m, step_token(a, s2));
            v += pa * ps2 *
                 (reward(s, a, s2) +
                  spec.gamma * value[static_cast<std::size_t>(s2) * M + m2]);
          }
        }
        prev[static_cast<std::size_t>(s) * M + m] = v;
      }
    }
    value = std::move(prev);
  }
  double out = 0.0;
  for (const auto& [s0, p0] : mdp.initial) {
    if (p0 <= 0.0) continue;
    int m0 = policy.advance_memory(policy.initial_memory(), initial_token(s0));
    out += p0 * value[static_cast<std::size_t>(s0) * M + m0];
  }
  return out;
}

struct ExpansionCheck {
  double direct = 0.0;
  double reconstructed = 0.0;
  double difference = 0.0;
};

// Compares the expansion route (evaluate the event family, take the weighted
// sum) against direct backward-induction DP on the discounted objective.
inline ExpansionCheck verify_expansion(const Mdp& mdp, const std::vector<StateId>& terminal,
                                       int horizon, const DiscountedObjectiveSpec& spec,
                                       const Policy& policy) {
  ExpansionCheck check;
  check.direct = discounted_policy_value(mdp, terminal, horizon, spec, policy);
  ExpansionResult expansion = expansion_reduction(mdp, terminal, horizon, spec);
  ExactResult values = evaluate_exact(expansion.task, policy);
  check.reconstructed = reconstruct_scalar(values.values, expansion.weights);
  check.difference = std::abs(check.direct - check.reconstructed);
  return check;
}

}  // namespace microrl
