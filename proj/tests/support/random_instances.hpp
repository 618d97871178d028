#pragma once

// Seeded generators for small random tasks, policies, and reward functions
// used by property tests. Everything is driven by a RandomStream so failures
// reproduce from the seed alone.

#include <algorithm>
#include <string>
#include <vector>

#include <microrl/policy.hpp>
#include <microrl/reductions.hpp>
#include <microrl/rng.hpp>
#include <microrl/task.hpp>

namespace testgen {

using namespace microrl;

inline int pick(RandomStream& rng, int lo, int hi) {
  int span = hi - lo + 1;
  int v = lo + static_cast<int>(rng.unit() * span);
  return std::min(v, hi);
}

inline bool chance(RandomStream& rng, double p) { return rng.unit() < p; }

struct TaskShape {
  int max_states = 4;
  int max_actions = 3;
  int max_horizon = 4;
  int max_objectives = 3;
  int max_objective_horizon = 3;
};

// Random episodic MDP. State 0 is always non-terminal and carries initial
// mass, so every instance has at least one decision to make.
inline Mdp random_mdp(RandomStream& rng, const TaskShape& shape,
                      std::vector<StateId>& terminal) {
  Mdp mdp;
  int S = pick(rng, 2, shape.max_states);
  int A = pick(rng, 1, shape.max_actions);
  for (int s = 0; s < S; ++s) mdp.states.push_back("s" + std::to_string(s));
  for (int a = 0; a < A; ++a) mdp.actions.push_back("a" + std::to_string(a));
  terminal.clear();
  for (int s = 1; s < S; ++s)
    if (chance(rng, 0.3)) terminal.push_back(s);

  auto is_terminal = [&](StateId s) {
    return std::find(terminal.begin(), terminal.end(), s) != terminal.end();
  };

  mdp.transitions = empty_transitions(S, A);
  for (StateId s = 0; s < S; ++s) {
    for (ActionId a = 0; a < A; ++a) {
      if (is_terminal(s)) {
        mdp.transitions[s][a] = StateDist{{s, 1.0}};
        continue;
      }
      int support = pick(rng, 1, std::min(3, S));
      std::vector<StateId> targets;
      while (static_cast<int>(targets.size()) < support) {
        StateId t = pick(rng, 0, S - 1);
        if (std::find(targets.begin(), targets.end(), t) == targets.end())
          targets.push_back(t);
      }
      std::sort(targets.begin(), targets.end());
      std::vector<int> weights;
      int total = 0;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        weights.push_back(pick(rng, 1, 4));
        total += weights.back();
      }
      StateDist dist;
      for (std::size_t i = 0; i < targets.size(); ++i)
        dist.push_back({targets[i], static_cast<double>(weights[i]) / total});
      mdp.transitions[s][a] = std::move(dist);
    }
  }

  if (chance(rng, 0.5) || S < 2) {
    mdp.initial = {{0, 1.0}};
  } else {
    StateId other = pick(rng, 1, S - 1);
    double w = pick(rng, 1, 3) / 4.0;
    mdp.initial = {{0, 1.0 - w}, {other, w}};
  }
  return mdp;
}

inline std::vector<std::string> random_state_subset(RandomStream& rng, const Mdp& mdp) {
  std::vector<std::string> out;
  for (const auto& name : mdp.states)
    if (chance(rng, 0.4)) out.push_back(name);
  if (out.empty()) out.push_back(mdp.states[pick(rng, 0, mdp.state_count() - 1)]);
  return out;
}

inline MonitorSpec random_monitor(RandomStream& rng, const Mdp& mdp, int task_horizon) {
  int kind = pick(rng, 0, 2);
  if (kind == 0) return StateSetSpec{random_state_subset(rng, mdp)};
  if (kind == 1) {
    StateActionSetSpec spec;
    int n = pick(rng, 1, 2);
    for (int i = 0; i < n; ++i)
      spec.pairs.push_back({mdp.states[pick(rng, 0, mdp.state_count() - 1)],
                            mdp.actions[pick(rng, 0, mdp.action_count() - 1)]});
    return spec;
  }
  TimedStateSetSpec spec;
  spec.states = random_state_subset(rng, mdp);
  int n = pick(rng, 1, 2);
  for (int i = 0; i < n; ++i) spec.times.push_back(pick(rng, 0, task_horizon));
  std::sort(spec.times.begin(), spec.times.end());
  spec.times.erase(std::unique(spec.times.begin(), spec.times.end()), spec.times.end());
  return spec;
}

inline EpisodicTask random_task(RandomStream& rng, const TaskShape& shape = {}) {
  EpisodicTask task;
  task.mdp = random_mdp(rng, shape, task.terminal);
  task.horizon = pick(rng, 1, shape.max_horizon);
  int k = pick(rng, 1, shape.max_objectives);
  for (int i = 0; i < k; ++i) {
    MicroObjective obj;
    obj.name = "obj" + std::to_string(i);
    obj.initiation = random_monitor(rng, task.mdp, task.horizon);
    obj.termination = random_monitor(rng, task.mdp, task.horizon);
    obj.horizon = pick(rng, 1, std::min(shape.max_objective_horizon, task.horizon));
    task.objectives.push_back(std::move(obj));
  }
  task.order = PartialOrderSpec::pareto_order();
  return task;
}

// Uniformly random deterministic choice at every non-terminal state.
inline Policy random_sd(RandomStream& rng, const EpisodicTask& task) {
  StationaryPolicy p;
  p.rule.resize(task.mdp.state_count());
  for (StateId s = 0; s < task.mdp.state_count(); ++s) {
    if (task.is_terminal(s)) continue;
    p.rule[s] = ActionDist{{pick(rng, 0, task.mdp.action_count() - 1), 1.0}};
  }
  return Policy(std::move(p));
}

// Random stochastic policy with rational probabilities.
inline Policy random_sr(RandomStream& rng, const EpisodicTask& task) {
  StationaryPolicy p;
  p.rule.resize(task.mdp.state_count());
  for (StateId s = 0; s < task.mdp.state_count(); ++s) {
    if (task.is_terminal(s)) continue;
    ActionDist d;
    int total = 0;
    std::vector<int> weights;
    for (ActionId a = 0; a < task.mdp.action_count(); ++a) {
      weights.push_back(pick(rng, 0, 3));
      total += weights.back();
    }
    if (total == 0) {
      weights[pick(rng, 0, task.mdp.action_count() - 1)] = 1;
      total = 1;
    }
    for (ActionId a = 0; a < task.mdp.action_count(); ++a)
      if (weights[a] > 0)
        d.push_back({a, static_cast<double>(weights[a]) / total});
    p.rule[s] = std::move(d);
  }
  return Policy(std::move(p));
}

// Random deterministic finite-memory policy over the start-state memory.
inline Policy random_fm(RandomStream& rng, const EpisodicTask& task) {
  MemorySpec spec = initial_state_memory(task);
  FiniteMemoryPolicy fm;
  fm.memory = compile_memory(spec, task.mdp);
  int S = task.mdp.state_count();
  fm.rule.resize(static_cast<std::size_t>(fm.memory.size()) * S);
  for (int m = 0; m < fm.memory.size(); ++m)
    for (StateId s = 0; s < S; ++s) {
      if (task.is_terminal(s)) continue;
      fm.rule[static_cast<std::size_t>(m) * S + s] =
          ActionDist{{pick(rng, 0, task.mdp.action_count() - 1), 1.0}};
    }
  return Policy(std::move(fm));
}

// Rewards in [-1, 1] on every transition in the support.
inline DiscountedObjectiveSpec random_rewards(RandomStream& rng, const Mdp& mdp,
                                              const std::vector<StateId>& terminal,
                                              double gamma) {
  DiscountedObjectiveSpec spec;
  spec.gamma = gamma;
  for (StateId s = 0; s < mdp.state_count(); ++s) {
    if (std::find(terminal.begin(), terminal.end(), s) != terminal.end()) continue;
    for (ActionId a = 0; a < mdp.action_count(); ++a)
      for (const auto& [s2, p] : *mdp.transitions[s][a])
        if (p > 0.0) spec.reward[{s, a, s2}] = rng.unit() * 2.0 - 1.0;
  }
  return spec;
}

}  // namespace testgen
