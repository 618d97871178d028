#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "task.hpp"

namespace microrl {

// How multiple activations within one episode collapse into one number.
//   episode_mean_zero_default  mean of per-episode success ratios, 0 when the
//                              objective never activated (default)
//   episode_mean_conditional   mean success ratio over activating episodes
//                              only; undefined if activation never happens
//   ratio_of_expectations      expected successes / expected activations
enum class AggregationMode {
  episode_mean_zero_default,
  episode_mean_conditional,
  ratio_of_expectations,
};

// Micro-objective with its monitors compiled against a fixed task.
struct CompiledObjective {
  std::string name;
  HistoryMonitor initiation;
  HistoryMonitor termination;
  int horizon = 1;
};

inline HistoryMonitor compile(const MonitorSpec& spec, const EpisodicTask& task) {
  return compile(spec, task.mdp, task.horizon);
}

inline std::vector<CompiledObjective> compile_objectives(const EpisodicTask& task) {
  std::vector<CompiledObjective> out;
  out.reserve(task.objectives.size());
  for (const auto& o : task.objectives)
    out.push_back({o.name, compile(o.initiation, task), compile(o.termination, task), o.horizon});
  return out;
}

// Per-episode bookkeeping for one objective.
struct ObjectiveStatus {
  bool active = false;
  int timer = 0;  // steps since activation, meaningful while active
  int phi_state = 0;
  int psi_state = 0;
  int activations = 0;
  int successes = 0;
};

// Advances one objective on one token. Within the step: monitors move first,
// then an active objective may settle (success wins over timeout at the same
// step), then an inactive objective may activate unless the task is over.
// Returns the settled 0/1 return, or -1 when no activation settled here.
inline int step_objective(const CompiledObjective& obj, ObjectiveStatus& st, Token token,
                          bool task_over) {
  st.phi_state = advance(obj.initiation, st.phi_state, token);
  st.psi_state = advance(obj.termination, st.psi_state, token);
  int settled = -1;
  if (st.active) {
    st.timer += 1;
    if (is_accepting(obj.termination, st.psi_state)) {
      settled = 1;
      st.successes += 1;
      st.active = false;
      st.timer = 0;
    } else if (st.timer >= obj.horizon || task_over) {
      settled = 0;
      st.active = false;
      st.timer = 0;
    }
  }
  if (!st.active && !task_over && is_accepting(obj.initiation, st.phi_state)) {
    st.active = true;
    st.timer = 0;
    st.activations += 1;
  }
  return settled;
}

// Status after consuming the initial token (s0). Activation is possible
// immediately; settling is not, so an episode that starts inside the
// initiation set has the objective active with timer 0.
inline ObjectiveStatus initial_status(const CompiledObjective& obj, StateId s0, bool task_over) {
  ObjectiveStatus st;
  st.phi_state = advance(obj.initiation, obj.initiation.start, initial_token(s0));
  st.psi_state = advance(obj.termination, obj.termination.start, initial_token(s0));
  if (!task_over && is_accepting(obj.initiation, st.phi_state)) {
    st.active = true;
    st.activations = 1;
  }
  return st;
}

inline std::vector<ObjectiveStatus> init_episode(const EpisodicTask& task,
                                                 const std::vector<CompiledObjective>& objectives,
                                                 StateId s0) {
  if (s0 < 0 || s0 >= task.mdp.state_count())
    throw std::invalid_argument("init_episode: state index out of range");
  std::vector<ObjectiveStatus> statuses;
  statuses.reserve(objectives.size());
  bool task_over = task.is_terminal(s0);
  for (const auto& obj : objectives) statuses.push_back(initial_status(obj, s0, task_over));
  return statuses;
}

struct StepEvent {
  int objective = 0;
  int value = 0;  // settled return, 0 or 1
};

// Advances all objectives on the transition (s, a, s') taken at step index t.
// task_over marks that the episode ends after this step (terminal s' or the
// horizon was reached); active objectives then settle and nothing activates.
inline std::vector<StepEvent> on_step(const EpisodicTask& task,
                                      const std::vector<CompiledObjective>& objectives,
                                      std::vector<ObjectiveStatus>& statuses, StateId s,
                                      ActionId a, StateId next, int t, bool task_over) {
  if (statuses.size() != objectives.size())
    throw std::invalid_argument("on_step: one status per objective required");
  if (s < 0 || s >= task.mdp.state_count() || next < 0 || next >= task.mdp.state_count())
    throw std::invalid_argument("on_step: state index out of range");
  if (a < 0 || a >= task.mdp.action_count())
    throw std::invalid_argument("on_step: action index out of range");
  if (t < 0 || t >= task.horizon)
    throw std::invalid_argument("on_step: step index outside the task horizon");
  Token token = step_token(a, next);
  std::vector<StepEvent> events;
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    int settled = step_objective(objectives[i], statuses[i], token, task_over);
    if (settled >= 0) events.push_back({static_cast<int>(i), settled});
  }
  return events;
}

// One settled activation: opened after `start` steps, settled after `end`
// steps, with its 0/1 return.
struct ActivationRecord {
  int start = 0;
  int end = 0;
  int value = 0;
  bool operator==(const ActivationRecord&) const = default;
};

struct EpisodeStep {
  StateId from = 0;
  ActionId action = 0;
  StateId to = 0;
  bool operator==(const EpisodeStep&) const = default;
};

// Complete record of one episode: the path taken and, per objective, every
// settled activation in order.
struct EpisodeTrace {
  StateId start = 0;
  std::vector<EpisodeStep> steps;
  std::vector<std::vector<ActivationRecord>> activations;
};

// Drives objective statuses along an episode and collects the trace.
class EpisodeRecorder {
 public:
  EpisodeRecorder(const EpisodicTask& task, const std::vector<CompiledObjective>& objectives,
                  StateId s0)
      : task_(&task), objectives_(&objectives), current_(s0) {
    trace_.start = s0;
    trace_.activations.resize(objectives.size());
    open_.assign(objectives.size(), -1);
    statuses_ = init_episode(task, objectives, s0);
    for (std::size_t i = 0; i < statuses_.size(); ++i)
      if (statuses_[i].active) open_[i] = 0;
  }

  bool running() const {
    return !task_->is_terminal(current_) &&
           static_cast<int>(trace_.steps.size()) < task_->horizon;
  }

  StateId state() const { return current_; }
  int step_count() const { return static_cast<int>(trace_.steps.size()); }
  const std::vector<ObjectiveStatus>& statuses() const { return statuses_; }
  const EpisodeTrace& trace() const { return trace_; }

  void step(ActionId a, StateId next) {
    if (!running()) throw std::logic_error("EpisodeRecorder: episode already over");
    int t = step_count();
    bool task_over = task_->is_terminal(next) || t + 1 >= task_->horizon;
    std::vector<int> before(statuses_.size());
    for (std::size_t i = 0; i < statuses_.size(); ++i) before[i] = statuses_[i].activations;
    auto events = on_step(*task_, *objectives_, statuses_, current_, a, next, t, task_over);
    trace_.steps.push_back({current_, a, next});
    for (const auto& e : events) {
      trace_.activations[e.objective].push_back({open_[e.objective], t + 1, e.value});
      open_[e.objective] = -1;
    }
    for (std::size_t i = 0; i < statuses_.size(); ++i)
      if (statuses_[i].activations > before[i]) open_[i] = t + 1;
    current_ = next;
  }

 private:
  const EpisodicTask* task_;
  const std::vector<CompiledObjective>* objectives_;
  EpisodeTrace trace_;
  std::vector<ObjectiveStatus> statuses_;
  std::vector<int> open_;  // step at which the current activation opened, -1 if none
  StateId current_ = 0;
};

// Re-runs a recorded path through the lifecycle from scratch. The result
// carries the same steps; activation records are reproduced by the engine.
inline EpisodeTrace replay_trace(const EpisodicTask& task,
                                 const std::vector<CompiledObjective>& objectives,
                                 const EpisodeTrace& source) {
  EpisodeRecorder rec(task, objectives, source.start);
  for (const auto& s : source.steps) rec.step(s.action, s.to);
  return rec.trace();
}

// One episode's contribution to an objective's value.
struct EpisodeContribution {
  double value = 0.0;  // success ratio under the mode's convention
  bool defined = true; // false only for conditional mode with no activations
  int successes = 0;
  int activations = 0;
};

inline EpisodeContribution episode_value_contribution(const EpisodeTrace& trace, int objective,
                                                      AggregationMode mode) {
  const auto& records = trace.activations.at(objective);
  EpisodeContribution c;
  c.activations = static_cast<int>(records.size());
  for (const auto& r : records) c.successes += r.value;
  if (c.activations > 0) {
    c.value = static_cast<double>(c.successes) / c.activations;
  } else {
    c.value = 0.0;
    if (mode == AggregationMode::episode_mean_conditional) c.defined = false;
  }
  return c;
}

// Human-readable dump: the path, then per-objective activation records.
inline std::string format_trace(const EpisodicTask& task, const EpisodeTrace& trace) {
  std::string out = "start: " + task.mdp.states[trace.start] + "\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    out += "step " + std::to_string(i + 1) + ": " + task.mdp.states[s.from] + " -" +
           task.mdp.actions[s.action] + "-> " + task.mdp.states[s.to] + "\n";
  }
  for (std::size_t i = 0; i < trace.activations.size(); ++i) {
    out += "objective " + task.objectives[i].name + ":";
    if (trace.activations[i].empty()) {
      out += " no settled activations\n";
      continue;
    }
    for (const auto& r : trace.activations[i])
      out += " [" + std::to_string(r.start) + ".." + std::to_string(r.end) +
             " return " + std::to_string(r.value) + "]";
    out += "\n";
  }
  return out;
}

}  // namespace microrl
