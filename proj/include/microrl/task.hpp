#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"
#include "mdp.hpp"
#include "monitor.hpp"
#include "order.hpp"

namespace microrl {

// One micro-objective: activation condition, success condition, and the
// maximum number of steps an activation may stay open.
struct MicroObjective {
  std::string name;
  MonitorSpec initiation;
  MonitorSpec termination;
  int horizon = 1;
  bool operator==(const MicroObjective&) const = default;
};

// Episodic task: MDP, terminal states, task horizon, micro-objectives, and
// the preference order over value vectors.
struct EpisodicTask {
  Mdp mdp;
  std::vector<StateId> terminal;
  int horizon = 1;
  std::vector<MicroObjective> objectives;
  PartialOrderSpec order;

  bool is_terminal(StateId s) const {
    return std::find(terminal.begin(), terminal.end(), s) != terminal.end();
  }
  int objective_count() const { return static_cast<int>(objectives.size()); }
  bool operator==(const EpisodicTask&) const = default;
};

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "\n";
      out += v.field + ": " + v.message;
    }
    return out;
  }
};

namespace detail {

inline void check_distribution(const StateDist& dist, int state_count, const std::string& field,
                               ValidationReport& report) {
  if (dist.empty()) {
    report.violations.push_back({field, "distribution is empty"});
    return;
  }
  double sum = 0.0;
  for (const auto& [s, p] : dist) {
    if (s < 0 || s >= state_count) {
      report.violations.push_back({field, "references state index out of range"});
      return;
    }
    if (p < 0.0 || !std::isfinite(p)) {
      report.violations.push_back({field, "probability for state must be finite and >= 0"});
      return;
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance)
    report.violations.push_back(
        {field, "probabilities sum to " + std::to_string(sum) + ", expected 1"});
}

inline void check_unique_names(const std::vector<std::string>& names, const std::string& field,
                               ValidationReport& report) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) report.violations.push_back({field, "contains an empty name"});
    if (!seen.insert(n).second)
      report.violations.push_back({field, "duplicate name '" + n + "'"});
  }
}

}  // namespace detail

// Checks every task invariant and reports all violations found. Violations
// are data; nothing here throws on bad content.
inline ValidationReport validate_task(const EpisodicTask& task) {
  ValidationReport report;
  const Mdp& mdp = task.mdp;
  const int S = mdp.state_count();
  const int A = mdp.action_count();

  if (S == 0) report.violations.push_back({"states", "must be non-empty"});
  if (A == 0) report.violations.push_back({"actions", "must be non-empty"});
  detail::check_unique_names(mdp.states, "states", report);
  detail::check_unique_names(mdp.actions, "actions", report);

  for (StateId s : task.terminal)
    if (s < 0 || s >= S)
      report.violations.push_back({"terminal", "state index out of range"});
  for (std::size_t i = 0; i + 1 < task.terminal.size(); ++i)
    for (std::size_t j = i + 1; j < task.terminal.size(); ++j)
      if (task.terminal[i] == task.terminal[j]) {
        report.violations.push_back({"terminal", "duplicate terminal state"});
        i = task.terminal.size();
        break;
      }

  if (task.horizon < 1) report.violations.push_back({"horizon", "must be >= 1"});

  detail::check_distribution(mdp.initial, S, "initial", report);

  if (static_cast<int>(mdp.transitions.size()) != S) {
    report.violations.push_back({"transitions", "table has one row set per state"});
  } else {
    for (StateId s = 0; s < S; ++s) {
      if (static_cast<int>(mdp.transitions[s].size()) != A) {
        report.violations.push_back(
            {"transitions", "state '" + mdp.states[s] + "' has one row per action"});
        continue;
      }
      for (ActionId a = 0; a < A; ++a) {
        const auto& row = mdp.transitions[s][a];
        std::string field = "transitions[" + mdp.states[s] + "," + mdp.actions[a] + "]";
        if (!row) {
          // Terminal states are absorbing by convention; their rows may be
          // left out entirely.
          if (!task.is_terminal(s))
            report.violations.push_back({field, "missing transition row"});
          continue;
        }
        detail::check_distribution(*row, S, field, report);
      }
    }
  }

  if (task.objectives.empty())
    report.violations.push_back({"objectives", "must be non-empty"});
  std::vector<std::string> names;
  for (const auto& o : task.objectives) names.push_back(o.name);
  detail::check_unique_names(names, "objectives", report);
  for (const auto& o : task.objectives) {
    if (o.horizon < 1)
      report.violations.push_back({"objectives[" + o.name + "].horizon", "must be >= 1"});
    for (const char* part : {"init", "term"}) {
      const MonitorSpec& spec = part[0] == 'i' ? o.initiation : o.termination;
      try {
        compile(spec, mdp, std::max(task.horizon, 1));
      } catch (const std::invalid_argument& e) {
        report.violations.push_back(
            {"objectives[" + o.name + "]." + part, e.what()});
      }
    }
  }

  if (auto problem = order_spec_problem(task.order, task.objective_count()))
    report.violations.push_back({"order", *problem});

  return report;
}

}  // namespace microrl
