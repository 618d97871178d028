#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "common.hpp"
#include "mdp.hpp"

namespace microrl {

// --- Monitor specifications (document level, name-based) ---

// Accepts whenever the most recent token's state payload lies in `states`.
struct StateSetSpec {
  std::vector<std::string> states;
  bool operator==(const StateSetSpec&) const = default;
};

// Accepts exactly on a step that took action a in state s for some listed
// pair (s, a). The state in question is where the agent acted, i.e. the
// payload of the token before the step token being consumed.
struct StateActionSetSpec {
  std::vector<std::pair<std::string, std::string>> pairs;  // (state, action)
  bool operator==(const StateActionSetSpec&) const = default;
};

// Accepts whenever the step count so far is in `times` and the most recent
// state payload lies in `states`. The initial token is step 0.
struct TimedStateSetSpec {
  std::vector<std::string> states;
  std::vector<int> times;
  bool operator==(const TimedStateSetSpec&) const = default;
};

// One row of a rule-list step function. A rule matches a token when every
// constraint present matches; `action` only ever matches step tokens.
// The first matching rule in a list wins.
struct StepRule {
  std::optional<bool> on_initial;
  std::optional<std::string> action;
  std::optional<std::string> state;
  std::string to;
  bool operator==(const StepRule&) const = default;
};

// Explicit automaton over the token alphabet. Every state needs a rule list
// that covers all tokens; end lists with an unconstrained catch-all rule.
struct DfaSpec {
  std::vector<std::string> states;
  std::string start;
  std::vector<std::string> accepting;
  std::map<std::string, std::vector<StepRule>> table;
  bool operator==(const DfaSpec&) const = default;
};

using MonitorSpec = std::variant<StateSetSpec, StateActionSetSpec, TimedStateSetSpec, DfaSpec>;

// --- Compiled form ---

// Deterministic automaton with a dense transition table over the token
// alphabet of a fixed MDP. Built once per (spec, task) pair; stepping is a
// table lookup.
struct HistoryMonitor {
  std::vector<std::string> state_names;
  int start = 0;
  std::vector<bool> accepting;
  std::vector<int> table;  // state-major: table[q * token_count + token]
  int token_count = 0;
  int env_states = 0;
  int env_actions = 0;

  int state_count() const { return static_cast<int>(state_names.size()); }
};

inline int advance(const HistoryMonitor& m, int q, Token t) {
  return m.table[q * m.token_count + token_index(m.env_states, m.env_actions, t)];
}

inline bool is_accepting(const HistoryMonitor& m, int q) { return m.accepting[q]; }

namespace detail {

inline Token token_at(int state_count, int index) {
  if (index < state_count) return initial_token(index);
  int rest = index - state_count;
  return step_token(rest / state_count, rest % state_count);
}

inline HistoryMonitor monitor_shell(const Mdp& mdp, int states) {
  HistoryMonitor m;
  m.env_states = mdp.state_count();
  m.env_actions = mdp.action_count();
  m.token_count = token_space_size(m.env_states, m.env_actions);
  m.accepting.assign(states, false);
  m.table.assign(static_cast<std::size_t>(states) * m.token_count, 0);
  return m;
}

inline std::vector<bool> state_mask(const Mdp& mdp, const std::vector<std::string>& names,
                                    const char* what) {
  std::vector<bool> mask(mdp.state_count(), false);
  for (const auto& name : names) {
    auto s = mdp.state_index(name);
    if (!s) throw std::invalid_argument(std::string(what) + ": unknown state '" + name + "'");
    mask[*s] = true;
  }
  return mask;
}

inline HistoryMonitor compile_state_set(const StateSetSpec& spec, const Mdp& mdp) {
  auto mask = state_mask(mdp, spec.states, "state set monitor");
  HistoryMonitor m = monitor_shell(mdp, 2);
  m.state_names = {"out", "in"};
  m.start = 0;
  m.accepting[1] = true;
  for (int q = 0; q < 2; ++q)
    for (int tok = 0; tok < m.token_count; ++tok)
      m.table[q * m.token_count + tok] = mask[token_at(m.env_states, tok).state] ? 1 : 0;
  return m;
}

inline HistoryMonitor compile_state_action_set(const StateActionSetSpec& spec, const Mdp& mdp) {
  int S = mdp.state_count();
  std::vector<bool> pair_mask(static_cast<std::size_t>(S) * mdp.action_count(), false);
  for (const auto& [state, action] : spec.pairs) {
    auto s = mdp.state_index(state);
    auto a = mdp.action_index(action);
    if (!s) throw std::invalid_argument("state-action monitor: unknown state '" + state + "'");
    if (!a) throw std::invalid_argument("state-action monitor: unknown action '" + action + "'");
    pair_mask[*s * mdp.action_count() + *a] = true;
  }
  // Monitor state encodes (previous state payload or none, accepted-now flag).
  // Index: (prev + 1) * 2 + hit, prev = -1 for none.
  int count = (S + 1) * 2;
  HistoryMonitor m = monitor_shell(mdp, count);
  m.state_names.resize(count);
  for (int prev = -1; prev < S; ++prev)
    for (int hit = 0; hit < 2; ++hit) {
      std::string base = prev < 0 ? "start" : "at-" + mdp.states[prev];
      m.state_names[(prev + 1) * 2 + hit] = hit ? base + "-hit" : base;
    }
  m.start = 0;
  for (int prev = -1; prev < S; ++prev)
    for (int hit = 0; hit < 2; ++hit) {
      int q = (prev + 1) * 2 + hit;
      m.accepting[q] = hit != 0;
      for (int tok = 0; tok < m.token_count; ++tok) {
        Token t = token_at(S, tok);
        bool new_hit =
            !t.initial && prev >= 0 && pair_mask[prev * mdp.action_count() + t.action];
        m.table[q * m.token_count + tok] = (t.state + 1) * 2 + (new_hit ? 1 : 0);
      }
    }
  return m;
}

inline HistoryMonitor compile_timed_state_set(const TimedStateSetSpec& spec, const Mdp& mdp,
                                              int horizon) {
  auto mask = state_mask(mdp, spec.states, "timed state set monitor");
  for (int t : spec.times)
    if (t < 0) throw std::invalid_argument("timed state set monitor: negative time");
  // Step counter saturates one past the horizon; listed times beyond the
  // horizon can then never accept, which matches episodes never reaching them.
  int cap = horizon + 1;
  std::vector<bool> time_mask(cap + 1, false);
  for (int t : spec.times)
    if (t <= horizon) time_mask[t] = true;
  // Monitor state: (steps so far, last payload in set). Index: count * 2 + in.
  int count = (cap + 1) * 2;
  HistoryMonitor m = monitor_shell(mdp, count);
  m.state_names.resize(count);
  for (int c = 0; c <= cap; ++c)
    for (int in = 0; in < 2; ++in)
      m.state_names[c * 2 + in] = "t" + std::to_string(c) + (in ? "-in" : "-out");
  m.start = 0;
  for (int c = 0; c <= cap; ++c)
    for (int in = 0; in < 2; ++in) {
      int q = c * 2 + in;
      m.accepting[q] = in != 0 && time_mask[c];
      for (int tok = 0; tok < m.token_count; ++tok) {
        Token t = token_at(m.env_states, tok);
        int next_c = t.initial ? c : std::min(c + 1, cap);
        m.table[q * m.token_count + tok] = next_c * 2 + (mask[t.state] ? 1 : 0);
      }
    }
  return m;
}

inline bool rule_matches(const StepRule& rule, const Mdp& mdp, Token t) {
  if (rule.on_initial && *rule.on_initial != t.initial) return false;
  if (rule.action) {
    if (t.initial) return false;
    if (mdp.actions[t.action] != *rule.action) return false;
  }
  if (rule.state && mdp.states[t.state] != *rule.state) return false;
  return true;
}

// Resolves a rule-list table over `states` to a dense (state x token)
// successor table. Shared by dfa monitors and policy memory automata.
inline std::vector<int> resolve_rule_table(const std::vector<std::string>& states,
                                           const std::map<std::string, std::vector<StepRule>>& table,
                                           const Mdp& mdp, const std::string& what) {
  auto find_state = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == name) return static_cast<int>(i);
    throw std::invalid_argument(what + ": unknown automaton state '" + name + "'");
  };
  for (const auto& [name, rules] : table) find_state(name);
  int token_count = token_space_size(mdp.state_count(), mdp.action_count());
  std::vector<int> dense(states.size() * token_count, 0);
  for (std::size_t q = 0; q < states.size(); ++q) {
    auto it = table.find(states[q]);
    if (it == table.end())
      throw std::invalid_argument(what + ": no rules for state '" + states[q] + "'");
    for (const auto& rule : it->second) {
      if (rule.action && !mdp.action_index(*rule.action))
        throw std::invalid_argument(what + ": unknown action '" + *rule.action + "'");
      if (rule.state && !mdp.state_index(*rule.state))
        throw std::invalid_argument(what + ": unknown state '" + *rule.state + "'");
      find_state(rule.to);
    }
    for (int tok = 0; tok < token_count; ++tok) {
      Token t = token_at(mdp.state_count(), tok);
      const StepRule* match = nullptr;
      for (const auto& rule : it->second)
        if (rule_matches(rule, mdp, t)) {
          match = &rule;
          break;
        }
      if (!match)
        throw std::invalid_argument(what + ": rules for state '" + states[q] +
                                    "' do not cover every token; add a catch-all rule");
      dense[q * token_count + tok] = find_state(match->to);
    }
  }
  return dense;
}

inline HistoryMonitor compile_dfa(const DfaSpec& spec, const Mdp& mdp) {
  auto find_state = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < spec.states.size(); ++i)
      if (spec.states[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("dfa monitor: unknown monitor state '" + name + "'");
  };
  HistoryMonitor m = monitor_shell(mdp, static_cast<int>(spec.states.size()));
  m.state_names = spec.states;
  m.start = find_state(spec.start);
  for (const auto& name : spec.accepting) m.accepting[find_state(name)] = true;
  m.table = resolve_rule_table(spec.states, spec.table, mdp, "dfa monitor");
  return m;
}

}  // namespace detail

// Compiles a monitor specification against an MDP's token alphabet. The
// horizon bounds the step counter of timed specifications. Unknown names and
// non-total rule tables raise std::invalid_argument.
inline HistoryMonitor compile(const MonitorSpec& spec, const Mdp& mdp, int horizon) {
  return std::visit(
      [&](const auto& s) -> HistoryMonitor {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StateSetSpec>) return detail::compile_state_set(s, mdp);
        else if constexpr (std::is_same_v<T, StateActionSetSpec>)
          return detail::compile_state_action_set(s, mdp);
        else if constexpr (std::is_same_v<T, TimedStateSetSpec>)
          return detail::compile_timed_state_set(s, mdp, horizon);
        else
          return detail::compile_dfa(s, mdp);
      },
      spec);
}

}  // namespace microrl
