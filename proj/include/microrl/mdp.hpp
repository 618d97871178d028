#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "common.hpp"

namespace microrl {

using StateId = int;
using ActionId = int;

// Discrete distribution over states, sorted by state index.
using StateDist = std::vector<std::pair<StateId, double>>;

// Finite MDP skeleton: named states and actions plus a transition kernel.
// Indices into `states` / `actions` are the canonical identifiers; names are
// for documents and display. Instances are plain data, built once and then
// treated as immutable.
struct Mdp {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  // transitions[s][a]: successor distribution, or nullopt if the row was not
  // provided. Validation requires rows for every state the episode dynamics
  // can query.
  std::vector<std::vector<std::optional<StateDist>>> transitions;
  // Initial state distribution, sorted by state index, positive entries only.
  StateDist initial;

  int state_count() const { return static_cast<int>(states.size()); }
  int action_count() const { return static_cast<int>(actions.size()); }

  std::optional<StateId> state_index(std::string_view name) const {
    for (StateId s = 0; s < state_count(); ++s)
      if (states[s] == name) return s;
    return std::nullopt;
  }

  std::optional<ActionId> action_index(std::string_view name) const {
    for (ActionId a = 0; a < action_count(); ++a)
      if (actions[a] == name) return a;
    return std::nullopt;
  }

  bool operator==(const Mdp&) const = default;
};

// Allocates an empty transition table shaped for the given state and action
// counts.
inline std::vector<std::vector<std::optional<StateDist>>> empty_transitions(int states,
                                                                            int actions) {
  return std::vector<std::vector<std::optional<StateDist>>>(
      states, std::vector<std::optional<StateDist>>(actions));
}

// One element of the history alphabet monitors and policy memories consume.
// Every episode emits one initial token carrying the start state, then one
// step token (action taken, state reached) per step.
struct Token {
  bool initial = false;
  ActionId action = -1;  // -1 for initial tokens
  StateId state = 0;
};

inline Token initial_token(StateId s0) { return Token{true, -1, s0}; }
inline Token step_token(ActionId a, StateId next) { return Token{false, a, next}; }

// Dense index of a token: initial tokens occupy [0, S), step tokens follow in
// action-major order. Monitor and memory tables are indexed by this.
inline int token_index(int state_count, int action_count, Token t) {
  (void)action_count;
  if (t.initial) return t.state;
  return state_count + t.action * state_count + t.state;
}

inline int token_space_size(int state_count, int action_count) {
  return state_count * (1 + action_count);
}

}  // namespace microrl
