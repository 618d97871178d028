#pragma once

#include <json.hpp>

#include <initializer_list>
#include <string>
#include <vector>

#include "policy.hpp"
#include "reductions.hpp"
#include "task.hpp"

namespace microrl {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& context, const std::string& message) {
  throw ParseError(context + ": " + message);
}

inline void expect_object(const Json& j, const std::string& context) {
  if (!j.is_object()) parse_fail(context, "expected an object");
}

inline const Json& field(const Json& j, const char* name, const std::string& context) {
  expect_object(j, context);
  auto it = j.find(name);
  if (it == j.end()) parse_fail(context, std::string("missing required field '") + name + "'");
  return *it;
}

inline void reject_unknown(const Json& j, std::initializer_list<const char*> allowed,
                           const std::string& context) {
  expect_object(j, context);
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (item.key() == name) {
        known = true;
        break;
      }
    if (!known) parse_fail(context, "unknown field '" + item.key() + "'");
  }
}

inline std::string as_string(const Json& j, const std::string& context) {
  if (!j.is_string()) parse_fail(context, "expected a string");
  return j.get<std::string>();
}

inline int as_int(const Json& j, const std::string& context) {
  if (!j.is_number_integer()) parse_fail(context, "expected an integer");
  return j.get<int>();
}

inline double as_number(const Json& j, const std::string& context) {
  if (!j.is_number()) parse_fail(context, "expected a number");
  return j.get<double>();
}

inline bool as_bool(const Json& j, const std::string& context) {
  if (!j.is_boolean()) parse_fail(context, "expected a boolean");
  return j.get<bool>();
}

inline std::vector<std::string> as_string_array(const Json& j, const std::string& context) {
  if (!j.is_array()) parse_fail(context, "expected an array");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(as_string(e, context));
  return out;
}

inline StateId resolve_state(const Mdp& mdp, const std::string& name,
                             const std::string& context) {
  auto s = mdp.state_index(name);
  if (!s) parse_fail(context, "unknown state '" + name + "'");
  return *s;
}

inline ActionId resolve_action(const Mdp& mdp, const std::string& name,
                               const std::string& context) {
  auto a = mdp.action_index(name);
  if (!a) parse_fail(context, "unknown action '" + name + "'");
  return *a;
}

// {state: prob} object -> distribution sorted by state index. Zero entries
// are dropped; negative entries survive to validation.
inline StateDist state_dist_from_json(const Json& j, const Mdp& mdp,
                                      const std::string& context) {
  expect_object(j, context);
  StateDist dist;
  for (const auto& item : j.items()) {
    double p = as_number(item.value(), context + "." + item.key());
    if (p == 0.0) continue;
    dist.push_back({resolve_state(mdp, item.key(), context), p});
  }
  std::sort(dist.begin(), dist.end());
  return dist;
}

inline Json state_dist_to_json(const StateDist& dist, const Mdp& mdp) {
  Json j = Json::object();
  for (const auto& [s, p] : dist) j[mdp.states[s]] = p;
  return j;
}

inline Json parse_text(const std::string& text, const std::string& context) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail(context, e.what());
  }
}

}  // namespace detail

// --- Monitor specifications ---

inline Json step_rule_to_json(const StepRule& rule) {
  Json j = Json::object();
  if (rule.on_initial) j["init"] = *rule.on_initial;
  if (rule.action) j["action"] = *rule.action;
  if (rule.state) j["state"] = *rule.state;
  j["to"] = rule.to;
  return j;
}

inline StepRule step_rule_from_json(const Json& j, const std::string& context) {
  detail::reject_unknown(j, {"init", "action", "state", "to"}, context);
  StepRule rule;
  if (j.contains("init")) rule.on_initial = detail::as_bool(j["init"], context + ".init");
  if (j.contains("action")) rule.action = detail::as_string(j["action"], context + ".action");
  if (j.contains("state")) rule.state = detail::as_string(j["state"], context + ".state");
  rule.to = detail::as_string(detail::field(j, "to", context), context + ".to");
  return rule;
}

inline Json monitor_spec_to_json(const MonitorSpec& spec) {
  Json j = Json::object();
  if (const auto* s = std::get_if<StateSetSpec>(&spec)) {
    j["type"] = "state_set";
    j["states"] = s->states;
  } else if (const auto* sa = std::get_if<StateActionSetSpec>(&spec)) {
    j["type"] = "state_action_set";
    Json pairs = Json::array();
    for (const auto& [state, action] : sa->pairs) pairs.push_back({state, action});
    j["pairs"] = pairs;
  } else if (const auto* ts = std::get_if<TimedStateSetSpec>(&spec)) {
    j["type"] = "timed_state_set";
    j["states"] = ts->states;
    j["times"] = ts->times;
  } else {
    const auto& dfa = std::get<DfaSpec>(spec);
    j["type"] = "dfa";
    j["states"] = dfa.states;
    j["start"] = dfa.start;
    j["accepting"] = dfa.accepting;
    Json table = Json::object();
    for (const auto& [state, rules] : dfa.table) {
      Json list = Json::array();
      for (const auto& rule : rules) list.push_back(step_rule_to_json(rule));
      table[state] = list;
    }
    j["table"] = table;
  }
  return j;
}

inline MonitorSpec monitor_spec_from_json(const Json& j, const std::string& context) {
  std::string type = detail::as_string(detail::field(j, "type", context), context + ".type");
  if (type == "state_set") {
    detail::reject_unknown(j, {"type", "states"}, context);
    return StateSetSpec{
        detail::as_string_array(detail::field(j, "states", context), context + ".states")};
  }
  if (type == "state_action_set") {
    detail::reject_unknown(j, {"type", "pairs"}, context);
    const Json& pairs = detail::field(j, "pairs", context);
    if (!pairs.is_array()) detail::parse_fail(context + ".pairs", "expected an array");
    StateActionSetSpec spec;
    for (const auto& p : pairs) {
      if (!p.is_array() || p.size() != 2)
        detail::parse_fail(context + ".pairs", "each pair is a [state, action] array");
      spec.pairs.push_back({detail::as_string(p[0], context + ".pairs"),
                            detail::as_string(p[1], context + ".pairs")});
    }
    return spec;
  }
  if (type == "timed_state_set") {
    detail::reject_unknown(j, {"type", "states", "times"}, context);
    TimedStateSetSpec spec;
    spec.states =
        detail::as_string_array(detail::field(j, "states", context), context + ".states");
    const Json& times = detail::field(j, "times", context);
    if (!times.is_array()) detail::parse_fail(context + ".times", "expected an array");
    for (const auto& t : times) spec.times.push_back(detail::as_int(t, context + ".times"));
    return spec;
  }
  if (type == "dfa") {
    detail::reject_unknown(j, {"type", "states", "start", "accepting", "table"}, context);
    DfaSpec spec;
    spec.states =
        detail::as_string_array(detail::field(j, "states", context), context + ".states");
    spec.start = detail::as_string(detail::field(j, "start", context), context + ".start");
    spec.accepting = detail::as_string_array(detail::field(j, "accepting", context),
                                             context + ".accepting");
    const Json& table = detail::field(j, "table", context);
    detail::expect_object(table, context + ".table");
    for (const auto& item : table.items()) {
      if (!item.value().is_array())
        detail::parse_fail(context + ".table." + item.key(), "expected an array of rules");
      std::vector<StepRule> rules;
      for (const auto& r : item.value())
        rules.push_back(step_rule_from_json(r, context + ".table." + item.key()));
      spec.table[item.key()] = std::move(rules);
    }
    return spec;
  }
  detail::parse_fail(context, "unknown monitor type '" + type + "'");
}

// --- Orders ---

inline Json order_to_json(const PartialOrderSpec& spec) {
  using Kind = PartialOrderSpec::Kind;
  Json j = Json::object();
  switch (spec.kind) {
    case Kind::pareto:
      j["type"] = "pareto";
      break;
    case Kind::lex:
      j["type"] = "lex";
      j["priority"] = spec.priority;
      break;
    case Kind::weighted:
      j["type"] = "weighted";
      j["weights"] = spec.weights;
      break;
    case Kind::threshold: {
      j["type"] = "threshold";
      Json guards = Json::array();
      for (const auto& g : spec.guards) {
        Json guard = Json::object();
        guard["index"] = g.index;
        guard[g.upper ? "max" : "min"] = g.bound;
        guards.push_back(guard);
      }
      j["guards"] = guards;
      j["fallback"] = order_to_json(*spec.fallback);
      break;
    }
    case Kind::product:
      j["type"] = "product";
      j["groups"] = spec.groups;
      break;
  }
  return j;
}

inline PartialOrderSpec order_from_json(const Json& j, const std::string& context) {
  std::string type = detail::as_string(detail::field(j, "type", context), context + ".type");
  if (type == "pareto") {
    detail::reject_unknown(j, {"type"}, context);
    return PartialOrderSpec::pareto_order();
  }
  if (type == "lex") {
    detail::reject_unknown(j, {"type", "priority"}, context);
    const Json& priority = detail::field(j, "priority", context);
    if (!priority.is_array()) detail::parse_fail(context + ".priority", "expected an array");
    std::vector<int> indices;
    for (const auto& e : priority) indices.push_back(detail::as_int(e, context + ".priority"));
    return PartialOrderSpec::lex_order(std::move(indices));
  }
  if (type == "weighted") {
    detail::reject_unknown(j, {"type", "weights"}, context);
    const Json& weights = detail::field(j, "weights", context);
    if (!weights.is_array()) detail::parse_fail(context + ".weights", "expected an array");
    std::vector<double> w;
    for (const auto& e : weights) w.push_back(detail::as_number(e, context + ".weights"));
    return PartialOrderSpec::weighted_order(std::move(w));
  }
  if (type == "threshold") {
    detail::reject_unknown(j, {"type", "guards", "fallback"}, context);
    const Json& guards = detail::field(j, "guards", context);
    if (!guards.is_array()) detail::parse_fail(context + ".guards", "expected an array");
    std::vector<ThresholdGuard> parsed;
    for (const auto& g : guards) {
      detail::reject_unknown(g, {"index", "max", "min"}, context + ".guards");
      ThresholdGuard guard;
      guard.index = detail::as_int(detail::field(g, "index", context + ".guards"),
                                   context + ".guards.index");
      bool has_max = g.contains("max"), has_min = g.contains("min");
      if (has_max == has_min)
        detail::parse_fail(context + ".guards", "each guard takes exactly one of max/min");
      guard.upper = has_max;
      guard.bound = detail::as_number(g[has_max ? "max" : "min"], context + ".guards");
      parsed.push_back(guard);
    }
    PartialOrderSpec fallback =
        order_from_json(detail::field(j, "fallback", context), context + ".fallback");
    return PartialOrderSpec::threshold_order(std::move(parsed), std::move(fallback));
  }
  if (type == "product") {
    detail::reject_unknown(j, {"type", "groups"}, context);
    const Json& groups = detail::field(j, "groups", context);
    if (!groups.is_array()) detail::parse_fail(context + ".groups", "expected an array");
    std::vector<std::vector<int>> parsed;
    for (const auto& g : groups) {
      if (!g.is_array()) detail::parse_fail(context + ".groups", "each group is an array");
      std::vector<int> indices;
      for (const auto& e : g) indices.push_back(detail::as_int(e, context + ".groups"));
      parsed.push_back(std::move(indices));
    }
    return PartialOrderSpec::product_order(std::move(parsed));
  }
  detail::parse_fail(context, "unknown order type '" + type + "'");
}

// --- Task documents ---

namespace detail {

// Shared core of task and bare-MDP documents.
inline void mdp_fields_to_json(Json& j, const Mdp& mdp, const std::vector<StateId>& terminal,
                               int horizon) {
  j["states"] = mdp.states;
  j["actions"] = mdp.actions;
  Json transitions = Json::array();
  for (StateId s = 0; s < mdp.state_count(); ++s) {
    bool is_terminal =
        std::find(terminal.begin(), terminal.end(), s) != terminal.end();
    for (ActionId a = 0; a < mdp.action_count(); ++a) {
      if (static_cast<std::size_t>(s) >= mdp.transitions.size() ||
          static_cast<std::size_t>(a) >= mdp.transitions[s].size())
        continue;
      const auto& row = mdp.transitions[s][a];
      if (!row) continue;
      // Terminal self-loop rows restate the absorbing convention; leave them
      // out of the canonical form.
      if (is_terminal && row->size() == 1 && row->front().first == s &&
          row->front().second == 1.0)
        continue;
      Json entry = Json::object();
      entry["from"] = mdp.states[s];
      entry["action"] = mdp.actions[a];
      entry["to"] = state_dist_to_json(*row, mdp);
      transitions.push_back(entry);
    }
  }
  j["transitions"] = transitions;
  j["initial"] = state_dist_to_json(mdp.initial, mdp);
  Json term = Json::array();
  for (StateId s : terminal) term.push_back(mdp.states[s]);
  j["terminal"] = term;
  j["horizon"] = horizon;
}

struct MdpParts {
  Mdp mdp;
  std::vector<StateId> terminal;
  int horizon = 1;
};

inline MdpParts mdp_fields_from_json(const Json& j, const std::string& context) {
  MdpParts parts;
  Mdp& mdp = parts.mdp;
  mdp.states = as_string_array(field(j, "states", context), context + ".states");
  mdp.actions = as_string_array(field(j, "actions", context), context + ".actions");
  mdp.transitions = empty_transitions(mdp.state_count(), mdp.action_count());

  const Json& transitions = field(j, "transitions", context);
  if (!transitions.is_array()) parse_fail(context + ".transitions", "expected an array");
  for (const Json& entry : transitions) {
    std::string ctx = context + ".transitions";
    reject_unknown(entry, {"from", "action", "to"}, ctx);
    StateId s = resolve_state(mdp, as_string(field(entry, "from", ctx), ctx + ".from"), ctx);
    ActionId a =
        resolve_action(mdp, as_string(field(entry, "action", ctx), ctx + ".action"), ctx);
    ctx += "[" + mdp.states[s] + "," + mdp.actions[a] + "]";
    if (mdp.transitions[s][a]) parse_fail(ctx, "duplicate transition row");
    mdp.transitions[s][a] = state_dist_from_json(field(entry, "to", ctx), mdp, ctx + ".to");
  }

  mdp.initial = state_dist_from_json(field(j, "initial", context), mdp, context + ".initial");

  for (const auto& name :
       as_string_array(field(j, "terminal", context), context + ".terminal"))
    parts.terminal.push_back(resolve_state(mdp, name, context + ".terminal"));
  std::sort(parts.terminal.begin(), parts.terminal.end());

  parts.horizon = as_int(field(j, "horizon", context), context + ".horizon");

  // Absorbing convention: missing rows for terminal states become self-loops.
  for (StateId s : parts.terminal)
    for (ActionId a = 0; a < mdp.action_count(); ++a)
      if (!mdp.transitions[s][a]) mdp.transitions[s][a] = StateDist{{s, 1.0}};
  return parts;
}

}  // namespace detail

inline Json task_to_json(const EpisodicTask& task) {
  Json j = Json::object();
  detail::mdp_fields_to_json(j, task.mdp, task.terminal, task.horizon);
  Json objectives = Json::array();
  for (const auto& o : task.objectives) {
    Json obj = Json::object();
    obj["name"] = o.name;
    obj["init"] = monitor_spec_to_json(o.initiation);
    obj["term"] = monitor_spec_to_json(o.termination);
    obj["horizon"] = o.horizon;
    objectives.push_back(obj);
  }
  j["objectives"] = objectives;
  j["order"] = order_to_json(task.order);
  return j;
}

// Canonical serialization: sorted keys, two-space indent, trailing newline.
inline std::string save_task(const EpisodicTask& task) { return task_to_json(task).dump(2) + "\n"; }

inline EpisodicTask task_from_json(const Json& j) {
  const std::string context = "task document";
  detail::reject_unknown(
      j, {"states", "actions", "transitions", "initial", "terminal", "horizon", "objectives",
          "order"},
      context);
  auto parts = detail::mdp_fields_from_json(j, context);
  EpisodicTask task;
  task.mdp = std::move(parts.mdp);
  task.terminal = std::move(parts.terminal);
  task.horizon = parts.horizon;

  const Json& objectives = detail::field(j, "objectives", context);
  if (!objectives.is_array()) detail::parse_fail(context + ".objectives", "expected an array");
  for (const Json& o : objectives) {
    std::string ctx = context + ".objectives";
    detail::reject_unknown(o, {"name", "init", "term", "horizon"}, ctx);
    MicroObjective obj;
    obj.name = detail::as_string(detail::field(o, "name", ctx), ctx + ".name");
    ctx += "[" + obj.name + "]";
    obj.initiation = monitor_spec_from_json(detail::field(o, "init", ctx), ctx + ".init");
    obj.termination = monitor_spec_from_json(detail::field(o, "term", ctx), ctx + ".term");
    obj.horizon = detail::as_int(detail::field(o, "horizon", ctx), ctx + ".horizon");
    task.objectives.push_back(std::move(obj));
  }

  task.order = order_from_json(detail::field(j, "order", context), context + ".order");
  return task;
}

// Parses and validates a task document. Malformed text raises ParseError;
// well-formed text describing an invalid task raises ValidationError listing
// every violation.
inline EpisodicTask load_task(const std::string& text) {
  EpisodicTask task = task_from_json(detail::parse_text(text, "task document"));
  ValidationReport report = validate_task(task);
  if (!report.ok()) throw ValidationError("task document invalid:\n" + report.to_string());
  return task;
}

// --- Bare MDP documents (reduction inputs) ---

struct MdpDocument {
  Mdp mdp;
  std::vector<StateId> terminal;
  int horizon = 1;
};

inline Json mdp_document_to_json(const MdpDocument& doc) {
  Json j = Json::object();
  detail::mdp_fields_to_json(j, doc.mdp, doc.terminal, doc.horizon);
  return j;
}

inline std::string save_mdp_document(const MdpDocument& doc) {
  return mdp_document_to_json(doc).dump(2) + "\n";
}

inline MdpDocument load_mdp_document(const std::string& text) {
  Json j = detail::parse_text(text, "mdp document");
  const std::string context = "mdp document";
  detail::reject_unknown(
      j, {"states", "actions", "transitions", "initial", "terminal", "horizon"}, context);
  auto parts = detail::mdp_fields_from_json(j, context);
  MdpDocument doc;
  doc.mdp = std::move(parts.mdp);
  doc.terminal = std::move(parts.terminal);
  doc.horizon = parts.horizon;
  return doc;
}

// --- Policies ---

inline Json policy_to_json(const Policy& policy, const Mdp& mdp) {
  Json j = Json::object();
  auto dist_to_json = [&](const ActionDist& d) {
    Json out = Json::object();
    for (const auto& [a, p] : d) out[mdp.actions[a]] = p;
    return out;
  };
  if (const auto* sp = std::get_if<StationaryPolicy>(&policy.impl)) {
    Json map = Json::object();
    if (sp->deterministic()) {
      j["type"] = "sd";
      for (std::size_t s = 0; s < sp->rule.size(); ++s)
        if (sp->rule[s]) map[mdp.states[s]] = mdp.actions[sp->rule[s]->front().first];
    } else {
      j["type"] = "sr";
      for (std::size_t s = 0; s < sp->rule.size(); ++s)
        if (sp->rule[s]) map[mdp.states[s]] = dist_to_json(*sp->rule[s]);
    }
    j["map"] = map;
    return j;
  }
  const auto& fm = std::get<FiniteMemoryPolicy>(policy.impl);
  j["type"] = "fm";
  j["memory"] = fm.memory.names;
  j["initial"] = fm.memory.names[fm.memory.initial];
  Json update = Json::object();
  for (int m = 0; m < fm.memory.size(); ++m) {
    Json rules = Json::array();
    // Dense tables are emitted as one rule per token, initial tokens first.
    for (int tok = 0; tok < fm.memory.token_count; ++tok) {
      Token t = detail::token_at(fm.memory.env_states, tok);
      StepRule rule;
      rule.on_initial = t.initial;
      if (!t.initial) rule.action = mdp.actions[t.action];
      rule.state = mdp.states[t.state];
      rule.to = fm.memory.names[fm.memory.table[m * fm.memory.token_count + tok]];
      rules.push_back(step_rule_to_json(rule));
    }
    update[fm.memory.names[m]] = rules;
  }
  j["update"] = update;
  Json rule = Json::object();
  for (int m = 0; m < fm.memory.size(); ++m) {
    Json per_state = Json::object();
    for (StateId s = 0; s < fm.memory.env_states; ++s) {
      const auto& d = fm.rule[static_cast<std::size_t>(m) * fm.memory.env_states + s];
      if (d) per_state[mdp.states[s]] = dist_to_json(*d);
    }
    rule[fm.memory.names[m]] = per_state;
  }
  j["rule"] = rule;
  return j;
}

inline std::string save_policy(const Policy& policy, const Mdp& mdp) {
  return policy_to_json(policy, mdp).dump(2) + "\n";
}

namespace detail {

inline ActionDist action_dist_from_json(const Json& j, const Mdp& mdp,
                                        const std::string& context) {
  ActionDist d;
  if (j.is_string()) {
    d.push_back({resolve_action(mdp, j.get<std::string>(), context), 1.0});
    return d;
  }
  expect_object(j, context);
  for (const auto& item : j.items()) {
    double p = as_number(item.value(), context + "." + item.key());
    if (p == 0.0) continue;
    d.push_back({resolve_action(mdp, item.key(), context), p});
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace detail

inline Policy policy_from_json(const Json& j, const Mdp& mdp) {
  const std::string context = "policy document";
  std::string type =
      detail::as_string(detail::field(j, "type", context), context + ".type");
  if (type == "sd" || type == "sr") {
    detail::reject_unknown(j, {"type", "map"}, context);
    const Json& map = detail::field(j, "map", context);
    detail::expect_object(map, context + ".map");
    StationaryPolicy p;
    p.rule.resize(mdp.state_count());
    for (const auto& item : map.items()) {
      StateId s = detail::resolve_state(mdp, item.key(), context + ".map");
      std::string ctx = context + ".map." + item.key();
      if (type == "sd" && !item.value().is_string())
        detail::parse_fail(ctx, "expected an action name");
      p.rule[s] = detail::action_dist_from_json(item.value(), mdp, ctx);
    }
    return Policy(std::move(p));
  }
  if (type == "fm") {
    detail::reject_unknown(j, {"type", "memory", "initial", "update", "rule"}, context);
    MemorySpec spec;
    spec.memory_states = detail::as_string_array(detail::field(j, "memory", context),
                                                 context + ".memory");
    spec.initial =
        detail::as_string(detail::field(j, "initial", context), context + ".initial");
    const Json& update = detail::field(j, "update", context);
    detail::expect_object(update, context + ".update");
    for (const auto& item : update.items()) {
      if (!item.value().is_array())
        detail::parse_fail(context + ".update." + item.key(), "expected an array of rules");
      std::vector<StepRule> rules;
      for (const auto& r : item.value())
        rules.push_back(step_rule_from_json(r, context + ".update." + item.key()));
      spec.update[item.key()] = std::move(rules);
    }
    FiniteMemoryPolicy fm;
    try {
      fm.memory = compile_memory(spec, mdp);
    } catch (const std::invalid_argument& e) {
      detail::parse_fail(context, e.what());
    }
    fm.rule.resize(static_cast<std::size_t>(fm.memory.size()) * mdp.state_count());
    const Json& rule = detail::field(j, "rule", context);
    detail::expect_object(rule, context + ".rule");
    for (const auto& item : rule.items()) {
      int m = -1;
      for (std::size_t i = 0; i < spec.memory_states.size(); ++i)
        if (spec.memory_states[i] == item.key()) m = static_cast<int>(i);
      if (m < 0)
        detail::parse_fail(context + ".rule", "unknown memory state '" + item.key() + "'");
      detail::expect_object(item.value(), context + ".rule." + item.key());
      for (const auto& entry : item.value().items()) {
        std::string ctx = context + ".rule." + item.key() + "." + entry.key();
        StateId s = detail::resolve_state(mdp, entry.key(), ctx);
        fm.rule[static_cast<std::size_t>(m) * mdp.state_count() + s] =
            detail::action_dist_from_json(entry.value(), mdp, ctx);
      }
    }
    return Policy(std::move(fm));
  }
  detail::parse_fail(context, "unknown policy type '" + type + "'");
}

// Parses a policy document against a known MDP and checks its distributions.
inline Policy load_policy(const std::string& text, const Mdp& mdp) {
  Policy policy = policy_from_json(detail::parse_text(text, "policy document"), mdp);
  ValidationReport report = validate_policy(policy, mdp);
  if (!report.ok()) throw ValidationError("policy document invalid:\n" + report.to_string());
  return policy;
}

// --- Memory specifications ---

inline Json memory_spec_to_json(const MemorySpec& spec) {
  Json j = Json::object();
  j["memory"] = spec.memory_states;
  j["initial"] = spec.initial;
  Json update = Json::object();
  for (const auto& [state, rules] : spec.update) {
    Json list = Json::array();
    for (const auto& rule : rules) list.push_back(step_rule_to_json(rule));
    update[state] = list;
  }
  j["update"] = update;
  if (spec.decision_states) j["decision_states"] = *spec.decision_states;
  return j;
}

inline MemorySpec memory_spec_from_json(const Json& j) {
  const std::string context = "memory spec";
  detail::reject_unknown(j, {"memory", "initial", "update", "decision_states"}, context);
  MemorySpec spec;
  spec.memory_states =
      detail::as_string_array(detail::field(j, "memory", context), context + ".memory");
  spec.initial = detail::as_string(detail::field(j, "initial", context), context + ".initial");
  const Json& update = detail::field(j, "update", context);
  detail::expect_object(update, context + ".update");
  for (const auto& item : update.items()) {
    if (!item.value().is_array())
      detail::parse_fail(context + ".update." + item.key(), "expected an array of rules");
    std::vector<StepRule> rules;
    for (const auto& r : item.value())
      rules.push_back(step_rule_from_json(r, context + ".update." + item.key()));
    spec.update[item.key()] = std::move(rules);
  }
  if (j.contains("decision_states"))
    spec.decision_states =
        detail::as_string_array(j["decision_states"], context + ".decision_states");
  return spec;
}

// --- Discounted reward specifications ---

inline Json rewards_to_json(const DiscountedObjectiveSpec& spec, const Mdp& mdp) {
  Json j = Json::object();
  j["gamma"] = spec.gamma;
  Json rewards = Json::array();
  for (const auto& [key, value] : spec.reward) {
    Json entry = Json::object();
    entry["from"] = mdp.states[key[0]];
    entry["action"] = mdp.actions[key[1]];
    entry["to"] = mdp.states[key[2]];
    entry["value"] = value;
    rewards.push_back(entry);
  }
  j["rewards"] = rewards;
  return j;
}

inline DiscountedObjectiveSpec rewards_from_json(const Json& j, const Mdp& mdp) {
  const std::string context = "reward spec";
  detail::reject_unknown(j, {"gamma", "rewards"}, context);
  DiscountedObjectiveSpec spec;
  spec.gamma = detail::as_number(detail::field(j, "gamma", context), context + ".gamma");
  const Json& rewards = detail::field(j, "rewards", context);
  if (!rewards.is_array()) detail::parse_fail(context + ".rewards", "expected an array");
  for (const Json& entry : rewards) {
    std::string ctx = context + ".rewards";
    detail::reject_unknown(entry, {"from", "action", "to", "value"}, ctx);
    StateId s =
        detail::resolve_state(mdp, detail::as_string(detail::field(entry, "from", ctx), ctx), ctx);
    ActionId a = detail::resolve_action(
        mdp, detail::as_string(detail::field(entry, "action", ctx), ctx), ctx);
    StateId s2 =
        detail::resolve_state(mdp, detail::as_string(detail::field(entry, "to", ctx), ctx), ctx);
    spec.reward[{s, a, s2}] = detail::as_number(detail::field(entry, "value", ctx), ctx);
  }
  return spec;
}

inline DiscountedObjectiveSpec load_rewards(const std::string& text, const Mdp& mdp) {
  return rewards_from_json(detail::parse_text(text, "reward spec"), mdp);
}

}  // namespace microrl
