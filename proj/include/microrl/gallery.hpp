#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "evaluate.hpp"
#include "frontier.hpp"
#include "reductions.hpp"

namespace microrl {

// One checkable expectation about a fixture, with a human-readable outcome.
struct GalleryClaim {
  std::string name;
  std::function<std::pair<bool, std::string>()> run;
};

// A worked example shipped with the library: a concrete task, alternative
// preference orders where the narrative uses several, and the expected
// results as executable claims.
struct GalleryFixture {
  std::string name;
  EpisodicTask task;
  std::map<std::string, PartialOrderSpec> order_variants;
  std::vector<GalleryClaim> claims;
};

inline const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names = {"investment", "taxi", "maze", "fig2a", "fig2b"};
  return names;
}

namespace detail {

inline Mdp gallery_mdp(std::vector<std::string> states, std::vector<std::string> actions) {
  Mdp mdp;
  mdp.states = std::move(states);
  mdp.actions = std::move(actions);
  mdp.transitions = empty_transitions(mdp.state_count(), mdp.action_count());
  return mdp;
}

inline void set_row(Mdp& mdp, const std::string& from, const std::string& action,
                    std::vector<std::pair<std::string, double>> to) {
  StateDist dist;
  for (const auto& [name, p] : to) dist.push_back({*mdp.state_index(name), p});
  std::sort(dist.begin(), dist.end());
  mdp.transitions[*mdp.state_index(from)][*mdp.action_index(action)] = std::move(dist);
}

inline void absorb(Mdp& mdp, const std::string& state) {
  for (ActionId a = 0; a < mdp.action_count(); ++a)
    mdp.transitions[*mdp.state_index(state)][a] = StateDist{{*mdp.state_index(state), 1.0}};
}

inline MicroObjective reach_objective(const std::string& name, const std::string& from,
                                      const std::string& to, int horizon) {
  MicroObjective obj;
  obj.name = name;
  obj.initiation = StateSetSpec{{from}};
  obj.termination = StateSetSpec{{to}};
  obj.horizon = horizon;
  return obj;
}

inline bool close_to(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool vector_close(const std::vector<double>& a, const std::vector<double>& b,
                         double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!close_to(a[i], b[i], tol)) return false;
  return true;
}

inline std::string show_vector(const std::vector<double>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v[i]);
    out += buf;
  }
  return out + ")";
}

inline GalleryFixture investment_fixture() {
  GalleryFixture f;
  f.name = "investment";
  Mdp mdp = gallery_mdp({"s0", "s1", "s2", "s3", "s4"}, {"a1", "a2"});
  set_row(mdp, "s0", "a1", {{"s1", 0.9}, {"s2", 0.1}});
  set_row(mdp, "s0", "a2", {{"s3", 0.7}, {"s4", 0.3}});
  for (const char* s : {"s1", "s2", "s3", "s4"}) absorb(mdp, s);
  mdp.initial = {{0, 1.0}};

  EpisodicTask& task = f.task;
  task.mdp = std::move(mdp);
  task.terminal = {1, 2, 3, 4};
  task.horizon = 1;
  for (const char* s : {"s1", "s2", "s3", "s4"})
    task.objectives.push_back(
        reach_objective(std::string("enter-") + s, "s0", s, 1));

  PartialOrderSpec weighted = PartialOrderSpec::weighted_order({10, -10, 20, -20});
  PartialOrderSpec threshold = PartialOrderSpec::threshold_order(
      {ThresholdGuard{3, 0.15, true}}, weighted);
  task.order = weighted;
  f.order_variants = {{"weighted", weighted},
                      {"pareto", PartialOrderSpec::pareto_order()},
                      {"threshold", threshold}};

  auto shared = std::make_shared<EpisodicTask>(task);
  auto plan = [shared](const char* action) {
    return Policy(deterministic_policy(*shared, {{"s0", action}}));
  };
  auto rewards = [] {
    DiscountedObjectiveSpec spec;
    spec.gamma = 1.0;
    spec.reward[{0, 0, 1}] = 10.0;
    spec.reward[{0, 0, 2}] = -10.0;
    spec.reward[{0, 1, 3}] = 20.0;
    spec.reward[{0, 1, 4}] = -20.0;
    return spec;
  };

  f.claims.push_back({"plan-a1-values", [shared, plan] {
    auto values = evaluate_exact(*shared, plan("a1")).values.values;
    bool ok = vector_close(values, {0.9, 0.1, 0.0, 0.0}, 1e-12);
    return std::make_pair(ok, "a1 event probabilities " + show_vector(values) +
                                  ", expected (0.9, 0.1, 0, 0)");
  }});
  f.claims.push_back({"plan-a2-values", [shared, plan] {
    auto values = evaluate_exact(*shared, plan("a2")).values.values;
    bool ok = vector_close(values, {0.0, 0.0, 0.7, 0.3}, 1e-12);
    return std::make_pair(ok, "a2 event probabilities " + show_vector(values) +
                                  ", expected (0, 0, 0.7, 0.3)");
  }});
  f.claims.push_back({"expansion-return", [shared, plan, rewards] {
    auto expansion =
        expansion_reduction(shared->mdp, shared->terminal, shared->horizon, rewards());
    double r1 = reconstruct_scalar(evaluate_exact(expansion.task, plan("a1")).values,
                                   expansion.weights);
    double r2 = reconstruct_scalar(evaluate_exact(expansion.task, plan("a2")).values,
                                   expansion.weights);
    bool ok = close_to(r1, 8.0, 1e-10) && close_to(r2, 8.0, 1e-10);
    return std::make_pair(ok, "reconstructed returns " + std::to_string(r1) + " and " +
                                  std::to_string(r2) + ", expected 8 and 8");
  }});
  f.claims.push_back({"weighted-tie", [shared, plan] {
    auto u = evaluate_exact(*shared, plan("a1")).values.values;
    auto v = evaluate_exact(*shared, plan("a2")).values.values;
    const auto& order = shared->order;
    bool ok = leq(order, u, v) && leq(order, v, u);
    return std::make_pair(ok, "both plans scalarize to the same weighted return");
  }});
  f.claims.push_back({"pareto-incomparable", [shared, plan] {
    auto u = evaluate_exact(*shared, plan("a1")).values.values;
    auto v = evaluate_exact(*shared, plan("a2")).values.values;
    PartialOrderSpec pareto = PartialOrderSpec::pareto_order();
    bool ok = !leq(pareto, u, v) && !leq(pareto, v, u);
    return std::make_pair(ok, "event probability vectors are componentwise incomparable");
  }});
  f.claims.push_back({"threshold-selects-bounded-loss", [shared, plan] {
    auto u = evaluate_exact(*shared, plan("a1")).values.values;
    auto v = evaluate_exact(*shared, plan("a2")).values.values;
    PartialOrderSpec threshold = PartialOrderSpec::threshold_order(
        {ThresholdGuard{3, 0.15, true}}, PartialOrderSpec::weighted_order({10, -10, 20, -20}));
    auto maximal = maximal_elements(threshold, {u, v});
    bool ok = maximal == std::vector<std::size_t>{0};
    return std::make_pair(ok, "threshold on the large-loss probability keeps only a1");
  }});
  return f;
}

inline GalleryFixture taxi_fixture() {
  GalleryFixture f;
  f.name = "taxi";
  Mdp mdp = gallery_mdp({"s0", "r1", "p", "r2", "s1", "d"}, {"go", "shortcut"});
  set_row(mdp, "s0", "go", {{"r1", 1.0}});
  set_row(mdp, "s0", "shortcut", {{"d", 1.0}});
  set_row(mdp, "r1", "go", {{"p", 1.0}});
  set_row(mdp, "r1", "shortcut", {{"p", 1.0}});
  set_row(mdp, "p", "go", {{"r2", 1.0}});
  set_row(mdp, "p", "shortcut", {{"d", 1.0}});
  set_row(mdp, "r2", "go", {{"s1", 1.0}});
  set_row(mdp, "r2", "shortcut", {{"s1", 1.0}});
  absorb(mdp, "s1");
  absorb(mdp, "d");
  mdp.initial = {{0, 1.0}};

  EpisodicTask& task = f.task;
  task.mdp = std::move(mdp);
  task.terminal = {4, 5};
  task.horizon = 4;
  task.objectives.push_back(reach_objective("pickup", "s0", "p", 2));
  task.objectives.push_back(reach_objective("deliver", "p", "s1", 2));
  task.order = PartialOrderSpec::pareto_order();

  auto shared = std::make_shared<EpisodicTask>(task);
  f.claims.push_back({"direct-route-values", [shared] {
    Policy direct(deterministic_policy(
        *shared, {{"s0", "go"}, {"r1", "go"}, {"p", "go"}, {"r2", "go"}}));
    auto values = evaluate_exact(*shared, direct).values.values;
    bool ok = vector_close(values, {1.0, 1.0}, 1e-12);
    return std::make_pair(ok, "staying on the route gives " + show_vector(values) +
                                  ", expected (1, 1)");
  }});
  f.claims.push_back({"frontier", [shared] {
    FrontierResult result = frontier(*shared, PolicyClass::sd(*shared));
    bool ok = result.entries.size() == 16 && result.maximal_count() == 4;
    for (const auto& e : result.entries)
      ok = ok && (e.maximal == vector_close(e.values, {1.0, 1.0}, 1e-9));
    return std::make_pair(
        ok, "16 route plans, the 4 achieving both pickup and delivery are maximal");
  }});
  return f;
}

inline GalleryFixture maze_fixture() {
  GalleryFixture f;
  f.name = "maze";
  Mdp mdp = gallery_mdp({"s0", "m", "q", "r", "s1", "u"}, {"left", "right"});
  set_row(mdp, "s0", "left", {{"m", 1.0}});
  set_row(mdp, "s0", "right", {{"q", 1.0}});
  set_row(mdp, "m", "left", {{"s1", 1.0}});
  set_row(mdp, "m", "right", {{"r", 1.0}});
  set_row(mdp, "q", "left", {{"r", 1.0}});
  set_row(mdp, "q", "right", {{"q", 1.0}});
  set_row(mdp, "r", "left", {{"s1", 1.0}});
  set_row(mdp, "r", "right", {{"u", 1.0}});
  absorb(mdp, "s1");
  absorb(mdp, "u");
  mdp.initial = {{0, 1.0}};

  EpisodicTask& task = f.task;
  task.mdp = std::move(mdp);
  task.terminal = {4, 5};
  task.horizon = 3;
  task.objectives.push_back(reach_objective("reach-waypoint", "s0", "m", 1));
  task.objectives.push_back(reach_objective("waypoint-to-goal", "m", "s1", 2));
  task.objectives.push_back(reach_objective("reach-goal", "s0", "s1", 3));
  // Goal first; ties fall through to componentwise comparison of the helper
  // objectives.
  task.order = PartialOrderSpec::lex_order({2});

  auto shared = std::make_shared<EpisodicTask>(task);
  f.claims.push_back({"via-waypoint-values", [shared] {
    Policy via(deterministic_policy(
        *shared, {{"s0", "left"}, {"m", "left"}, {"q", "left"}, {"r", "left"}}));
    auto values = evaluate_exact(*shared, via).values.values;
    bool ok = vector_close(values, {1.0, 1.0, 1.0}, 1e-12);
    return std::make_pair(ok, "waypoint route gives " + show_vector(values) +
                                  ", expected (1, 1, 1)");
  }});
  f.claims.push_back({"frontier", [shared] {
    FrontierResult result = frontier(*shared, PolicyClass::sd(*shared));
    bool ok = result.entries.size() == 16 && result.maximal_count() == 6;
    for (const auto& e : result.entries)
      ok = ok && (e.maximal == vector_close(e.values, {1.0, 1.0, 1.0}, 1e-9));
    return std::make_pair(ok, "16 plans, the 6 reaching the goal through the waypoint in time "
                              "are maximal");
  }});
  f.claims.push_back({"order-dominance", [shared] {
    std::vector<double> best = {1.0, 1.0, 1.0};
    std::vector<double> goal_only = {0.0, 0.0, 1.0};
    std::vector<double> waypoint_only = {1.0, 0.0, 0.0};
    bool ok = strictly_dominates(shared->order, best, goal_only) &&
              strictly_dominates(shared->order, best, waypoint_only);
    return std::make_pair(
        ok, "the full-success vector beats goal-only and waypoint-only vectors");
  }});
  return f;
}

inline GalleryFixture fig2a_fixture() {
  GalleryFixture f;
  f.name = "fig2a";
  Mdp mdp = gallery_mdp({"s0", "s1", "s2"}, {"a1", "a2"});
  set_row(mdp, "s0", "a1", {{"s1", 1.0}});
  set_row(mdp, "s0", "a2", {{"s2", 1.0}});
  absorb(mdp, "s1");
  absorb(mdp, "s2");
  mdp.initial = {{0, 1.0}};

  EpisodicTask& task = f.task;
  task.mdp = std::move(mdp);
  task.terminal = {1, 2};
  task.horizon = 1;
  task.objectives.push_back(reach_objective("to-s1", "s0", "s1", 1));
  task.objectives.push_back(reach_objective("to-s2", "s0", "s2", 1));
  task.order = PartialOrderSpec::product_order({{0, 1}});

  auto shared = std::make_shared<EpisodicTask>(task);
  f.claims.push_back({"uniform-values", [shared] {
    auto values = evaluate_exact(*shared, Policy(uniform_policy(*shared))).values.values;
    bool ok = vector_close(values, {0.5, 0.5}, 1e-12);
    return std::make_pair(ok, "coin-flip policy gives " + show_vector(values) +
                                  ", expected (0.5, 0.5)");
  }});
  f.claims.push_back({"uniform-dominates", [shared] {
    auto mixed = evaluate_exact(*shared, Policy(uniform_policy(*shared))).values.values;
    SdEnumeration sd(*shared);
    bool ok = sd.size() == 2;
    for (std::size_t i = 0; i < sd.size(); ++i) {
      auto pure = evaluate_exact(*shared, sd.at(i)).values.values;
      ok = ok && strictly_dominates(shared->order, mixed, pure);
    }
    return std::make_pair(ok, "the coin flip strictly beats both pure plans under the "
                              "product order");
  }});
  f.claims.push_back({"grid-frontier", [shared] {
    FrontierResult result = frontier(*shared, PolicyClass::sr_grid(*shared, 2));
    bool ok = result.entries.size() == 3 && result.maximal_count() == 1;
    for (const auto& e : result.entries)
      ok = ok && (e.maximal == vector_close(e.values, {0.5, 0.5}, 1e-9));
    return std::make_pair(ok, "on the half-step grid only the coin flip is maximal");
  }});
  return f;
}

inline GalleryFixture fig2b_fixture() {
  GalleryFixture f;
  f.name = "fig2b";
  Mdp mdp = gallery_mdp({"s0", "s1", "s2", "s3", "s4"}, {"a1", "a2"});
  set_row(mdp, "s0", "a1", {{"s1", 1.0}});
  set_row(mdp, "s0", "a2", {{"s2", 1.0}});
  set_row(mdp, "s3", "a1", {{"s0", 1.0}});
  set_row(mdp, "s3", "a2", {{"s0", 1.0}});
  set_row(mdp, "s4", "a1", {{"s0", 1.0}});
  set_row(mdp, "s4", "a2", {{"s0", 1.0}});
  absorb(mdp, "s1");
  absorb(mdp, "s2");
  mdp.initial = {{3, 0.5}, {4, 0.5}};

  EpisodicTask& task = f.task;
  task.mdp = std::move(mdp);
  task.terminal = {1, 2};
  task.horizon = 2;
  task.objectives.push_back(reach_objective("s3-to-s2", "s3", "s2", 2));
  task.objectives.push_back(reach_objective("s4-to-s1", "s4", "s1", 2));
  task.order = PartialOrderSpec::pareto_order();

  auto shared = std::make_shared<EpisodicTask>(task);
  auto cross_policy = [shared] {
    MemorySpec spec = initial_state_memory(*shared);
    FiniteMemoryPolicy fm;
    fm.memory = compile_memory(spec, shared->mdp);
    int S = shared->mdp.state_count();
    fm.rule.resize(static_cast<std::size_t>(fm.memory.size()) * S);
    auto set_rule = [&](const std::string& memory, const std::string& state,
                        const std::string& action) {
      int m = -1;
      for (std::size_t i = 0; i < fm.memory.names.size(); ++i)
        if (fm.memory.names[i] == memory) m = static_cast<int>(i);
      fm.rule[static_cast<std::size_t>(m) * S + *shared->mdp.state_index(state)] =
          ActionDist{{*shared->mdp.action_index(action), 1.0}};
    };
    for (const char* s : {"s3", "s4"}) {
      set_rule("start-s3", s, "a1");
      set_rule("start-s4", s, "a1");
    }
    set_rule("start-s3", "s0", "a2");
    set_rule("start-s4", "s0", "a1");
    return Policy(std::move(fm));
  };

  f.claims.push_back({"memory-policy-values", [shared, cross_policy] {
    auto values = evaluate_exact(*shared, cross_policy()).values.values;
    bool ok = vector_close(values, {0.5, 0.5}, 1e-12);
    return std::make_pair(ok, "remembering the start state gives " + show_vector(values) +
                                  ", expected (0.5, 0.5)");
  }});
  f.claims.push_back({"memory-dominates-grid", [shared, cross_policy] {
    auto memory_values = evaluate_exact(*shared, cross_policy()).values.values;
    SrGridEnumeration grid(*shared, 10);
    bool ok = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto values = evaluate_exact(*shared, grid.at(i)).values.values;
      ok = ok && strictly_dominates(shared->order, memory_values, values);
      ok = ok && close_to(values[0] + values[1], 0.5, 1e-9);
    }
    return std::make_pair(ok, "the memory policy strictly beats every stationary grid policy, "
                              "whose values trade off along one line");
  }});
  f.claims.push_back({"fm-class-count", [shared] {
    MemorySpec spec = initial_state_memory(*shared);
    spec.decision_states = std::vector<std::string>{"s0"};
    FmDetEnumeration fm(*shared, spec);
    bool ok = fm.size() == 4;
    return std::make_pair(ok, "two memories and one decision state give " +
                                  std::to_string(fm.size()) + " deterministic policies");
  }});
  return f;
}

}  // namespace detail

// Builds a fixture by name; unknown names raise std::invalid_argument.
inline GalleryFixture gallery(const std::string& name) {
  if (name == "investment") return detail::investment_fixture();
  if (name == "taxi") return detail::taxi_fixture();
  if (name == "maze") return detail::maze_fixture();
  if (name == "fig2a") return detail::fig2a_fixture();
  if (name == "fig2b") return detail::fig2b_fixture();
  throw std::invalid_argument("unknown gallery fixture '" + name + "'");
}

}  // namespace microrl
