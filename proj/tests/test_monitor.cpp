#include <catch2/catch_amalgamated.hpp>

#include <microrl/monitor.hpp>

#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace microrl;

namespace {

Mdp grid_mdp() {
  Mdp mdp;
  mdp.states = {"s0", "s1", "s2"};
  mdp.actions = {"a0", "a1"};
  mdp.transitions = empty_transitions(3, 2);
  for (StateId s = 0; s < 3; ++s)
    for (ActionId a = 0; a < 2; ++a) mdp.transitions[s][a] = StateDist{{s, 1.0}};
  mdp.initial = {{0, 1.0}};
  return mdp;
}

// Advances the compiled monitor over the history and returns acceptance.
bool run_compiled(const HistoryMonitor& monitor, const std::vector<Token>& history) {
  int q = monitor.start;
  for (const Token& t : history) q = advance(monitor, q, t);
  return is_accepting(monitor, q);
}

}  // namespace

TEST_CASE("state set monitor accepts exactly on listed states") {
  Mdp mdp = grid_mdp();
  HistoryMonitor m = compile(StateSetSpec{{"s1"}}, mdp, 4);
  CHECK(run_compiled(m, {initial_token(1)}));
  CHECK_FALSE(run_compiled(m, {initial_token(0)}));
  CHECK(run_compiled(m, {initial_token(0), step_token(0, 1)}));
  CHECK_FALSE(run_compiled(m, {initial_token(0), step_token(0, 1), step_token(1, 2)}));
}

TEST_CASE("state-action set monitor accepts on the step out of the state") {
  Mdp mdp = grid_mdp();
  HistoryMonitor m = compile(StateActionSetSpec{{{"s0", "a1"}}}, mdp, 4);
  CHECK_FALSE(run_compiled(m, {initial_token(0)}));
  CHECK(run_compiled(m, {initial_token(0), step_token(1, 2)}));
  CHECK_FALSE(run_compiled(m, {initial_token(0), step_token(0, 2)}));
  CHECK_FALSE(run_compiled(m, {initial_token(1), step_token(1, 2)}));
  CHECK_FALSE(
      run_compiled(m, {initial_token(0), step_token(1, 2), step_token(1, 0)}));
  CHECK(run_compiled(
      m, {initial_token(0), step_token(0, 0), step_token(1, 1)}));
}

TEST_CASE("timed state set monitor gates acceptance by step count") {
  Mdp mdp = grid_mdp();
  HistoryMonitor m = compile(TimedStateSetSpec{{"s0", "s1"}, {0, 2}}, mdp, 4);
  CHECK(run_compiled(m, {initial_token(0)}));
  CHECK_FALSE(run_compiled(m, {initial_token(2)}));
  CHECK_FALSE(run_compiled(m, {initial_token(0), step_token(0, 1)}));
  CHECK(run_compiled(m, {initial_token(0), step_token(0, 1), step_token(0, 1)}));
  CHECK_FALSE(run_compiled(
      m, {initial_token(0), step_token(0, 1), step_token(0, 1), step_token(0, 1)}));
}

TEST_CASE("timed state set counter saturates past the horizon") {
  Mdp mdp = grid_mdp();
  HistoryMonitor m = compile(TimedStateSetSpec{{"s0"}, {2}}, mdp, 3);
  std::vector<Token> history = {initial_token(0)};
  for (int i = 0; i < 10; ++i) history.push_back(step_token(0, 0));
  CHECK_FALSE(run_compiled(m, history));

  HistoryMonitor late = compile(TimedStateSetSpec{{"s0"}, {7}}, mdp, 3);
  std::vector<Token> prefix = {initial_token(0)};
  for (int i = 0; i < 7; ++i) {
    prefix.push_back(step_token(0, 0));
    CHECK_FALSE(run_compiled(late, prefix));
  }
}

TEST_CASE("timed state set rejects negative times") {
  Mdp mdp = grid_mdp();
  CHECK_THROWS_AS(compile(TimedStateSetSpec{{"s0"}, {-1}}, mdp, 3), std::invalid_argument);
}

TEST_CASE("rule-list monitor applies the first matching rule") {
  Mdp mdp = grid_mdp();
  DfaSpec spec;
  spec.states = {"wait", "seen"};
  spec.start = "wait";
  spec.accepting = {"seen"};
  StepRule to_seen;
  to_seen.state = "s1";
  to_seen.to = "seen";
  StepRule stay_wait;
  stay_wait.to = "wait";
  StepRule stay_seen;
  stay_seen.to = "seen";
  spec.table["wait"] = {to_seen, stay_wait};
  spec.table["seen"] = {stay_seen};
  HistoryMonitor m = compile(spec, mdp, 4);
  CHECK_FALSE(run_compiled(m, {initial_token(0)}));
  CHECK(run_compiled(m, {initial_token(1)}));
  CHECK(run_compiled(m, {initial_token(0), step_token(0, 1), step_token(0, 2)}));
}

TEST_CASE("rule lists must cover every token") {
  Mdp mdp = grid_mdp();
  DfaSpec spec;
  spec.states = {"only"};
  spec.start = "only";
  spec.accepting = {};
  StepRule partial;
  partial.state = "s1";
  partial.to = "only";
  spec.table["only"] = {partial};
  CHECK_THROWS_WITH(compile(spec, mdp, 4),
                    Catch::Matchers::ContainsSubstring("catch-all"));
}

TEST_CASE("rule-list compilation validates names") {
  Mdp mdp = grid_mdp();
  DfaSpec spec;
  spec.states = {"q"};
  spec.start = "q";
  StepRule rule;
  rule.to = "q";

  SECTION("unknown start state") {
    spec.table["q"] = {rule};
    spec.start = "nope";
    CHECK_THROWS_AS(compile(spec, mdp, 4), std::invalid_argument);
  }
  SECTION("unknown accepting state") {
    spec.table["q"] = {rule};
    spec.accepting = {"nope"};
    CHECK_THROWS_AS(compile(spec, mdp, 4), std::invalid_argument);
  }
  SECTION("unknown target in a rule") {
    StepRule bad;
    bad.to = "nope";
    spec.table["q"] = {bad};
    CHECK_THROWS_AS(compile(spec, mdp, 4), std::invalid_argument);
  }
  SECTION("unknown environment state in a rule") {
    StepRule bad;
    bad.state = "ghost";
    bad.to = "q";
    spec.table["q"] = {bad, rule};
    CHECK_THROWS_AS(compile(spec, mdp, 4), std::invalid_argument);
  }
  SECTION("unknown action in a rule") {
    StepRule bad;
    bad.action = "ghost";
    bad.to = "q";
    spec.table["q"] = {bad, rule};
    CHECK_THROWS_AS(compile(spec, mdp, 4), std::invalid_argument);
  }
}

TEST_CASE("compiled monitors agree with direct history evaluation") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomStream rng(seed);
    testgen::TaskShape shape;
    EpisodicTask task = testgen::random_task(rng, shape);
    const Mdp& mdp = task.mdp;
    for (const auto& obj : task.objectives) {
      for (const MonitorSpec* spec : {&obj.initiation, &obj.termination}) {
        HistoryMonitor compiled = compile(*spec, mdp, task.horizon);
        for (int walk = 0; walk < 20; ++walk) {
          std::vector<Token> history = {
              initial_token(testgen::pick(rng, 0, mdp.state_count() - 1))};
          int q = compiled.start;
          q = advance(compiled, q, history.back());
          REQUIRE(is_accepting(compiled, q) == oracle::accepts(*spec, mdp, history));
          for (int len = 0; len < task.horizon; ++len) {
            history.push_back(step_token(testgen::pick(rng, 0, mdp.action_count() - 1),
                                         testgen::pick(rng, 0, mdp.state_count() - 1)));
            q = advance(compiled, q, history.back());
            REQUIRE(is_accepting(compiled, q) == oracle::accepts(*spec, mdp, history));
          }
        }
      }
    }
  }
}
