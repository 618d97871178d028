#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <microrl/frontier.hpp>
#include <microrl/gallery.hpp>

using namespace microrl;

TEST_CASE("policy classes report sizes and labels") {
  EpisodicTask taxi = gallery("taxi").task;
  PolicyClass sd = PolicyClass::sd(taxi);
  CHECK(sd.class_label() == "SD");
  CHECK(sd.size() == 16);
  CHECK(sd.label(0) == "s0=go;r1=go;p=go;r2=go");

  PolicyClass grid = PolicyClass::sr_grid(gallery("fig2a").task, 2);
  CHECK(grid.class_label() == "SR-grid(2)");
  CHECK(grid.size() == 3);

  EpisodicTask fig2b = gallery("fig2b").task;
  MemorySpec spec = initial_state_memory(fig2b);
  spec.decision_states = std::vector<std::string>{"s0"};
  PolicyClass fm = PolicyClass::fm_det(fig2b, spec, "initial-state");
  CHECK(fm.class_label() == "FM-det(initial-state)");
  CHECK(fm.size() == 4);
  CHECK(fm.label(0).find("s0=") != std::string::npos);
}

TEST_CASE("frontier search flags exactly the undominated policies") {
  EpisodicTask taxi = gallery("taxi").task;
  FrontierResult result = frontier(taxi, PolicyClass::sd(taxi));
  REQUIRE(result.entries.size() == 16);
  CHECK(result.maximal_count() == 4);
  for (const auto& entry : result.entries) {
    bool full = entry.values[0] == 1.0 && entry.values[1] == 1.0;
    CHECK(entry.maximal == full);
  }

  EpisodicTask maze = gallery("maze").task;
  FrontierResult maze_result = frontier(maze, PolicyClass::sd(maze));
  REQUIRE(maze_result.entries.size() == 16);
  CHECK(maze_result.maximal_count() == 6);

  EpisodicTask fig2a = gallery("fig2a").task;
  FrontierResult grid = frontier(fig2a, PolicyClass::sr_grid(fig2a, 2));
  REQUIRE(grid.entries.size() == 3);
  CHECK(grid.maximal_count() == 1);
  for (const auto& entry : grid.entries)
    CHECK(entry.maximal == (entry.values[0] == 0.5 && entry.values[1] == 0.5));
}

TEST_CASE("frontier CSV is stable, headered, and machine readable") {
  EpisodicTask fig2a = gallery("fig2a").task;
  FrontierResult result = frontier(fig2a, PolicyClass::sr_grid(fig2a, 2));
  std::string csv = frontier_csv(result);
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "policy_id,v_1,v_2,maximal");
  REQUIRE(std::getline(lines, line));
  CHECK(line == "s0=a2:1,0,1,0");
  REQUIRE(std::getline(lines, line));
  CHECK(line == "s0=a1:0.5|a2:0.5,0.5,0.5,1");
  REQUIRE(std::getline(lines, line));
  CHECK(line == "s0=a1:1,1,0,0");
  CHECK_FALSE(std::getline(lines, line));

  CHECK(frontier_csv(result) == csv);
}

TEST_CASE("frontier respects the aggregation mode") {
  // Under reactivation the ratio and episode-mean orderings can disagree;
  // here they at least produce different numbers.
  EpisodicTask task;
  task.mdp.states = {"s0", "win", "loop", "end"};
  task.mdp.actions = {"risky", "safe"};
  task.mdp.transitions = empty_transitions(4, 2);
  task.mdp.transitions[0][0] = StateDist{{1, 0.5}, {2, 0.5}};
  task.mdp.transitions[0][1] = StateDist{{3, 1.0}};
  task.mdp.transitions[1][0] = task.mdp.transitions[1][1] = StateDist{{1, 1.0}};
  task.mdp.transitions[2][0] = task.mdp.transitions[2][1] = StateDist{{3, 1.0}};
  task.mdp.transitions[3][0] = task.mdp.transitions[3][1] = StateDist{{3, 1.0}};
  task.mdp.initial = {{0, 1.0}};
  task.terminal = {1, 3};
  task.horizon = 3;
  MicroObjective obj;
  obj.name = "reach-win";
  obj.initiation = StateSetSpec{{"s0", "loop"}};
  obj.termination = StateSetSpec{{"win"}};
  obj.horizon = 1;
  task.objectives.push_back(obj);
  task.order = PartialOrderSpec::pareto_order();

  FrontierResult mean =
      frontier(task, PolicyClass::sd(task), AggregationMode::episode_mean_zero_default);
  FrontierResult ratio =
      frontier(task, PolicyClass::sd(task), AggregationMode::ratio_of_expectations);
  CHECK(mean.mode == AggregationMode::episode_mean_zero_default);
  CHECK(ratio.mode == AggregationMode::ratio_of_expectations);
  // The risky plan activates twice on the failing branch.
  bool found_difference = false;
  for (std::size_t i = 0; i < mean.entries.size(); ++i)
    found_difference =
        found_difference || mean.entries[i].values != ratio.entries[i].values;
  CHECK(found_difference);
}

TEST_CASE("the memory class beats every stationary grid policy on fig2b") {
  EpisodicTask fig2b = gallery("fig2b").task;
  MemorySpec spec = initial_state_memory(fig2b);
  spec.decision_states = std::vector<std::string>{"s0"};
  FrontierResult fm = frontier(fig2b, PolicyClass::fm_det(fig2b, spec, "initial-state"));
  REQUIRE(fm.entries.size() == 4);

  std::vector<double> best = {0.5, 0.5};
  bool cross_found = false;
  for (const auto& entry : fm.entries)
    cross_found = cross_found || entry.values == best;
  CHECK(cross_found);

  FrontierResult grid = frontier(fig2b, PolicyClass::sr_grid(fig2b, 10));
  for (const auto& entry : grid.entries)
    CHECK(strictly_dominates(fig2b.order, best, entry.values));
}

TEST_CASE("policy ids in the result match the class labels") {
  EpisodicTask taxi = gallery("taxi").task;
  PolicyClass sd = PolicyClass::sd(taxi);
  FrontierResult result = frontier(taxi, sd);
  for (std::size_t i = 0; i < result.entries.size(); ++i)
    CHECK(result.entries[i].policy_id == sd.label(i));
}
