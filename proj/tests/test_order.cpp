#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include <microrl/order.hpp>
#include <microrl/rng.hpp>

using namespace microrl;

namespace {

using Vec = std::vector<double>;

const Vec kA1 = {0.9, 0.1, 0.0, 0.0};
const Vec kA2 = {0.0, 0.0, 0.7, 0.3};

std::vector<Vec> random_vectors(std::uint64_t seed, int n, int k) {
  RandomStream rng(seed);
  std::vector<Vec> out;
  for (int i = 0; i < n; ++i) {
    Vec v(k);
    for (double& x : v) x = rng.unit();
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("componentwise order compares coordinate by coordinate") {
  PartialOrderSpec pareto = PartialOrderSpec::pareto_order();
  Vec lo = {0.1, 0.2}, hi = {0.3, 0.2}, cross = {0.4, 0.1};
  CHECK(leq(pareto, lo, hi));
  CHECK_FALSE(leq(pareto, hi, lo));
  CHECK_FALSE(leq(pareto, hi, cross));
  CHECK_FALSE(leq(pareto, cross, hi));
  CHECK(leq(pareto, lo, lo));
  CHECK(strictly_dominates(pareto, hi, lo));
  CHECK_FALSE(strictly_dominates(pareto, lo, lo));
  CHECK_FALSE(leq(pareto, kA1, kA2));
  CHECK_FALSE(leq(pareto, kA2, kA1));
}

TEST_CASE("priority order walks listed indices then compares the rest") {
  PartialOrderSpec order = PartialOrderSpec::lex_order({2});
  Vec best = {1, 1, 1}, goal_only = {0, 0, 1}, waypoint_only = {1, 0, 0};
  CHECK(leq(order, goal_only, best));
  CHECK(strictly_dominates(order, best, goal_only));
  CHECK(strictly_dominates(order, best, waypoint_only));
  // Primary decided: the tail does not matter.
  CHECK(leq(order, Vec{1, 1, 0}, Vec{0, 0, 1}));
  // Primary tied, tail incomparable: whole vectors incomparable.
  CHECK_FALSE(leq(order, Vec{1, 0, 1}, Vec{0, 1, 1}));
  CHECK_FALSE(leq(order, Vec{0, 1, 1}, Vec{1, 0, 1}));

  PartialOrderSpec full = PartialOrderSpec::lex_order({0, 1});
  CHECK(leq(full, Vec{0.4, 9.0}, Vec{0.5, 0.0}));
  CHECK(leq(full, Vec{0.5, 0.1}, Vec{0.5, 0.2}));
  CHECK_FALSE(leq(full, Vec{0.5, 0.2}, Vec{0.5, 0.1}));
}

TEST_CASE("weighted order is a total preorder with ties") {
  PartialOrderSpec weighted = PartialOrderSpec::weighted_order({10, -10, 20, -20});
  CHECK(leq(weighted, kA1, kA2));
  CHECK(leq(weighted, kA2, kA1));
  CHECK_FALSE(strictly_dominates(weighted, kA1, kA2));
  Vec better = {1.0, 0.0, 0.0, 0.0};
  CHECK(strictly_dominates(weighted, better, kA1));

  // Differences below tolerance count as ties in both directions.
  PartialOrderSpec w2 = PartialOrderSpec::weighted_order({1.0});
  CHECK(leq(w2, Vec{0.5}, Vec{0.5 + 1e-12}));
  CHECK(leq(w2, Vec{0.5 + 1e-12}, Vec{0.5}));
}

TEST_CASE("guarded order ranks violators below satisfiers, strictly") {
  PartialOrderSpec threshold = PartialOrderSpec::threshold_order(
      {ThresholdGuard{3, 0.15, true}}, PartialOrderSpec::weighted_order({10, -10, 20, -20}));
  CHECK(leq(threshold, kA2, kA1));
  CHECK_FALSE(leq(threshold, kA1, kA2));
  CHECK(strictly_dominates(threshold, kA1, kA2));

  // Sitting exactly on the bound violates the guard.
  PartialOrderSpec at_bound = PartialOrderSpec::threshold_order(
      {ThresholdGuard{3, 0.3, true}}, PartialOrderSpec::weighted_order({10, -10, 20, -20}));
  CHECK(strictly_dominates(at_bound, kA1, kA2));

  // Both satisfy: the fallback decides, here a weighted tie.
  PartialOrderSpec loose = PartialOrderSpec::threshold_order(
      {ThresholdGuard{3, 0.5, true}}, PartialOrderSpec::weighted_order({10, -10, 20, -20}));
  CHECK(leq(loose, kA1, kA2));
  CHECK(leq(loose, kA2, kA1));

  // Both violate: also the fallback.
  PartialOrderSpec tight = PartialOrderSpec::threshold_order(
      {ThresholdGuard{1, 0.05, true}, ThresholdGuard{3, 0.05, true}},
      PartialOrderSpec::weighted_order({10, -10, 20, -20}));
  CHECK(leq(tight, kA1, kA2));
  CHECK(leq(tight, kA2, kA1));

  // Lower bounds invert the test.
  PartialOrderSpec floor_guard = PartialOrderSpec::threshold_order(
      {ThresholdGuard{0, 0.5, false}}, PartialOrderSpec::pareto_order());
  CHECK(strictly_dominates(floor_guard, kA1, kA2));
}

TEST_CASE("every guard bound in the open interval keeps only the bounded plan") {
  for (double eps : {0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) {
    PartialOrderSpec order = PartialOrderSpec::threshold_order(
        {ThresholdGuard{3, eps, true}},
        PartialOrderSpec::weighted_order({10, -10, 20, -20}));
    auto maximal = maximal_elements(order, {kA1, kA2});
    INFO("eps = " << eps);
    REQUIRE(maximal == std::vector<std::size_t>{0});
  }
}

TEST_CASE("group-product order multiplies within groups before comparing") {
  PartialOrderSpec product = PartialOrderSpec::product_order({{0, 1}});
  Vec mixed = {0.5, 0.5}, pure1 = {1.0, 0.0}, pure2 = {0.0, 1.0};
  CHECK(strictly_dominates(product, mixed, pure1));
  CHECK(strictly_dominates(product, mixed, pure2));
  CHECK(leq(product, pure1, pure2));
  CHECK(leq(product, pure2, pure1));

  PartialOrderSpec split = PartialOrderSpec::product_order({{0}, {1}});
  CHECK_FALSE(leq(split, pure1, pure2));
  CHECK(leq(split, Vec{0.2, 0.3}, Vec{0.2, 0.4}));
}

TEST_CASE("maximal elements keep exactly the undominated vectors") {
  PartialOrderSpec pareto = PartialOrderSpec::pareto_order();
  std::vector<Vec> vectors = {{1, 0}, {0, 1}, {0.5, 0.5}, {0.2, 0.2}, {1, 0}};
  auto maximal = maximal_elements(pareto, vectors);
  CHECK(maximal == std::vector<std::size_t>{0, 1, 2, 4});

  CHECK(maximal_elements(pareto, {}).empty());
  CHECK(maximal_elements(pareto, {{0.0}}).size() == 1);
}

TEST_CASE("spec validation catches malformed orders") {
  CHECK_FALSE(order_spec_problem(PartialOrderSpec::pareto_order(), 3).has_value());
  CHECK(order_spec_problem(PartialOrderSpec::lex_order({3}), 3).has_value());
  CHECK(order_spec_problem(PartialOrderSpec::lex_order({0, 0}), 3).has_value());
  CHECK(order_spec_problem(PartialOrderSpec::weighted_order({1, 2}), 3).has_value());
  CHECK(order_spec_problem(
            PartialOrderSpec::weighted_order({1, std::numeric_limits<double>::infinity()}), 2)
            .has_value());
  CHECK(order_spec_problem(PartialOrderSpec::threshold_order(
                               {ThresholdGuard{5, 0.1, true}}, PartialOrderSpec::pareto_order()),
                           3)
            .has_value());
  CHECK(order_spec_problem(
            PartialOrderSpec::threshold_order(
                {ThresholdGuard{0, 0.1, true}, ThresholdGuard{0, 0.2, false}},
                PartialOrderSpec::pareto_order()),
            3)
            .has_value());
  PartialOrderSpec no_fallback = PartialOrderSpec::threshold_order(
      {ThresholdGuard{0, 0.1, true}}, PartialOrderSpec::pareto_order());
  no_fallback.fallback = nullptr;
  CHECK(order_spec_problem(no_fallback, 3).has_value());
  CHECK(order_spec_problem(PartialOrderSpec::product_order({}), 3).has_value());
  CHECK(order_spec_problem(PartialOrderSpec::product_order({{}}), 3).has_value());
  CHECK(order_spec_problem(PartialOrderSpec::product_order({{7}}), 3).has_value());
  // Nested fallback problems surface too.
  CHECK(order_spec_problem(
            PartialOrderSpec::threshold_order({ThresholdGuard{0, 0.1, true}},
                                              PartialOrderSpec::weighted_order({1})),
            3)
            .has_value());
}

TEST_CASE("all order kinds are reflexive and transitive on random samples") {
  std::vector<PartialOrderSpec> orders = {
      PartialOrderSpec::pareto_order(),
      PartialOrderSpec::lex_order({2}),
      PartialOrderSpec::weighted_order({10, -10, 20, -20}),
      PartialOrderSpec::threshold_order({ThresholdGuard{3, 0.15, true}},
                                        PartialOrderSpec::weighted_order({10, -10, 20, -20})),
      PartialOrderSpec::product_order({{0, 1}, {2, 3}}),
  };
  for (std::size_t which = 0; which < orders.size(); ++which) {
    auto vectors = random_vectors(1000 + which, 30, 4);
    OrderAxiomReport report = check_order_axioms(orders[which], vectors);
    INFO("order " << which << ": " << (report.notes.empty() ? "" : report.notes[0]));
    CHECK(report.reflexive);
    CHECK(report.transitive);
  }
}

TEST_CASE("weighted ties downgrade the relation to a preorder") {
  PartialOrderSpec weighted = PartialOrderSpec::weighted_order({10, -10, 20, -20});
  OrderAxiomReport report = check_order_axioms(weighted, {kA1, kA2});
  CHECK(report.reflexive);
  CHECK(report.transitive);
  CHECK_FALSE(report.antisymmetric);
  CHECK(report.classification() == "preorder only");
  REQUIRE_FALSE(report.notes.empty());

  OrderAxiomReport clean = check_order_axioms(PartialOrderSpec::pareto_order(), {kA1, kA2});
  CHECK(clean.classification() == "partial order");
}
