#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "policy.hpp"
#include "rng.hpp"

namespace microrl {

// Upper bound on the augmented state space one exact evaluation may visit.
inline constexpr std::size_t kDefaultExactStateCap = 10000000;

// Per-objective expected returns under one aggregation mode. Conditional
// mode marks objectives that can never activate with NaN.
struct ValueVector {
  std::vector<double> values;
  AggregationMode mode = AggregationMode::episode_mean_zero_default;
};

// Exact per-objective distribution over episode outcomes
// (successes, activations) -> probability. Not produced in ratio mode, which
// tracks expectations directly.
struct OutcomeDistribution {
  std::vector<std::map<std::pair<int, int>, double>> per_objective;
};

struct ExactResult {
  ValueVector values;
  OutcomeDistribution outcomes;
  // Per objective (expected successes, expected activations); the carrier
  // for ratio mode, filled for every mode.
  std::vector<std::pair<double, double>> expected_counts;
};

struct McEstimate {
  ValueVector values;
  std::vector<double> standard_errors;
  std::size_t episodes = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Mixed-radix packing of the augmented DP state
// (env state, memory, phi state, psi state, active, timer, successes,
// activations) into one 64-bit key. Keys sort like tuples, so std::map
// iteration is deterministic.
struct AugmentedCoder {
  std::array<std::uint64_t, 8> radix{};

  std::uint64_t size_checked(std::size_t cap, const std::string& what) const {
    std::uint64_t n = 1;
    for (std::uint64_t r : radix) {
      if (n > cap / r)
        throw CapacityError(what + ": augmented state space exceeds cap of " +
                            std::to_string(cap) + " states; use evaluate_mc instead");
      n *= r;
    }
    return n;
  }

  std::uint64_t encode(std::array<std::uint64_t, 8> v) const {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < 8; ++i) key = key * radix[i] + v[i];
    return key;
  }

  std::array<std::uint64_t, 8> decode(std::uint64_t key) const {
    std::array<std::uint64_t, 8> v{};
    for (std::size_t i = 8; i-- > 0;) {
      v[i] = key % radix[i];
      key /= radix[i];
    }
    return v;
  }
};

struct ObjectiveEvaluation {
  std::map<std::pair<int, int>, double> outcomes;  // mean modes
  double expected_successes = 0.0;
  double expected_activations = 0.0;
};

// Forward DP for one objective: propagate probability mass over augmented
// states step by step, settling episode mass into outcome accumulators when
// the episode ends.
inline ObjectiveEvaluation evaluate_objective(const EpisodicTask& task,
                                              const CompiledObjective& obj,
                                              const Policy& policy, AggregationMode mode,
                                              std::size_t state_cap) {
  const Mdp& mdp = task.mdp;
  const int T = task.horizon;
  const bool counters = mode != AggregationMode::ratio_of_expectations;
  AugmentedCoder coder;
  coder.radix = {static_cast<std::uint64_t>(mdp.state_count()),
                 static_cast<std::uint64_t>(policy.memory_count()),
                 static_cast<std::uint64_t>(obj.initiation.state_count()),
                 static_cast<std::uint64_t>(obj.termination.state_count()),
                 2,
                 static_cast<std::uint64_t>(obj.horizon),
                 static_cast<std::uint64_t>(counters ? T + 1 : 1),
                 static_cast<std::uint64_t>(counters ? T + 1 : 1)};
  coder.size_checked(state_cap, "objective '" + obj.name + "'");

  ObjectiveEvaluation result;
  auto settle = [&](const ObjectiveStatus& st, double w) {
    if (counters)
      result.outcomes[{st.successes, st.activations}] += w;
  };
  auto emit = [&](int value, double w) {
    result.expected_activations += w;
    result.expected_successes += w * value;
  };

  std::map<std::uint64_t, double> dist;
  for (const auto& [s0, p0] : mdp.initial) {
    if (p0 <= 0.0) continue;
    bool over = task.is_terminal(s0);
    ObjectiveStatus st = initial_status(obj, s0, over);
    if (st.activations > 0 && !counters) st.activations = 0;  // tracked via emit
    int m = policy.advance_memory(policy.initial_memory(), initial_token(s0));
    if (over) {
      settle(st, p0);
      continue;
    }
    dist[coder.encode({static_cast<std::uint64_t>(s0), static_cast<std::uint64_t>(m),
                       static_cast<std::uint64_t>(st.phi_state),
                       static_cast<std::uint64_t>(st.psi_state), st.active ? 1u : 0u,
                       static_cast<std::uint64_t>(st.timer),
                       static_cast<std::uint64_t>(st.successes),
                       static_cast<std::uint64_t>(st.activations)})] += p0;
  }

  for (int t = 0; t < T && !dist.empty(); ++t) {
    std::map<std::uint64_t, double> next;
    for (const auto& [key, w] : dist) {
      auto v = coder.decode(key);
      StateId s = static_cast<StateId>(v[0]);
      int m = static_cast<int>(v[1]);
      const ActionDist* actions = policy.dist(m, s);
      if (!actions || actions->empty())
        throw std::invalid_argument("evaluate_exact: policy does not cover state '" +
                                    mdp.states[s] + "'");
      for (const auto& [a, pa] : *actions) {
        if (pa <= 0.0) continue;
        if (a < 0 || a >= mdp.action_count())
          throw std::invalid_argument("evaluate_exact: policy action index out of range");
        const auto& outcome_row = mdp.transitions[s][a];
        if (!outcome_row)
          throw std::invalid_argument("evaluate_exact: missing transition row for state '" +
                                      mdp.states[s] + "'");
        for (const auto& [s2, ps2] : *outcome_row) {
          if (ps2 <= 0.0) continue;
          double w2 = w * pa * ps2;
          bool over = task.is_terminal(s2) || t + 1 >= T;
          ObjectiveStatus st;
          st.active = v[4] != 0;
          st.timer = static_cast<int>(v[5]);
          st.phi_state = static_cast<int>(v[2]);
          st.psi_state = static_cast<int>(v[3]);
          st.successes = static_cast<int>(v[6]);
          st.activations = static_cast<int>(v[7]);
          int settled = step_objective(obj, st, step_token(a, s2), over);
          if (!counters) {
            if (settled >= 0) emit(settled, w2);
            st.successes = 0;
            st.activations = 0;
          }
          int m2 = policy.advance_memory(m, step_token(a, s2));
          if (over) {
            settle(st, w2);
          } else {
            next[coder.encode({static_cast<std::uint64_t>(s2),
                               static_cast<std::uint64_t>(m2),
                               static_cast<std::uint64_t>(st.phi_state),
                               static_cast<std::uint64_t>(st.psi_state), st.active ? 1u : 0u,
                               static_cast<std::uint64_t>(st.timer),
                               static_cast<std::uint64_t>(st.successes),
                               static_cast<std::uint64_t>(st.activations)})] += w2;
          }
        }
      }
    }
    dist = std::move(next);
  }

  if (counters) {
    for (const auto& [sa, p] : result.outcomes) {
      result.expected_successes += p * sa.first;
      result.expected_activations += p * sa.second;
    }
  }
  return result;
}

}  // namespace detail

// Exact value vector by per-objective forward dynamic programming over
// augmented states. Mean modes also deliver the full outcome distribution;
// ratio mode tracks the two expectations it needs and leaves the
// distributions empty.
inline ExactResult evaluate_exact(const EpisodicTask& task, const Policy& policy,
                                  AggregationMode mode = AggregationMode::episode_mean_zero_default,
                                  std::size_t state_cap = kDefaultExactStateCap) {
  auto objectives = compile_objectives(task);
  ExactResult result;
  result.values.mode = mode;
  result.outcomes.per_objective.resize(objectives.size());
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    auto eval = detail::evaluate_objective(task, objectives[i], policy, mode, state_cap);
    double value = 0.0;
    switch (mode) {
      case AggregationMode::episode_mean_zero_default: {
        for (const auto& [sa, p] : eval.outcomes)
          if (sa.second > 0) value += p * (static_cast<double>(sa.first) / sa.second);
        break;
      }
      case AggregationMode::episode_mean_conditional: {
        double mass = 0.0;
        for (const auto& [sa, p] : eval.outcomes)
          if (sa.second > 0) {
            value += p * (static_cast<double>(sa.first) / sa.second);
            mass += p;
          }
        value = mass > 0.0 ? value / mass : std::numeric_limits<double>::quiet_NaN();
        break;
      }
      case AggregationMode::ratio_of_expectations: {
        value = eval.expected_activations > 0.0
                    ? eval.expected_successes / eval.expected_activations
                    : 0.0;
        break;
      }
    }
    result.values.values.push_back(value);
    result.outcomes.per_objective[i] = std::move(eval.outcomes);
    result.expected_counts.push_back({eval.expected_successes, eval.expected_activations});
  }
  return result;
}

// Runs one full episode under the policy, sampling the start state, actions,
// and transitions from `rng` in a fixed draw order.
inline EpisodeTrace run_episode(const EpisodicTask& task,
                                const std::vector<CompiledObjective>& objectives,
                                const Policy& policy, RandomStream& rng) {
  StateId s0 = sample_categorical<RandomStream, StateId>(
      rng, {task.mdp.initial.data(), task.mdp.initial.size()});
  EpisodeRecorder rec(task, objectives, s0);
  int memory = policy.advance_memory(policy.initial_memory(), initial_token(s0));
  while (rec.running()) {
    ActionId a = act(policy, memory, rec.state(), rng).action;
    const auto& row = task.mdp.transitions[rec.state()][a];
    if (!row)
      throw std::invalid_argument("run_episode: missing transition row for state '" +
                                  task.mdp.states[rec.state()] + "'");
    StateId next = sample_categorical<RandomStream, StateId>(rng, {row->data(), row->size()});
    rec.step(a, next);
    memory = policy.advance_memory(memory, step_token(a, next));
  }
  return rec.trace();
}

// Seeded Monte Carlo estimate. Episode i draws from an independent substream
// of the master seed, so results are reproducible and independent of episode
// count. Standard errors: sample standard deviation of episode contributions
// over sqrt(n); ratio mode uses the delta method for E[succ]/E[act].
inline McEstimate evaluate_mc(const EpisodicTask& task, const Policy& policy,
                              std::size_t episodes, std::uint64_t seed,
                              AggregationMode mode = AggregationMode::episode_mean_zero_default) {
  if (episodes < 1) throw std::invalid_argument("evaluate_mc: needs at least one episode");
  auto objectives = compile_objectives(task);
  const std::size_t k = objectives.size();
  std::vector<double> sum(k, 0.0), sum_sq(k, 0.0);
  std::vector<std::size_t> defined(k, 0);
  std::vector<double> succ_sum(k, 0.0), act_sum(k, 0.0), succ_sq(k, 0.0), act_sq(k, 0.0),
      cross(k, 0.0);

  for (std::size_t e = 0; e < episodes; ++e) {
    RandomStream rng = RandomStream::substream(seed, e);
    EpisodeTrace trace = run_episode(task, objectives, policy, rng);
    for (std::size_t i = 0; i < k; ++i) {
      EpisodeContribution c =
          episode_value_contribution(trace, static_cast<int>(i), mode);
      if (mode == AggregationMode::episode_mean_conditional) {
        if (c.defined) {
          defined[i] += 1;
          sum[i] += c.value;
          sum_sq[i] += c.value * c.value;
        }
      } else {
        sum[i] += c.value;
        sum_sq[i] += c.value * c.value;
      }
      succ_sum[i] += c.successes;
      act_sum[i] += c.activations;
      succ_sq[i] += static_cast<double>(c.successes) * c.successes;
      act_sq[i] += static_cast<double>(c.activations) * c.activations;
      cross[i] += static_cast<double>(c.successes) * c.activations;
    }
  }

  auto mean_se = [](double s, double sq, std::size_t n) -> std::pair<double, double> {
    double mean = s / n;
    if (n < 2) return {mean, 0.0};
    double var = (sq - n * mean * mean) / (n - 1);
    if (var < 0.0) var = 0.0;
    return {mean, std::sqrt(var / n)};
  };

  McEstimate est;
  est.values.mode = mode;
  est.episodes = episodes;
  est.seed = seed;
  for (std::size_t i = 0; i < k; ++i) {
    switch (mode) {
      case AggregationMode::episode_mean_zero_default: {
        auto [mean, se] = mean_se(sum[i], sum_sq[i], episodes);
        est.values.values.push_back(mean);
        est.standard_errors.push_back(se);
        break;
      }
      case AggregationMode::episode_mean_conditional: {
        if (defined[i] == 0) {
          est.values.values.push_back(std::numeric_limits<double>::quiet_NaN());
          est.standard_errors.push_back(0.0);
        } else {
          auto [mean, se] = mean_se(sum[i], sum_sq[i], defined[i]);
          est.values.values.push_back(mean);
          est.standard_errors.push_back(se);
        }
        break;
      }
      case AggregationMode::ratio_of_expectations: {
        double n = static_cast<double>(episodes);
        double mean_x = succ_sum[i] / n, mean_y = act_sum[i] / n;
        if (mean_y <= 0.0) {
          est.values.values.push_back(0.0);
          est.standard_errors.push_back(0.0);
          break;
        }
        double ratio = mean_x / mean_y;
        double se = 0.0;
        if (episodes >= 2) {
          double var_x = (succ_sq[i] - n * mean_x * mean_x) / (n - 1);
          double var_y = (act_sq[i] - n * mean_y * mean_y) / (n - 1);
          double cov = (cross[i] - n * mean_x * mean_y) / (n - 1);
          double var_r = (var_x - 2 * ratio * cov + ratio * ratio * var_y) /
                         (mean_y * mean_y * n);
          if (var_r < 0.0) var_r = 0.0;
          se = std::sqrt(var_r);
        }
        est.values.values.push_back(ratio);
        est.standard_errors.push_back(se);
        break;
      }
    }
  }
  return est;
}

// Weighted sum of value components; the reconstruction step of the
// discounted-objective expansion.
inline double reconstruct_scalar(const ValueVector& values, std::span<const double> weights) {
  if (values.values.size() != weights.size())
    throw std::invalid_argument("reconstruct_scalar: " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(values.values.size()) +
                                " values");
  double out = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) out += weights[i] * values.values[i];
  return out;
}

}  // namespace microrl
