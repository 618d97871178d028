#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gallery.hpp"
#include "json_io.hpp"

namespace microrl {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing file '" + path + "'");
}

inline const char* mode_name(AggregationMode mode) {
  switch (mode) {
    case AggregationMode::episode_mean_zero_default: return "episode_mean_zero_default";
    case AggregationMode::episode_mean_conditional: return "episode_mean_conditional";
    case AggregationMode::ratio_of_expectations: return "ratio_of_expectations";
  }
  return "episode_mean_zero_default";
}

inline AggregationMode parse_mode(const std::string& name) {
  if (name == "episode_mean_zero_default") return AggregationMode::episode_mean_zero_default;
  if (name == "episode_mean_conditional") return AggregationMode::episode_mean_conditional;
  if (name == "ratio_of_expectations") return AggregationMode::ratio_of_expectations;
  throw std::invalid_argument("unknown aggregation mode '" + name + "'");
}

inline const char* order_kind_name(const PartialOrderSpec& spec) {
  switch (spec.kind) {
    case PartialOrderSpec::Kind::pareto: return "pareto";
    case PartialOrderSpec::Kind::lex: return "lex";
    case PartialOrderSpec::Kind::weighted: return "weighted";
    case PartialOrderSpec::Kind::threshold: return "threshold";
    case PartialOrderSpec::Kind::product: return "product";
  }
  return "pareto";
}

// Class specs: "sd", "sr-grid:R" with integer resolution R >= 1,
// "fm:initial-state" for the built-in start-state memory, or "fm:@FILE" for a
// memory spec document.
inline PolicyClass parse_class_spec(const EpisodicTask& task, const std::string& spec) {
  if (spec == "sd") return PolicyClass::sd(task);
  if (spec.rfind("sr-grid:", 0) == 0) {
    const std::string arg = spec.substr(8);
    std::size_t used = 0;
    int resolution = 0;
    try {
      resolution = std::stoi(arg, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad grid resolution in class spec '" + spec + "'");
    }
    if (used != arg.size() || resolution < 1)
      throw std::invalid_argument("bad grid resolution in class spec '" + spec + "'");
    return PolicyClass::sr_grid(task, resolution);
  }
  if (spec.rfind("fm:", 0) == 0) {
    const std::string arg = spec.substr(3);
    if (arg == "initial-state")
      return PolicyClass::fm_det(task, initial_state_memory(task), "initial-state");
    if (!arg.empty() && arg[0] == '@') {
      const std::string path = arg.substr(1);
      Json j = parse_text(read_file(path), "memory spec document");
      return PolicyClass::fm_det(task, memory_spec_from_json(j), arg);
    }
    throw std::invalid_argument("bad memory spec '" + spec +
                                "': expected fm:initial-state or fm:@FILE");
  }
  throw std::invalid_argument("unknown policy class '" + spec +
                              "': expected sd, sr-grid:R, or fm:SPEC");
}

// JSON has no NaN; undefined conditional values are emitted as null.
inline Json finite_or_null(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

inline std::string format_mean(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace detail

// Entry point behind the command-line tool. Returns the process exit code:
// 0 on success, 1 when a requested check fails or a computation exceeds its
// capacity, 2 on usage, parse, or validation errors.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"micro-objective task toolkit"};
  app.require_subcommand(1);

  std::string task_path, policy_path, method, class_spec, out_path, weights_path;
  std::string mdp_path, rewards_path, reduce_mode, fixture_name;
  std::string mode_name = "episode_mean_zero_default";
  std::size_t episodes = 10000;
  std::uint64_t seed = 0;
  int samples = 100;
  bool run_claims = false;
  bool dump_traces = false;
  int rc = 0;

  const std::vector<std::string> mode_names = {
      "episode_mean_zero_default", "episode_mean_conditional", "ratio_of_expectations"};

  auto load_task_file = [&](const std::string& path) {
    return load_task(detail::read_file(path));
  };

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a policy's value vector");
  eval_cmd->add_option("--task", task_path, "task document")->required();
  eval_cmd->add_option("--policy", policy_path, "policy document")->required();
  eval_cmd->add_option("--method", method, "exact or mc")
      ->required()
      ->check(CLI::IsMember({"exact", "mc"}));
  eval_cmd->add_option("--episodes", episodes, "episode count for mc");
  eval_cmd->add_option("--seed", seed, "master seed for mc");
  eval_cmd->add_option("--mode", mode_name, "aggregation mode")
      ->check(CLI::IsMember(mode_names));
  eval_cmd->callback([&] {
    EpisodicTask task = load_task_file(task_path);
    Policy policy = load_policy(detail::read_file(policy_path), task.mdp);
    AggregationMode mode = detail::parse_mode(mode_name);
    Json report = Json::object();
    report["mode"] = detail::mode_name(mode);
    Json objectives = Json::array();
    if (method == "exact") {
      report["method"] = "exact";
      ExactResult result = evaluate_exact(task, policy, mode);
      for (std::size_t i = 0; i < task.objectives.size(); ++i) {
        Json obj = Json::object();
        obj["name"] = task.objectives[i].name;
        obj["value"] = detail::finite_or_null(result.values.values[i]);
        obj["expected_successes"] = result.expected_counts[i].first;
        obj["expected_activations"] = result.expected_counts[i].second;
        if (mode != AggregationMode::ratio_of_expectations) {
          Json outcomes = Json::array();
          for (const auto& [sa, p] : result.outcomes.per_objective[i]) {
            Json entry = Json::object();
            entry["successes"] = sa.first;
            entry["activations"] = sa.second;
            entry["probability"] = p;
            outcomes.push_back(std::move(entry));
          }
          obj["outcomes"] = std::move(outcomes);
        }
        objectives.push_back(std::move(obj));
      }
    } else {
      report["method"] = "mc";
      report["episodes"] = episodes;
      report["seed"] = seed;
      McEstimate result = evaluate_mc(task, policy, episodes, seed, mode);
      for (std::size_t i = 0; i < task.objectives.size(); ++i) {
        Json obj = Json::object();
        obj["name"] = task.objectives[i].name;
        obj["value"] = detail::finite_or_null(result.values.values[i]);
        obj["standard_error"] = result.standard_errors[i];
        objectives.push_back(std::move(obj));
      }
    }
    report["objectives"] = std::move(objectives);
    out << report.dump(2) << "\n";
  });

  CLI::App* frontier_cmd =
      app.add_subcommand("frontier", "evaluate a policy class and flag maximal members");
  frontier_cmd->add_option("--task", task_path, "task document")->required();
  frontier_cmd->add_option("--class", class_spec, "sd, sr-grid:R, or fm:SPEC")->required();
  frontier_cmd->add_option("--mode", mode_name, "aggregation mode")
      ->check(CLI::IsMember(mode_names));
  frontier_cmd->add_option("--out", out_path, "write CSV here instead of stdout");
  frontier_cmd->callback([&] {
    EpisodicTask task = load_task_file(task_path);
    PolicyClass policies = detail::parse_class_spec(task, class_spec);
    FrontierResult result = frontier(task, policies, detail::parse_mode(mode_name));
    std::string csv = frontier_csv(result);
    if (out_path.empty())
      out << csv;
    else
      detail::write_file(out_path, csv);
  });

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "roll out seeded episodes");
  simulate_cmd->add_option("--task", task_path, "task document")->required();
  simulate_cmd->add_option("--policy", policy_path, "policy document")->required();
  simulate_cmd->add_option("--episodes", episodes, "episode count")->required();
  simulate_cmd->add_option("--seed", seed, "master seed")->required();
  simulate_cmd->add_flag("--trace", dump_traces, "print every episode's event trace");
  simulate_cmd->callback([&] {
    EpisodicTask task = load_task_file(task_path);
    Policy policy = load_policy(detail::read_file(policy_path), task.mdp);
    auto objectives = compile_objectives(task);
    const std::size_t k = objectives.size();
    std::vector<double> sum(k, 0.0);
    for (std::size_t e = 0; e < episodes; ++e) {
      RandomStream rng = RandomStream::substream(seed, e);
      EpisodeTrace trace = run_episode(task, objectives, policy, rng);
      for (std::size_t i = 0; i < k; ++i)
        sum[i] += episode_value_contribution(trace, static_cast<int>(i),
                                             AggregationMode::episode_mean_zero_default)
                      .value;
      if (dump_traces) {
        out << "episode " << (e + 1) << "\n";
        out << format_trace(task, trace) << "\n";
      }
    }
    out << "episodes: " << episodes << "\n";
    for (std::size_t i = 0; i < k; ++i)
      out << "objective " << task.objectives[i].name << ": mean "
          << detail::format_mean(sum[i] / static_cast<double>(episodes)) << "\n";
  });

  CLI::App* reduce_cmd =
      app.add_subcommand("reduce", "turn an MDP plus target policy or rewards into a task");
  reduce_cmd->add_option("--mode", reduce_mode, "generality or expansion")
      ->required()
      ->check(CLI::IsMember({"generality", "expansion"}));
  reduce_cmd->add_option("--mdp", mdp_path, "MDP document")->required();
  reduce_cmd->add_option("--policy", policy_path, "target policy (generality)");
  reduce_cmd->add_option("--rewards", rewards_path, "reward spec (expansion)");
  reduce_cmd->add_option("--out", out_path, "output task document")->required();
  reduce_cmd->add_option("--weights-out", weights_path,
                         "output weights array (expansion)");
  reduce_cmd->callback([&] {
    MdpDocument doc = load_mdp_document(detail::read_file(mdp_path));
    if (reduce_mode == "generality") {
      if (policy_path.empty())
        throw std::invalid_argument("reduce --mode generality needs --policy");
      Policy policy = load_policy(detail::read_file(policy_path), doc.mdp);
      const StationaryPolicy* target = std::get_if<StationaryPolicy>(&policy.impl);
      if (!target)
        throw std::invalid_argument(
            "reduce --mode generality needs a stationary policy document");
      EpisodicTask task = generality_reduction(doc.mdp, doc.terminal, doc.horizon, *target);
      detail::write_file(out_path, save_task(task));
    } else {
      if (rewards_path.empty())
        throw std::invalid_argument("reduce --mode expansion needs --rewards");
      if (weights_path.empty())
        throw std::invalid_argument("reduce --mode expansion needs --weights-out");
      DiscountedObjectiveSpec spec = load_rewards(detail::read_file(rewards_path), doc.mdp);
      ExpansionResult result = expansion_reduction(doc.mdp, doc.terminal, doc.horizon, spec);
      detail::write_file(out_path, save_task(result.task));
      detail::write_file(weights_path, Json(result.weights).dump(2) + "\n");
    }
  });

  CLI::App* check_cmd =
      app.add_subcommand("check-order", "test a task's order for preorder axioms");
  check_cmd->add_option("--task", task_path, "task document")->required();
  check_cmd->add_option("--samples", samples, "random vectors to test")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--seed", seed, "sampling seed");
  check_cmd->callback([&] {
    EpisodicTask task = load_task_file(task_path);
    RandomStream rng(seed);
    std::vector<std::vector<double>> vectors;
    for (int i = 0; i < samples; ++i) {
      std::vector<double> v(task.objective_count());
      for (double& x : v) x = rng.unit();
      vectors.push_back(std::move(v));
    }
    OrderAxiomReport report = check_order_axioms(task.order, vectors);
    out << "order: " << detail::order_kind_name(task.order) << "\n";
    out << "samples: " << samples << "\n";
    out << "reflexive: " << (report.reflexive ? "yes" : "no") << "\n";
    out << "transitive: " << (report.transitive ? "yes" : "no") << "\n";
    out << "antisymmetric: " << (report.antisymmetric ? "yes" : "no") << "\n";
    out << "classification: " << report.classification() << "\n";
    for (const auto& note : report.notes) out << "note: " << note << "\n";
    if (!report.reflexive || !report.transitive) rc = 1;
  });

  CLI::App* gallery_cmd =
      app.add_subcommand("gallery", "print or check a built-in worked example");
  gallery_cmd->add_option("name", fixture_name, "fixture name")->required();
  gallery_cmd->add_flag("--run", run_claims, "run the fixture's expected-results checks");
  gallery_cmd->add_option("--out", out_path, "write the task document here");
  gallery_cmd->callback([&] {
    GalleryFixture fixture = gallery(fixture_name);
    if (run_claims) {
      std::size_t failed = 0;
      for (const auto& claim : fixture.claims) {
        auto [ok, info] = claim.run();
        if (!ok) ++failed;
        out << claim.name << ": " << (ok ? "pass" : "FAIL") << " (" << info << ")\n";
      }
      if (failed == 0) {
        out << "all " << fixture.claims.size() << " claims passed\n";
      } else {
        out << failed << " of " << fixture.claims.size() << " claims failed\n";
        rc = 1;
      }
      return;
    }
    std::string doc = save_task(fixture.task);
    if (out_path.empty())
      out << doc;
    else
      detail::write_file(out_path, doc);
  });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace microrl
