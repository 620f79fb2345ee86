#include "kpdrl/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "kpdrl/aggregation.hpp"
#include "kpdrl/baselines.hpp"
#include "kpdrl/checkpoint.hpp"
#include "kpdrl/dataset_io.hpp"
#include "kpdrl/errors.hpp"
#include "kpdrl/features.hpp"
#include "kpdrl/generators.hpp"
#include "kpdrl/metrics.hpp"
#include "kpdrl/trainer.hpp"

namespace kpdrl::cli {

namespace {

namespace fs = std::filesystem;

fs::path output_path(const std::string &p) {
  fs::path path(p);
  const char *dir = std::getenv(kOutDirEnv);
  if (path.is_relative() && dir && *dir) {
    return fs::path(dir) / path;
  }
  return path;
}

/// Runs body(i) for i in [0, n) on up to `workers` threads; rethrows the
/// first exception.
template <typename Fn> void parallel_for(std::size_t n, int workers, Fn body) {
  const auto threads = static_cast<std::size_t>(std::clamp(workers, 1, 256));
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(threads, n); ++w) {
    pool.emplace_back([&] {
      for (auto i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) {
            failure = std::current_exception();
          }
          next = n;
        }
      }
    });
  }
  for (auto &t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

std::vector<std::int64_t> optimal_values(const Dataset &ds, int workers) {
  std::vector<std::int64_t> optima(ds.instances.size());
  parallel_for(ds.instances.size(), workers,
               [&](std::size_t i) { optima[i] = dp_solve(ds.instances[i]).total_value; });
  return optima;
}

std::vector<std::int64_t> greedy_values(const Dataset &ds) {
  std::vector<std::int64_t> v;
  for (const auto &inst : ds.instances) {
    v.push_back(greedy_solve(inst).total_value);
  }
  return v;
}

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw Error("cannot write '" + path.string() + "'");
  }
}

/// Splits "name=path"; a bare path is named after its file stem.
std::pair<std::string, std::string> named_path(const std::string &spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    return {fs::path(spec).stem().string(), spec};
  }
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

std::optional<AggregationPolicy> load_aggregation(const std::string &agg) {
  if (agg == "none") {
    return std::nullopt;
  }
  return read_policy(fs::path(agg));
}

struct GenerateArgs {
  std::string family;
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::int64_t r = 0;
  std::uint64_t seed = 0;
  double capacity = 0.0;
  std::string out;
};

struct AggregateArgs {
  std::string dataset;
  AggregationHyperparams hp;
  std::uint64_t seed = 0;
  std::string out;
};

struct TrainArgs {
  std::string dataset;
  std::string agg = "none";
  TrainConfig config;
  std::string order = "random";
  double entropy_coef = 0.01;
  std::string out_model;
  std::string out_log;
  std::string out_solutions;
};

struct SolveArgs {
  std::string method;
  std::string dataset;
  std::string out;
  std::string model;
  std::string agg = "none";
  std::string mode = "greedy";
  std::size_t episodes = 64;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct EvaluateArgs {
  std::string dataset;
  std::string solutions;
  std::string label;
  std::string csv;
  int workers = 1;
};

struct CompareArgs {
  std::string dataset;
  std::vector<std::string> methods;
  bool greedy = true;
  std::string range = "auto";
  std::string csv;
  std::vector<std::string> logs;
  std::int64_t window = 1000;
  std::string svg;
  int workers = 1;
};

int do_generate(const GenerateArgs &a, std::ostream &out) {
  const auto family = parse_family(a.family);
  if (!family) {
    throw ParameterError("unknown family '" + a.family + "'");
  }
  Dataset ds;
  switch (*family) {
  case Family::RI:
    ds = gen_random_instances(a.m, a.n, a.r, a.seed);
    break;
  case Family::FI:
    ds = gen_fixed_instances(a.m, a.n, a.seed,
                             a.capacity > 0.0 ? std::optional<double>(a.capacity) : std::nullopt);
    break;
  case Family::HI:
    ds = gen_hard_instances(a.m, a.n, a.r, a.seed);
    break;
  }
  const auto path = output_path(a.out);
  write_dataset(ds, path);
  out << "wrote " << ds.instances.size() << " " << family_name(ds.family) << " instances to "
      << path.string() << '\n';
  return kOk;
}

int do_aggregate(const AggregateArgs &a, std::ostream &out) {
  const auto ds = read_dataset(fs::path(a.dataset));
  const auto policy = learn_aggregation(feature_table(ds), a.hp, a.seed);
  const auto path = output_path(a.out);
  write_policy(policy, path);
  out << "d* per item rank:";
  for (int d : policy.d_star()) {
    out << ' ' << d;
  }
  out << "\nwrote aggregation policy to " << path.string() << '\n';
  return kOk;
}

int do_train(TrainArgs a, const std::string &resolved, std::ostream &out) {
  const auto ds = read_dataset(fs::path(a.dataset));
  const auto agg = load_aggregation(a.agg);
  a.config.order = a.order == "cyclic" ? InstanceOrder::Cyclic : InstanceOrder::UniformRandom;
  a.config.a2c.entropy_coef = a.entropy_coef;
  auto res = train(ds, agg ? &*agg : nullptr, a.config);

  if (!a.out_model.empty()) {
    save_checkpoint(res.model, output_path(a.out_model));
  }
  if (!a.out_log.empty()) {
    std::ofstream log(output_path(a.out_log), std::ios::binary);
    if (!log) {
      throw Error("cannot open '" + a.out_log + "' for writing");
    }
    log << "# run " << fingerprint(resolved) << '\n';
    write_train_log(res.log, log);
  }
  if (!a.out_solutions.empty()) {
    std::vector<SolutionRecord> recs;
    for (std::size_t k = 0; k < res.best.solutions.size(); ++k) {
      recs.push_back({ds.instances[k].id(), res.best.solutions[k]});
    }
    std::ofstream sol(output_path(a.out_solutions), std::ios::binary);
    write_solutions(recs, sol, "best during training, run " + fingerprint(resolved));
  }
  out << "steps " << res.log.total_steps << ", episodes " << res.log.episodes.size()
      << ", best Val-bar " << res.log.episodes.back().best_valbar << '\n'
      << "run fingerprint " << fingerprint(resolved) << '\n';
  return kOk;
}

int do_solve(const SolveArgs &a, std::ostream &out) {
  const auto ds = read_dataset(fs::path(a.dataset));
  std::optional<ActorCritic> model;
  std::optional<AggregationPolicy> agg;
  if (a.method == "policy") {
    if (a.model.empty()) {
      throw ParameterError("--method policy needs --model");
    }
    model = load_checkpoint(fs::path(a.model), ds.max_items());
    agg = load_aggregation(a.agg);
  }
  const auto mode = a.mode == "sample" ? ActionMode::Sample : ActionMode::Greedy;

  std::vector<SolutionRecord> recs(ds.instances.size());
  parallel_for(ds.instances.size(), a.workers, [&](std::size_t i) {
    const auto &inst = ds.instances[i];
    recs[i].id = inst.id();
    if (a.method == "greedy") {
      recs[i].solution = greedy_solve(inst);
    } else if (a.method == "dp") {
      recs[i].solution = dp_solve(inst);
    } else if (a.method == "brute") {
      recs[i].solution = brute_force_solve(inst);
    } else {
      recs[i].solution = solve_with_policy(*model, agg ? &*agg : nullptr, inst, mode, a.episodes,
                                           a.seed);
    }
  });
  const auto path = output_path(a.out);
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  write_solutions(recs, file, "method " + a.method);
  out << "wrote " << recs.size() << " solutions to " << path.string() << '\n';
  return kOk;
}

int do_evaluate(const EvaluateArgs &a, std::ostream &out) {
  const auto ds = read_dataset(fs::path(a.dataset));
  const auto recs = read_solutions(fs::path(a.solutions));
  const auto values = solution_values(ds, recs);
  const auto optima = optimal_values(ds, a.workers);
  TableRow row{std::string(family_name(ds.family)),
               a.label.empty() ? fs::path(a.solutions).stem().string() : a.label,
               ds.params.n, compute_metrics(values, optima, ds.instances.front().scale()), 0};
  out << format_table(std::span<const TableRow>(&row, 1));
  if (!a.csv.empty()) {
    std::ostringstream csv;
    csv << "id,value,optimum,optimal\n";
    for (const auto &r : row.report.rows) {
      csv << r.id << ',' << r.value << ',' << r.optimum << ',' << (r.value == r.optimum ? 1 : 0)
          << '\n';
    }
    write_text(output_path(a.csv), csv.str());
  }
  return kOk;
}

int do_compare(const CompareArgs &a, std::ostream &out) {
  const auto ds = read_dataset(fs::path(a.dataset));
  const auto optima = optimal_values(ds, a.workers);
  const auto scale = ds.instances.front().scale();
  const std::string name(family_name(ds.family));
  const bool last_half = a.range == "last-half" || (a.range == "auto" && ds.family == Family::HI);

  std::vector<TableRow> rows;
  if (a.greedy) {
    rows.push_back({name, "Greedy", ds.params.n, compute_metrics(greedy_values(ds), optima, scale), 0});
  }
  std::vector<std::vector<std::int64_t>> method_values;
  for (const auto &spec : a.methods) {
    const auto [label, path] = named_path(spec);
    method_values.push_back(solution_values(ds, read_solutions(fs::path(path))));
    rows.push_back({name, label, ds.params.n, compute_metrics(method_values.back(), optima, scale), 0});
  }
  // #highest: instances where a method is strictly above every other one.
  const auto first_method = rows.size() - method_values.size();
  if (method_values.size() >= 2) {
    const auto m = ds.instances.size();
    for (std::size_t i = last_half ? m / 2 : 0; i < m; ++i) {
      for (std::size_t k = 0; k < method_values.size(); ++k) {
        bool strictly_best = true;
        for (std::size_t j = 0; j < method_values.size() && strictly_best; ++j) {
          strictly_best = j == k || method_values[k][i] > method_values[j][i];
        }
        rows[first_method + k].n_highest += strictly_best ? 1 : 0;
      }
    }
  }
  out << format_table(rows);
  if (!a.csv.empty()) {
    write_text(output_path(a.csv), format_csv(rows));
  }

  if (!a.logs.empty()) {
    std::vector<NamedCurve> curves;
    for (const auto &spec : a.logs) {
      const auto [label, path] = named_path(spec);
      const auto log = read_train_log(fs::path(path));
      curves.push_back({label, learning_curve(log, a.window)});
      out << label << ": reaches 99% of final Val-bar at t=" << first_reach_step(log, 0.99)
          << '\n';
    }
    if (!a.svg.empty()) {
      write_text(output_path(a.svg), learning_curves_svg(curves, name + " N=" + std::to_string(ds.params.n)));
    }
  }
  return kOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Deep RL 0-1 knapsack solver with learned state aggregation", "kpdrl"};
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "Key-value config file with one [section] per subcommand");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto *generate = app.add_subcommand("generate", "Generate a dataset of instances");
  generate->add_option("--family", gen.family, "Instance family")
      ->required()
      ->check(CLI::IsMember({"ri", "fi", "hi"}));
  generate->add_option("--m", gen.m, "Number of instances M")->required();
  generate->add_option("--n", gen.n, "Maximum item count N")->required();
  generate->add_option("--r", gen.r, "Value/weight bound R (ri, hi)");
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--capacity", gen.capacity, "FI capacity for N outside {50,300,500}");
  generate->add_option("--out", gen.out, "Output dataset file")->required();

  AggregateArgs agg;
  auto *aggregate = app.add_subcommand("aggregate", "Learn a state aggregation policy");
  aggregate->add_option("--dataset", agg.dataset, "Dataset file")->required();
  aggregate->add_option("--x", agg.hp.max_splits, "Largest split count")->capture_default_str();
  aggregate->add_option("--alpha", agg.hp.alpha, "Q-learning step size")->capture_default_str();
  aggregate->add_option("--gamma", agg.hp.gamma, "Q-learning discount")->capture_default_str();
  aggregate->add_option("--epsilon", agg.hp.epsilon, "Exploration rate")->capture_default_str();
  aggregate->add_option("--iterations", agg.hp.iterations, "Q-learning iterations")
      ->capture_default_str();
  aggregate->add_option("--seed", agg.seed, "Random seed");
  aggregate->add_option("--out", agg.out, "Output policy file")->required();

  TrainArgs tr;
  auto *train_cmd = app.add_subcommand("train", "Train policy and value networks with A2C");
  train_cmd->add_option("--dataset", tr.dataset, "Dataset file")->required();
  train_cmd->add_option("--agg", tr.agg, "Aggregation policy file, or 'none'")->capture_default_str();
  train_cmd->add_option("--tmax", tr.config.t_max, "Step budget (0: 3N*10^4)")->capture_default_str();
  train_cmd->add_option("--gamma", tr.config.a2c.gamma, "Discount")->capture_default_str();
  train_cmd->add_option("--entropy-coef", tr.entropy_coef, "Entropy bonus weight (0 disables)")
      ->capture_default_str();
  train_cmd->add_option("--lr", tr.config.network.optimizer.learning_rate, "RMSProp learning rate")
      ->capture_default_str();
  train_cmd->add_option("--order", tr.order, "Instance selection")
      ->check(CLI::IsMember({"random", "cyclic"}))
      ->capture_default_str();
  train_cmd->add_flag("--raw-rewards", tr.config.raw_rewards,
                      "Rewards in real units instead of divided by W_P");
  train_cmd->add_option("--seed", tr.config.seed, "Random seed");
  train_cmd->add_option("--out-model", tr.out_model, "Checkpoint file");
  train_cmd->add_option("--out-log", tr.out_log, "Training log CSV");
  train_cmd->add_option("--out-solutions", tr.out_solutions, "Best solutions found in training");

  SolveArgs sv;
  auto *solve = app.add_subcommand("solve", "Solve every instance of a dataset");
  solve->add_option("--method", sv.method, "Solver")
      ->required()
      ->check(CLI::IsMember({"greedy", "dp", "brute", "policy"}));
  solve->add_option("--dataset", sv.dataset, "Dataset file")->required();
  solve->add_option("--out", sv.out, "Output solutions file")->required();
  solve->add_option("--model", sv.model, "Checkpoint (policy method)");
  solve->add_option("--agg", sv.agg, "Aggregation policy file, or 'none'")->capture_default_str();
  solve->add_option("--mode", sv.mode, "Policy decoding")
      ->check(CLI::IsMember({"greedy", "sample"}))
      ->capture_default_str();
  solve->add_option("--episodes", sv.episodes, "Sampled episodes per instance")->capture_default_str();
  solve->add_option("--seed", sv.seed, "Sampling seed");
  solve->add_option("--workers", sv.workers, "Worker threads")->capture_default_str();

  EvaluateArgs ev;
  auto *evaluate = app.add_subcommand("evaluate", "Score a solutions file against the DP optimum");
  evaluate->add_option("--dataset", ev.dataset, "Dataset file")->required();
  evaluate->add_option("--solutions", ev.solutions, "Solutions file")->required();
  evaluate->add_option("--label", ev.label, "Method name in the table");
  evaluate->add_option("--csv", ev.csv, "Per-instance CSV output");
  evaluate->add_option("--workers", ev.workers, "Worker threads")->capture_default_str();

  CompareArgs cmp;
  auto *compare = app.add_subcommand("compare", "Comparison table and learning curves");
  compare->add_option("--dataset", cmp.dataset, "Dataset file")->required();
  compare->add_option("--method", cmp.methods, "NAME=solutions file (repeatable)");
  compare->add_option("--greedy", cmp.greedy, "Include the greedy row")->capture_default_str();
  compare->add_option("--range", cmp.range, "#highest instance range")
      ->check(CLI::IsMember({"auto", "full", "last-half"}))
      ->capture_default_str();
  compare->add_option("--csv", cmp.csv, "CSV table output");
  compare->add_option("--log", cmp.logs, "NAME=training log CSV (repeatable)");
  compare->add_option("--window", cmp.window, "Learning-curve sampling window")->capture_default_str();
  compare->add_option("--svg", cmp.svg, "Learning-curve chart output");
  compare->add_option("--workers", cmp.workers, "Worker threads")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsageError;
  }

  auto *active = app.get_subcommands().front();
  const auto resolved = active->get_name() + "\n" + active->config_to_str(true, false);
  try {
    if (active == generate) {
      return do_generate(gen, out);
    }
    if (active == aggregate) {
      return do_aggregate(agg, out);
    }
    if (active == train_cmd) {
      return do_train(tr, resolved, out);
    }
    if (active == solve) {
      return do_solve(sv, out);
    }
    if (active == evaluate) {
      return do_evaluate(ev, out);
    }
    return do_compare(cmp, out);
  } catch (const ParameterError &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

} // namespace kpdrl::cli
