#include "kpdrl/trainer.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kpdrl/env.hpp"
#include "kpdrl/errors.hpp"
#include "kpdrl/rng.hpp"

namespace kpdrl {

namespace {

// Independent RNG streams of one training seed. Instance selection does not
// consume action draws, so the two ablation arms see the same instances.
constexpr std::uint64_t kInstanceStream = 10;
constexpr std::uint64_t kActionStream = 11;

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

} // namespace

std::int64_t default_t_max(std::size_t max_items) noexcept {
  return 3 * static_cast<std::int64_t>(max_items) * 10'000;
}

std::string config_text(const TrainConfig &config, std::size_t max_items) {
  std::ostringstream s;
  s << "n=" << max_items << ";t_max="
    << (config.t_max > 0 ? config.t_max : default_t_max(max_items))
    << ";gamma=" << shortest(config.a2c.gamma)
    << ";entropy_coef=" << shortest(config.a2c.entropy_coef)
    << ";order=" << (config.order == InstanceOrder::Cyclic ? "cyclic" : "random")
    << ";seed=" << config.seed << ";raw_rewards=" << (config.raw_rewards ? 1 : 0) << ";hidden=";
  for (std::size_t k = 0; k < config.network.hidden.size(); ++k) {
    s << (k ? "," : "") << config.network.hidden[k];
  }
  s << ";lr=" << shortest(config.network.optimizer.learning_rate)
    << ";decay=" << shortest(config.network.optimizer.decay)
    << ";eps=" << shortest(config.network.optimizer.epsilon)
    << ";policy_gain=" << shortest(config.network.policy_output_gain)
    << ";value_gain=" << shortest(config.network.value_output_gain);
  return s.str();
}

std::string fingerprint(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf.data(), 16);
}

std::vector<std::int64_t> BestSolutions::values() const {
  std::vector<std::int64_t> out;
  out.reserve(solutions.size());
  for (const auto &s : solutions) {
    out.push_back(s.total_value);
  }
  return out;
}

void state_input(std::span<const double> features, const AggregationPolicy *aggregation,
                 std::vector<double> &out) {
  out.resize(features.size());
  if (aggregation) {
    aggregation->embed_into(features, out);
  } else {
    std::copy(features.begin(), features.end(), out.begin());
  }
}

std::size_t sample_action(std::span<const double> probs, double u) noexcept {
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] > 0.0) {
      last_positive = k;
    }
    acc += probs[k];
    if (u < acc) {
      return k;
    }
  }
  // Rounding left the cumulative sum just below u.
  return last_positive;
}

std::size_t greedy_action(std::span<const double> probs) noexcept {
  std::size_t best = 0;
  for (std::size_t k = 1; k < probs.size(); ++k) {
    if (probs[k] > probs[best]) {
      best = k;
    }
  }
  return best;
}

TrainResult train(const Dataset &ds, const AggregationPolicy *aggregation,
                  const TrainConfig &config) {
  ds.validate();
  const auto n = ds.max_items();
  if (aggregation && aggregation->max_items() != n) {
    throw DimensionError("aggregation policy was fitted for N=" +
                         std::to_string(aggregation->max_items()) + ", dataset has N=" +
                         std::to_string(n));
  }
  const auto t_max = config.t_max > 0 ? config.t_max : default_t_max(n);
  const auto m = ds.instances.size();
  const auto scale = static_cast<double>(ds.instances.front().scale());

  TrainResult res{ActorCritic::create(n, config.network, config.seed), {}, {}};
  const auto shared = config_text(config, n);
  res.log.shared_fingerprint = fingerprint(shared);
  if (aggregation) {
    std::ostringstream agg;
    write_policy(*aggregation, agg);
    res.log.fingerprint = fingerprint(shared + ";agg=" + fingerprint(agg.str()));
  } else {
    res.log.fingerprint = fingerprint(shared + ";agg=none");
  }
  res.best.solutions.assign(m, Solution{});

  Rng instance_rng(config.seed, kInstanceStream);
  Rng action_rng(config.seed, kActionStream);
  A2cWorkspace ws;
  std::vector<double> x;
  std::vector<double> x_next;
  std::int64_t best_sum = 0;
  std::int64_t t = 0;
  std::size_t cursor = 0;

  while (t < t_max) {
    std::size_t pick = 0;
    if (config.order == InstanceOrder::Cyclic) {
      pick = cursor++ % m;
    } else {
      pick = instance_rng.index(m);
    }
    const auto &inst = ds.instances[pick];
    const KnapsackEnv env(inst, n, config.raw_rewards);
    auto state = env.reset();
    state_input(env.features(state).entries, aggregation, x);

    while (!state.done) {
      forward(res.model.policy, x, ws.policy_acts);
      const auto action = sample_action(ws.policy_acts.probs, action_rng.uniform01());
      const auto step = env.step(state, ActionIndex{action + 1});
      if (!step.done) {
        state_input(env.features(state).entries, aggregation, x_next);
      } else {
        x_next.assign(x.size(), 0.0);
      }
      a2c_update(res.model, Transition{x, action, step.reward, x_next, step.done}, config.a2c, ws);
      ++t;
      if (config.step_log_every > 0 && t % config.step_log_every == 0) {
        res.log.steps.push_back({t, inst.id(), step.reward});
      }
      x.swap(x_next);
    }

    auto &best = res.best.solutions[pick];
    if (state.ov > best.total_value) {
      best_sum += state.ov - best.total_value;
      best = env.solution(state);
    }
    res.log.episodes.push_back({t, inst.id(), inst.unscale(state.ov),
                                static_cast<double>(best_sum) /
                                    (static_cast<double>(m) * scale)});
  }
  res.log.total_steps = t;
  return res;
}

Solution solve_with_policy(const ActorCritic &model, const AggregationPolicy *aggregation,
                           const KpInstance &inst, ActionMode mode, std::size_t episodes,
                           std::uint64_t seed) {
  const auto n = model.max_items();
  if (aggregation && aggregation->max_items() != n) {
    throw DimensionError("aggregation policy and model disagree on N");
  }
  const KnapsackEnv env(inst, n);
  Activations acts;
  std::vector<double> x;
  Rng rng(seed, static_cast<std::uint64_t>(inst.id()));

  auto rollout = [&](bool greedy) {
    auto state = env.reset();
    while (!state.done) {
      state_input(env.features(state).entries, aggregation, x);
      forward(model.policy, x, acts);
      const auto a = greedy ? greedy_action(acts.probs) : sample_action(acts.probs, rng.uniform01());
      env.step(state, ActionIndex{a + 1});
    }
    return env.solution(state);
  };

  auto best = rollout(true);
  if (mode == ActionMode::Sample) {
    for (std::size_t e = 0; e < episodes; ++e) {
      auto s = rollout(false);
      if (s.total_value > best.total_value) {
        best = std::move(s);
      }
    }
  }
  return best;
}

void write_train_log(const TrainLog &log, std::ostream &out) {
  out << "# config " << log.fingerprint << ' ' << log.shared_fingerprint << ' '
      << log.total_steps << '\n';
  out << "t,instance,episode_value,best_valbar\n";
  for (const auto &e : log.episodes) {
    out << e.t << ',' << e.instance << ',' << shortest(e.episode_value) << ','
        << shortest(e.best_valbar) << '\n';
  }
}

void write_train_log(const TrainLog &log, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  write_train_log(log, out);
}

TrainLog read_train_log(std::istream &in) {
  TrainLog log;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    if (line.starts_with("# config ")) {
      std::istringstream ss(line.substr(9));
      ss >> log.fingerprint >> log.shared_fingerprint >> log.total_steps;
      continue;
    }
    if (line.starts_with('#')) {
      continue;
    }
    if (!header) {
      if (line != "t,instance,episode_value,best_valbar") {
        throw ParseError("expected CSV header 't,instance,episode_value,best_valbar'", line_no);
      }
      header = true;
      continue;
    }
    EpisodeRecord e;
    std::array<std::string_view, 4> f;
    std::string_view rest(line);
    for (std::size_t k = 0; k < f.size(); ++k) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (k + 1 == f.size())) {
        throw ParseError("expected 4 comma-separated fields", line_no);
      }
      f[k] = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    auto parse = [&](std::string_view s, auto &v) {
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("bad number '" + std::string(s) + "'", line_no);
      }
    };
    parse(f[0], e.t);
    parse(f[1], e.instance);
    parse(f[2], e.episode_value);
    parse(f[3], e.best_valbar);
    if (!log.episodes.empty() && e.t <= log.episodes.back().t) {
      throw ParseError("timesteps must be strictly increasing", line_no);
    }
    log.episodes.push_back(e);
  }
  if (!header) {
    throw ParseError("training log has no CSV header", line_no);
  }
  if (log.total_steps == 0 && !log.episodes.empty()) {
    log.total_steps = log.episodes.back().t;
  }
  return log;
}

TrainLog read_train_log(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open training log '" + path.string() + "'");
  }
  return read_train_log(in);
}

} // namespace kpdrl
