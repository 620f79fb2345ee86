#include "kpdrl/aggregation.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "kpdrl/errors.hpp"
#include "kpdrl/rng.hpp"

namespace kpdrl {

int Bins::label(double value) const noexcept {
  const auto it = std::lower_bound(boundaries.begin(), boundaries.end(), value);
  return static_cast<int>(it - boundaries.begin());
}

bool split_feasible(std::size_t m, int d) noexcept {
  if (d < 1 || m < static_cast<std::size_t>(d) + 1) {
    return false;
  }
  const auto parts = static_cast<std::size_t>(d) + 1;
  const auto chunk = (m + parts - 1) / parts;
  return chunk * static_cast<std::size_t>(d) < m;
}

QuantileSplit quantile_split(std::span<const double> values, int d) {
  if (values.empty()) {
    throw ParameterError("quantile split needs at least one value");
  }
  if (d < 1) {
    throw ParameterError("split count must be >= 1");
  }
  if (!split_feasible(values.size(), d)) {
    throw ParameterError(std::to_string(d) + " splits of " + std::to_string(values.size()) +
                         " values leave an empty subset");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto parts = static_cast<std::size_t>(d) + 1;
  const auto chunk = (sorted.size() + parts - 1) / parts;

  QuantileSplit out;
  for (std::size_t j = 0; j < parts; ++j) {
    const auto begin = j * chunk;
    const auto end = (j + 1 == parts) ? sorted.size() : begin + chunk;
    out.subsets.emplace_back(sorted.begin() + static_cast<std::ptrdiff_t>(begin),
                             sorted.begin() + static_cast<std::ptrdiff_t>(end));
    if (j + 1 < parts) {
      const double cut = sorted[end - 1];
      if (out.bins.boundaries.empty() || cut > out.bins.boundaries.back()) {
        out.bins.boundaries.push_back(cut);
      }
    }
  }
  return out;
}

double split_reward(std::span<const double> values, int d) {
  const auto split = quantile_split(values, d);
  double size_product = 1.0;
  for (const auto &s : split.subsets) {
    size_product *= static_cast<double>(s.size());
  }
  // Subsets are contiguous runs of the sorted column, so a value shared by
  // several subsets shows up as the last element of one and the first of
  // the next.
  std::map<double, int> spans;
  for (const auto &s : split.subsets) {
    double prev = std::nan("");
    for (double v : s) {
      if (v != prev) {
        ++spans[v];
        prev = v;
      }
    }
  }
  int common = 0;
  for (const auto &[v, count] : spans) {
    common += count - 1;
  }
  return size_product / (static_cast<double>(d + 1) * std::max(1, common));
}

int QTable::best_action(std::size_t i) const {
  int best = 1;
  for (int d = 2; d <= max_splits; ++d) {
    if (at(i, d) > at(i, best)) {
      best = d;
    }
  }
  return best;
}

AggregationPolicy::AggregationPolicy(std::vector<int> d_star, std::vector<Bins> vr_bins)
    : d_star_(std::move(d_star)), vr_bins_(std::move(vr_bins)) {
  if (d_star_.size() != vr_bins_.size()) {
    throw ParameterError("aggregation policy needs one bin set per split count");
  }
  for (const auto &b : vr_bins_) {
    for (std::size_t j = 1; j < b.boundaries.size(); ++j) {
      if (!(b.boundaries[j - 1] < b.boundaries[j])) {
        throw ParameterError("bin boundaries must be strictly ascending");
      }
    }
  }
}

const Bins &AggregationPolicy::wr_bins() {
  static const Bins bins{{0.5, 1.0}};
  return bins;
}

void AggregationPolicy::embed_into(std::span<const double> features, std::span<double> out) const {
  if (features.size() != feature_width(max_items()) || out.size() != features.size()) {
    throw ParameterError("feature width " + std::to_string(features.size()) +
                         " does not match aggregation policy width " +
                         std::to_string(feature_width(max_items())));
  }
  for (std::size_t k = 0; k < kScalarFeatures; ++k) {
    out[k] = features[k];
  }
  const auto &wr = wr_bins();
  for (std::size_t r = 0; r < max_items(); ++r) {
    out[vr_feature(r)] = vr_bins_[r].label(features[vr_feature(r)]);
    out[wr_feature(r)] = wr.label(features[wr_feature(r)]);
  }
}

std::vector<double> AggregationPolicy::embed(std::span<const double> features) const {
  std::vector<double> out(features.size());
  embed_into(features, out);
  return out;
}

std::vector<double> embed_state(const FeatureVector &fv, const AggregationPolicy &policy) {
  return policy.embed(fv.entries);
}

namespace {

std::size_t table_items(const std::vector<std::vector<double>> &table) {
  if (table.empty()) {
    throw ParameterError("aggregation needs a non-empty feature table");
  }
  const auto width = table.front().size();
  if (width < kScalarFeatures + 2 || (width - kScalarFeatures) % 2 != 0) {
    throw ParameterError("feature table rows must have 2N+4 entries");
  }
  for (const auto &row : table) {
    if (row.size() != width) {
      throw ParameterError("feature table rows differ in width");
    }
  }
  return (width - kScalarFeatures) / 2;
}

std::vector<double> column(const std::vector<std::vector<double>> &table, std::size_t k) {
  std::vector<double> col;
  col.reserve(table.size());
  for (const auto &row : table) {
    col.push_back(row[k]);
  }
  return col;
}

} // namespace

QTable learn_split_counts(const std::vector<std::vector<double>> &table,
                          const AggregationHyperparams &hp, std::uint64_t seed) {
  const auto n = table_items(table);
  if (hp.max_splits < 1) {
    throw ParameterError("max splits x must be >= 1");
  }
  if (hp.iterations < 0 || !(hp.epsilon >= 0.0 && hp.epsilon <= 1.0) ||
      !(hp.gamma >= 0.0 && hp.gamma <= 1.0) || !(hp.alpha > 0.0)) {
    throw ParameterError("invalid Q-learning hyperparameters");
  }

  // R(vr_i, d) is deterministic, so it is evaluated once per cell.
  QTable rewards{n, hp.max_splits, std::vector<double>(n * static_cast<std::size_t>(hp.max_splits), 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto col = column(table, vr_feature(i));
    for (int d = 1; d <= hp.max_splits; ++d) {
      rewards.at(i, d) = split_feasible(col.size(), d) ? split_reward(col, d) : 0.0;
    }
  }

  QTable q{n, hp.max_splits, std::vector<double>(rewards.values.size(), 0.0)};
  Rng rng(seed);
  auto state = rng.index(n);
  for (std::int64_t it = 0; it < hp.iterations; ++it) {
    const auto next = rng.index(n);
    int action = 0;
    if (rng.uniform01() < hp.epsilon) {
      action = static_cast<int>(rng.uniform_int(1, hp.max_splits));
    } else {
      action = q.best_action(state);
    }
    auto &cell = q.at(state, action);
    cell += hp.alpha * (rewards.at(state, action) + hp.gamma * q.best_value(next) - cell);
    if (!std::isfinite(cell)) {
      throw NumericError("Q value became non-finite at iteration " + std::to_string(it));
    }
    state = next;
  }
  return q;
}

AggregationPolicy learn_aggregation(const std::vector<std::vector<double>> &table,
                                    const AggregationHyperparams &hp, std::uint64_t seed) {
  const auto q = learn_split_counts(table, hp, seed);
  std::vector<int> d_star(q.n);
  std::vector<Bins> bins(q.n);
  for (std::size_t i = 0; i < q.n; ++i) {
    const auto col = column(table, vr_feature(i));
    int d = q.best_action(i);
    // An infeasible argmax only happens when every feasible action scored 0.
    while (d > 1 && !split_feasible(col.size(), d)) {
      --d;
    }
    d_star[i] = d;
    if (split_feasible(col.size(), d)) {
      bins[i] = quantile_split(col, d).bins;
    } else {
      // A single-row table cannot be split; everything maps to label 0.
      bins[i].boundaries = {*std::max_element(col.begin(), col.end())};
    }
  }
  return AggregationPolicy(std::move(d_star), std::move(bins));
}

namespace {

constexpr std::string_view kPolicyMagic = "kpdrl-aggregation";
constexpr int kPolicyVersion = 1;

void put_double(std::ostream &out, double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.write(buf.data(), ptr - buf.data());
}

double get_double(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("bad number '" + std::string(s) + "'", line_no);
  }
  return v;
}

long get_int(std::string_view s, std::size_t line_no) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("bad integer '" + std::string(s) + "'", line_no);
  }
  return v;
}

std::vector<std::string> words(const std::string &line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) {
    out.push_back(w);
  }
  return out;
}

} // namespace

void write_policy(const AggregationPolicy &p, std::ostream &out) {
  out << kPolicyMagic << ' ' << kPolicyVersion << '\n';
  out << "N " << p.max_items() << '\n';
  const auto &wr = AggregationPolicy::wr_bins();
  for (std::size_t r = 0; r < p.max_items(); ++r) {
    out << vr_feature(r) + 1 << ' ' << p.d_star()[r];
    for (double b : p.vr_bins()[r].boundaries) {
      out << ' ';
      put_double(out, b);
    }
    out << '\n' << wr_feature(r) + 1 << ' ' << wr.boundaries.size();
    for (double b : wr.boundaries) {
      out << ' ';
      put_double(out, b);
    }
    out << '\n';
  }
}

void write_policy(const AggregationPolicy &p, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  write_policy(p, out);
}

AggregationPolicy read_policy(std::istream &in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++line_no;
      auto w = words(line);
      if (!w.empty()) {
        return w;
      }
    }
    return {};
  };

  auto head = next_line();
  if (head.size() != 2 || head[0] != kPolicyMagic) {
    throw ParseError("not an aggregation policy file", line_no);
  }
  if (get_int(head[1], line_no) != kPolicyVersion) {
    throw ParseError("unsupported aggregation policy version " + head[1], line_no);
  }
  auto dims = next_line();
  if (dims.size() != 2 || dims[0] != "N") {
    throw ParseError("expected 'N <n>'", line_no);
  }
  const auto n = get_int(dims[1], line_no);
  if (n < 1) {
    throw ParseError("N must be >= 1", line_no);
  }

  std::vector<int> d_star(static_cast<std::size_t>(n), 0);
  std::vector<Bins> bins(static_cast<std::size_t>(n));
  std::vector<bool> seen(feature_width(static_cast<std::size_t>(n)), false);
  for (auto w = next_line(); !w.empty(); w = next_line()) {
    if (w.size() < 2) {
      throw ParseError("expected 'k d b1 ... bm'", line_no);
    }
    const auto k = get_int(w[0], line_no);
    const auto d = get_int(w[1], line_no);
    if (k <= static_cast<long>(kScalarFeatures) || k > static_cast<long>(seen.size())) {
      throw ParseError("feature index " + w[0] + " out of range", line_no);
    }
    const auto idx = static_cast<std::size_t>(k - 1);
    if (seen[idx]) {
      throw ParseError("feature " + w[0] + " listed twice", line_no);
    }
    seen[idx] = true;
    if (d < 1 || static_cast<long>(w.size()) - 2 > d || w.size() < 3) {
      throw ParseError("feature " + w[0] + " needs between 1 and d boundaries", line_no);
    }
    Bins b;
    for (std::size_t j = 2; j < w.size(); ++j) {
      b.boundaries.push_back(get_double(w[j], line_no));
      if (j > 2 && !(b.boundaries[j - 3] < b.boundaries[j - 2])) {
        throw ParseError("boundaries must be strictly ascending", line_no);
      }
    }
    const auto rank = (idx - kScalarFeatures) / 2;
    if ((idx - kScalarFeatures) % 2 == 0) {
      d_star[rank] = static_cast<int>(d);
      bins[rank] = std::move(b);
    } else if (!(b == AggregationPolicy::wr_bins())) {
      throw ParseError("wr features must use the fixed cuts 0.5 1", line_no);
    }
  }
  for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r) {
    if (!seen[vr_feature(r)]) {
      throw ParseError("missing vr feature " + std::to_string(vr_feature(r) + 1), line_no);
    }
  }
  return AggregationPolicy(std::move(d_star), std::move(bins));
}

AggregationPolicy read_policy(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open aggregation policy '" + path.string() + "'");
  }
  return read_policy(in);
}

} // namespace kpdrl
