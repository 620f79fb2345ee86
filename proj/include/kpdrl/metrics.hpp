#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kpdrl/trainer.hpp"

namespace kpdrl {

struct MetricsRow {
  std::int64_t id = 0;
  std::int64_t value = 0;
  std::int64_t optimum = 0;
};

/// Solution-quality summary over a dataset. Sums are kept as scaled
/// integers so the optimality count and the ratio are exact.
struct MetricsReport {
  std::int64_t scale = 1;
  std::int64_t value_sum = 0;
  std::int64_t optimum_sum = 0;
  std::int64_t n_opt = 0;
  std::vector<MetricsRow> rows;

  std::size_t count() const noexcept { return rows.size(); }
  double val_bar() const noexcept;
  double val_bar_opt() const noexcept;
  /// value_sum / optimum_sum; 1 when both are 0.
  double ratio() const noexcept;
};

/// Throws ParameterError on length mismatch or empty input and
/// IntegrityError if a value exceeds its optimum.
MetricsReport compute_metrics(std::span<const std::int64_t> values,
                              std::span<const std::int64_t> optima, std::int64_t scale = 1);

/// Strict wins of a over b and of b over a. With `last_half`, only ids
/// M/2+1..M (0-based positions floor(M/2)..M-1) count.
std::pair<std::int64_t, std::int64_t> compare_highest(std::span<const std::int64_t> a,
                                                      std::span<const std::int64_t> b,
                                                      bool last_half);

struct CurvePoint {
  std::int64_t t = 0;
  double best_valbar = 0.0;

  friend bool operator==(const CurvePoint &, const CurvePoint &) = default;
};

/// Best-so-far mean value sampled every `window` steps, plus the final step.
std::vector<CurvePoint> learning_curve(const TrainLog &log, std::int64_t window);

/// First episode-end step at which best_valbar reaches `fraction` of its
/// final value; -1 for an empty log.
std::int64_t first_reach_step(const TrainLog &log, double fraction);

/// One line of a comparison table.
struct TableRow {
  std::string dataset;
  std::string method;
  std::int64_t n = 0;
  MetricsReport report;
  std::int64_t n_highest = 0;
};

/// Aligned text table with columns Dataset, Method, N, Val-bar, #opt,
/// #highest, Val-bar_opt, ratio (ratio as a percentage, 3 decimals).
std::string format_table(std::span<const TableRow> rows);
std::string format_csv(std::span<const TableRow> rows);

struct NamedCurve {
  std::string label;
  std::vector<CurvePoint> points;
};

/// Line chart of learning curves, one polyline per curve.
std::string learning_curves_svg(std::span<const NamedCurve> curves, const std::string &title);

// Solution file: optional '#' comment lines, then one line per instance:
//   <id> <value> <weight> <item> <item> ...
// with scaled integer totals and 1-based item indices.
struct SolutionRecord {
  std::int64_t id = 0;
  Solution solution;

  friend bool operator==(const SolutionRecord &, const SolutionRecord &) = default;
};

void write_solutions(std::span<const SolutionRecord> records, std::ostream &out,
                     const std::string &comment = {});
std::vector<SolutionRecord> read_solutions(std::istream &in);
std::vector<SolutionRecord> read_solutions(const std::filesystem::path &path);

/// Values aligned to dataset ids 1..M. Throws ParameterError if an id is
/// missing, and IntegrityError if a solution is infeasible for its instance.
std::vector<std::int64_t> solution_values(const Dataset &ds,
                                          std::span<const SolutionRecord> records);

} // namespace kpdrl
