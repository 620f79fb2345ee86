#include "kpdrl/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "kpdrl/errors.hpp"

namespace kpdrl {

double MetricsReport::val_bar() const noexcept {
  return static_cast<double>(value_sum) /
         (static_cast<double>(rows.size()) * static_cast<double>(scale));
}

double MetricsReport::val_bar_opt() const noexcept {
  return static_cast<double>(optimum_sum) /
         (static_cast<double>(rows.size()) * static_cast<double>(scale));
}

double MetricsReport::ratio() const noexcept {
  if (optimum_sum == 0) {
    return 1.0;
  }
  return static_cast<double>(value_sum) / static_cast<double>(optimum_sum);
}

MetricsReport compute_metrics(std::span<const std::int64_t> values,
                              std::span<const std::int64_t> optima, std::int64_t scale) {
  if (values.size() != optima.size()) {
    throw ParameterError("values and optima differ in length");
  }
  if (values.empty()) {
    throw ParameterError("metrics need at least one instance");
  }
  MetricsReport r;
  r.scale = scale;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] > optima[k]) {
      throw IntegrityError("instance " + std::to_string(k + 1) + ": value " +
                           std::to_string(values[k]) + " exceeds the optimum " +
                           std::to_string(optima[k]));
    }
    r.value_sum += values[k];
    r.optimum_sum += optima[k];
    r.n_opt += values[k] == optima[k] ? 1 : 0;
    r.rows.push_back({static_cast<std::int64_t>(k + 1), values[k], optima[k]});
  }
  return r;
}

std::pair<std::int64_t, std::int64_t> compare_highest(std::span<const std::int64_t> a,
                                                      std::span<const std::int64_t> b,
                                                      bool last_half) {
  if (a.size() != b.size()) {
    throw ParameterError("compared value lists differ in length");
  }
  std::pair<std::int64_t, std::int64_t> wins{0, 0};
  for (std::size_t k = last_half ? a.size() / 2 : 0; k < a.size(); ++k) {
    wins.first += a[k] > b[k] ? 1 : 0;
    wins.second += b[k] > a[k] ? 1 : 0;
  }
  return wins;
}

std::vector<CurvePoint> learning_curve(const TrainLog &log, std::int64_t window) {
  if (window < 1) {
    throw ParameterError("curve window must be >= 1");
  }
  std::vector<CurvePoint> out;
  if (log.episodes.empty()) {
    return out;
  }
  const auto last = log.episodes.back().t;
  std::size_t e = 0;
  double current = 0.0;
  auto sample = [&](std::int64_t t) {
    while (e < log.episodes.size() && log.episodes[e].t <= t) {
      current = std::max(current, log.episodes[e].best_valbar);
      ++e;
    }
    out.push_back({t, current});
  };
  for (std::int64_t t = window; t < last; t += window) {
    sample(t);
  }
  sample(last);
  return out;
}

std::int64_t first_reach_step(const TrainLog &log, double fraction) {
  if (log.episodes.empty()) {
    return -1;
  }
  const double target = fraction * log.episodes.back().best_valbar;
  for (const auto &e : log.episodes) {
    if (e.best_valbar >= target) {
      return e.t;
    }
  }
  return log.episodes.back().t;
}

namespace {

std::string fixed(double v, int digits) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*f", digits, v);
  return buf.data();
}

std::vector<std::string> row_cells(const TableRow &r) {
  return {r.dataset,
          r.method,
          std::to_string(r.n),
          fixed(r.report.val_bar(), 3),
          std::to_string(r.report.n_opt),
          std::to_string(r.n_highest),
          fixed(r.report.val_bar_opt(), 3),
          fixed(100.0 * r.report.ratio(), 3) + "%"};
}

const std::array<std::string, 8> kColumns{"Dataset", "Method", "N", "Val-bar", "#opt",
                                          "#highest", "Val-bar_opt", "ratio"};

} // namespace

std::string format_table(std::span<const TableRow> rows) {
  std::vector<std::vector<std::string>> cells;
  cells.emplace_back(kColumns.begin(), kColumns.end());
  for (const auto &r : rows) {
    cells.push_back(row_cells(r));
  }
  std::array<std::size_t, kColumns.size()> width{};
  for (const auto &line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      width[c] = std::max(width[c], line[c].size());
    }
  }
  std::ostringstream out;
  for (const auto &line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      // Text columns left-aligned, numbers right-aligned.
      const auto pad = std::string(width[c] - line[c].size(), ' ');
      out << (c < 2 ? line[c] + pad : pad + line[c]) << (c + 1 < line.size() ? "  " : "\n");
    }
  }
  return out.str();
}

std::string format_csv(std::span<const TableRow> rows) {
  std::ostringstream out;
  out << "dataset,method,n,val_bar,n_opt,n_highest,val_bar_opt,ratio\n";
  for (const auto &r : rows) {
    out << r.dataset << ',' << r.method << ',' << r.n << ',' << fixed(r.report.val_bar(), 6)
        << ',' << r.report.n_opt << ',' << r.n_highest << ','
        << fixed(r.report.val_bar_opt(), 6) << ',' << fixed(r.report.ratio(), 6) << '\n';
  }
  return out.str();
}

std::string learning_curves_svg(std::span<const NamedCurve> curves, const std::string &title) {
  constexpr double kWidth = 640;
  constexpr double kHeight = 400;
  constexpr double kMargin = 50;
  static const std::array<const char *, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                                   "#ff7f0e", "#9467bd", "#8c564b"};
  std::int64_t t_hi = 1;
  double y_lo = 0.0;
  double y_hi = 0.0;
  bool first = true;
  for (const auto &c : curves) {
    for (const auto &p : c.points) {
      t_hi = std::max(t_hi, p.t);
      if (first) {
        y_lo = y_hi = p.best_valbar;
        first = false;
      }
      y_lo = std::min(y_lo, p.best_valbar);
      y_hi = std::max(y_hi, p.best_valbar);
    }
  }
  if (y_hi <= y_lo) {
    y_hi = y_lo + 1.0;
  }
  auto px = [&](std::int64_t t) {
    return kMargin + (kWidth - 2 * kMargin) * static_cast<double>(t) / static_cast<double>(t_hi);
  };
  auto py = [&](double v) {
    return kHeight - kMargin - (kHeight - 2 * kMargin) * (v - y_lo) / (y_hi - y_lo);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
      << "</text>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"end\">timestep " << t_hi << "</text>\n"
      << "<text x=\"5\" y=\"" << kMargin - 5 << "\">" << fixed(y_hi, 2) << "</text>\n"
      << "<text x=\"5\" y=\"" << kHeight - kMargin << "\">" << fixed(y_lo, 2) << "</text>\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto *color = kColors[k % kColors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto &p : curves[k].points) {
      out << fixed(px(p.t), 1) << ',' << fixed(py(p.best_valbar), 1) << ' ';
    }
    out << "\"/>\n"
        << "<text x=\"" << kMargin + 10 << "\" y=\"" << kMargin + 15 + 18 * static_cast<double>(k)
        << "\" fill=\"" << color << "\">" << curves[k].label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

} // namespace kpdrl
