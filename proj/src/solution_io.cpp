#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "kpdrl/errors.hpp"
#include "kpdrl/metrics.hpp"

namespace kpdrl {

void write_solutions(std::span<const SolutionRecord> records, std::ostream &out,
                     const std::string &comment) {
  if (!comment.empty()) {
    out << "# " << comment << '\n';
  }
  for (const auto &r : records) {
    out << r.id << ' ' << r.solution.total_value << ' ' << r.solution.total_weight;
    for (auto i : r.solution.selected) {
      out << ' ' << i + 1;
    }
    out << '\n';
  }
}

std::vector<SolutionRecord> read_solutions(std::istream &in) {
  std::vector<SolutionRecord> out;
  std::set<std::int64_t> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.starts_with('#')) {
      continue;
    }
    std::istringstream ss(line);
    std::vector<std::int64_t> fields;
    std::string w;
    while (ss >> w) {
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
      if (ec != std::errc{} || ptr != w.data() + w.size()) {
        throw ParseError("expected an integer, got '" + w + "'", line_no);
      }
      fields.push_back(v);
    }
    if (fields.empty()) {
      continue;
    }
    if (fields.size() < 3) {
      throw ParseError("expected '<id> <value> <weight> <items...>'", line_no);
    }
    SolutionRecord r;
    r.id = fields[0];
    if (!ids.insert(r.id).second) {
      throw ParseError("duplicate solution for instance " + std::to_string(r.id), line_no);
    }
    r.solution.total_value = fields[1];
    r.solution.total_weight = fields[2];
    for (std::size_t k = 3; k < fields.size(); ++k) {
      if (fields[k] < 1) {
        throw ParseError("item indices are 1-based", line_no);
      }
      r.solution.selected.push_back(static_cast<std::size_t>(fields[k] - 1));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SolutionRecord> read_solutions(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open solutions file '" + path.string() + "'");
  }
  return read_solutions(in);
}

std::vector<std::int64_t> solution_values(const Dataset &ds,
                                          std::span<const SolutionRecord> records) {
  std::vector<const Solution *> by_id(ds.instances.size(), nullptr);
  for (const auto &r : records) {
    if (r.id < 1 || r.id > static_cast<std::int64_t>(by_id.size())) {
      throw ParameterError("solution for unknown instance id " + std::to_string(r.id));
    }
    by_id[static_cast<std::size_t>(r.id - 1)] = &r.solution;
  }
  std::vector<std::int64_t> values;
  values.reserve(by_id.size());
  for (std::size_t k = 0; k < by_id.size(); ++k) {
    if (!by_id[k]) {
      throw ParameterError("no solution for instance " + std::to_string(k + 1));
    }
    const auto &inst = ds.instances[k];
    if (!is_feasible(inst.items(), inst.capacity(), *by_id[k])) {
      throw IntegrityError("solution for instance " + std::to_string(k + 1) +
                           " is infeasible or its totals are wrong");
    }
    values.push_back(by_id[k]->total_value);
  }
  return values;
}

} // namespace kpdrl
