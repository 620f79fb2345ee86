#include "kpdrl/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kpdrl/errors.hpp"

namespace kpdrl {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
      ++i;
    }
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
      ++i;
    }
    if (i > start) {
      out.push_back(line.substr(start, i - start));
    }
  }
  return out;
}

template <typename T> T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  const auto *end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("expected an integer, got '" + std::string(field) + "'", line_no);
  }
  return value;
}

} // namespace

void write_dataset(const Dataset &ds, std::ostream &out) {
  out << '#' << family_name(ds.family) << ' ' << ds.params.m << ' ' << ds.params.n << ' '
      << ds.params.r << ' ' << ds.params.seed << '\n';
  for (const auto &inst : ds.instances) {
    out << inst.id() << ' ' << inst.size() << ' ' << inst.capacity() << ' ' << inst.scale();
    for (const auto &it : inst.items()) {
      out << ' ' << it.value << ' ' << it.weight;
    }
    out << '\n';
  }
}

void write_dataset(const Dataset &ds, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  write_dataset(ds, out);
  if (!out) {
    throw Error("write to '" + path.string() + "' failed");
  }
}

Dataset read_dataset(std::istream &in) {
  Dataset ds;
  bool have_header = false;
  std::set<std::int64_t> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty() || line.starts_with("##")) {
      continue;
    }
    if (!have_header) {
      if (!fields[0].starts_with('#')) {
        throw ParseError("missing '#family M N R seed' header", line_no);
      }
      const auto family = parse_family(fields[0].substr(1));
      if (!family) {
        throw ParseError("unknown family '" + std::string(fields[0].substr(1)) + "'", line_no);
      }
      if (fields.size() != 5) {
        throw ParseError("header needs 5 fields, got " + std::to_string(fields.size()), line_no);
      }
      ds.family = *family;
      ds.params.m = parse_number<std::int64_t>(fields[1], line_no);
      ds.params.n = parse_number<std::int64_t>(fields[2], line_no);
      ds.params.r = parse_number<std::int64_t>(fields[3], line_no);
      ds.params.seed = parse_number<std::uint64_t>(fields[4], line_no);
      if (ds.params.m < 1 || ds.params.n < 1) {
        throw ParseError("header M and N must be >= 1", line_no);
      }
      have_header = true;
      continue;
    }
    if (fields.size() < 4) {
      throw ParseError("record needs at least 'id n capacity scale'", line_no);
    }
    const auto id = parse_number<std::int64_t>(fields[0], line_no);
    const auto n = parse_number<std::int64_t>(fields[1], line_no);
    const auto capacity = parse_number<std::int64_t>(fields[2], line_no);
    const auto scale = parse_number<std::int64_t>(fields[3], line_no);
    if (n < 1 || n > ds.params.n) {
      throw ParseError("item count " + std::to_string(n) + " outside 1..N", line_no);
    }
    if (fields.size() != 4 + 2 * static_cast<std::size_t>(n)) {
      throw ParseError("record declares " + std::to_string(n) + " items but has " +
                           std::to_string(fields.size() - 4) + " value/weight fields",
                       line_no);
    }
    if (!seen_ids.insert(id).second) {
      throw ParseError("duplicate instance id " + std::to_string(id), line_no);
    }
    std::vector<Item> items(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < items.size(); ++i) {
      items[i].value = parse_number<std::int64_t>(fields[4 + 2 * i], line_no);
      items[i].weight = parse_number<std::int64_t>(fields[5 + 2 * i], line_no);
    }
    try {
      ds.instances.emplace_back(id, std::move(items), capacity, scale);
    } catch (const ParameterError &e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_header) {
    throw ParseError("empty dataset file", 0);
  }
  try {
    ds.validate();
  } catch (const ParameterError &e) {
    throw ParseError(e.what(), line_no);
  }
  return ds;
}

Dataset read_dataset(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open dataset '" + path.string() + "'");
  }
  return read_dataset(in);
}

} // namespace kpdrl
