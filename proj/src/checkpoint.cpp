#include "kpdrl/checkpoint.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kpdrl/errors.hpp"
#include "kpdrl/features.hpp"

namespace kpdrl {

namespace {

constexpr std::string_view kMagic = "kpdrl-checkpoint";
constexpr int kVersion = 1;

void write_le(std::ostream &out, std::span<const double> xs) {
  std::array<char, 8> bytes{};
  for (double x : xs) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    for (auto &b : bytes) {
      b = static_cast<char>(bits & 0xffU);
      bits >>= 8;
    }
    out.write(bytes.data(), bytes.size());
  }
}

void read_le(std::istream &in, std::span<double> xs) {
  std::array<unsigned char, 8> bytes{};
  for (auto &x : xs) {
    if (!in.read(reinterpret_cast<char *>(bytes.data()), bytes.size())) {
      throw ParseError("checkpoint data is truncated", 0);
    }
    std::uint64_t bits = 0;
    for (std::size_t k = bytes.size(); k-- > 0;) {
      bits = (bits << 8) | bytes[k];
    }
    x = std::bit_cast<double>(bits);
  }
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::vector<std::string> header_line(std::istream &in, std::size_t &line_no) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("checkpoint header is truncated", line_no + 1);
  }
  ++line_no;
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) {
    out.push_back(w);
  }
  return out;
}

template <typename T> T number(const std::string &s, std::size_t line_no) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + s + "' in checkpoint header", line_no);
  }
  return v;
}

std::vector<std::size_t> dims_field(const std::vector<std::string> &w, std::string_view key,
                                    std::size_t line_no) {
  if (w.size() < 3 || w[0] != key) {
    throw ParseError("expected '" + std::string(key) + " <dims...>'", line_no);
  }
  std::vector<std::size_t> dims;
  for (std::size_t k = 1; k < w.size(); ++k) {
    dims.push_back(number<std::size_t>(w[k], line_no));
  }
  return dims;
}

} // namespace

void save_checkpoint(const ActorCritic &ac, std::ostream &out) {
  const auto &cfg = ac.policy_opt.config();
  out << kMagic << ' ' << kVersion << '\n' << "N " << ac.max_items() << '\n' << "policy";
  for (auto d : ac.policy.dims()) {
    out << ' ' << d;
  }
  out << '\n' << "value";
  for (auto d : ac.value.dims()) {
    out << ' ' << d;
  }
  out << '\n'
      << "rmsprop " << format_double(cfg.learning_rate) << ' ' << format_double(cfg.decay) << ' '
      << format_double(cfg.epsilon) << '\n';
  const auto count = 2 * (ac.policy.params().size() + ac.value.params().size());
  out << "data " << count << '\n';
  write_le(out, ac.policy.params());
  write_le(out, ac.value.params());
  write_le(out, ac.policy_opt.accumulators());
  write_le(out, ac.value_opt.accumulators());
}

void save_checkpoint(const ActorCritic &ac, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  save_checkpoint(ac, out);
  if (!out) {
    throw Error("write to '" + path.string() + "' failed");
  }
}

ActorCritic load_checkpoint(std::istream &in, std::optional<std::size_t> expected_items) {
  std::size_t line_no = 0;
  auto head = header_line(in, line_no);
  if (head.size() != 2 || head[0] != kMagic) {
    throw ParseError("not a kpdrl checkpoint", line_no);
  }
  if (number<int>(head[1], line_no) != kVersion) {
    throw ParseError("unsupported checkpoint version " + head[1], line_no);
  }
  auto n_line = header_line(in, line_no);
  if (n_line.size() != 2 || n_line[0] != "N") {
    throw ParseError("expected 'N <n>'", line_no);
  }
  const auto n = number<std::size_t>(n_line[1], line_no);
  if (expected_items && *expected_items != n) {
    throw DimensionError("checkpoint was trained for N=" + std::to_string(n) + ", expected N=" +
                         std::to_string(*expected_items));
  }
  const auto policy_dims = dims_field(header_line(in, line_no), "policy", line_no);
  const auto value_dims = dims_field(header_line(in, line_no), "value", line_no);
  if (policy_dims.front() != feature_width(n) || policy_dims.back() != n ||
      value_dims.front() != feature_width(n) || value_dims.back() != 1) {
    throw DimensionError("checkpoint layer dimensions do not match N=" + std::to_string(n));
  }
  auto opt = header_line(in, line_no);
  if (opt.size() != 4 || opt[0] != "rmsprop") {
    throw ParseError("expected 'rmsprop <lr> <decay> <eps>'", line_no);
  }
  const RmsPropConfig cfg{number<double>(opt[1], line_no), number<double>(opt[2], line_no),
                          number<double>(opt[3], line_no)};
  auto data = header_line(in, line_no);
  if (data.size() != 2 || data[0] != "data") {
    throw ParseError("expected 'data <count>'", line_no);
  }

  ActorCritic ac;
  ac.policy = Mlp(policy_dims, Head::Softmax);
  ac.value = Mlp(value_dims, Head::Linear);
  ac.policy_opt = RmsProp(ac.policy.params().size(), cfg);
  ac.value_opt = RmsProp(ac.value.params().size(), cfg);
  const auto count = number<std::size_t>(data[1], line_no);
  if (count != 2 * (ac.policy.params().size() + ac.value.params().size())) {
    throw DimensionError("checkpoint data count does not match the layer dimensions");
  }
  read_le(in, ac.policy.params());
  read_le(in, ac.value.params());
  read_le(in, ac.policy_opt.accumulators());
  read_le(in, ac.value_opt.accumulators());
  return ac;
}

ActorCritic load_checkpoint(const std::filesystem::path &path,
                            std::optional<std::size_t> expected_items) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open checkpoint '" + path.string() + "'");
  }
  return load_checkpoint(in, expected_items);
}

} // namespace kpdrl
