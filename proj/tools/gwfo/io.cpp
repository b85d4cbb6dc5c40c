#include "io.hpp"

#include <charconv>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <sstream>

namespace gwfo::cli {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_or_literal(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError(fmt::format("cannot write '{}'", path));
  out << text;
}

LoadedTree load_tree(const std::string& arg) {
  const std::string text = file_or_literal(arg);
  if (text.find('*') != std::string::npos) {
    auto m = parse_marked_tree(text);
    return {std::move(m.tree), m.marked};
  }
  return {parse_tree(text), std::nullopt};
}

GammaClass load_class(const std::string& arg, std::optional<std::uint32_t> k, std::optional<std::uint32_t> depth) {
  const std::string text = file_or_literal(arg);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text.compare(first, 2, "k=") == 0) {
    GammaClass c = parse_class_file(text);
    if ((k && *k != c.k()) || (depth && *depth != c.depth()))
      throw UsageError(fmt::format("class file declares k={} depth={}, which disagrees with the options", c.k(),
                                   c.depth()));
    return c;
  }
  if (!k || !depth) throw UsageError("class text without a header needs --k and --depth");
  return parse_class(text, *k, *depth);
}

namespace {

template <typename T>
std::vector<T> parse_list(std::string_view text, T (*convert)(std::string_view)) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (item.empty()) throw UsageError(fmt::format("empty item in list '{}'", text));
    out.push_back(convert(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t to_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw UsageError(fmt::format("'{}' is not an integer", s));
  return v;
}

double to_double(std::string_view s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw UsageError(fmt::format("'{}' is not a number", s));
  }
}

}  // namespace

std::vector<std::uint64_t> parse_u64_list(std::string_view text) { return parse_list<std::uint64_t>(text, to_u64); }
std::vector<double> parse_double_list(std::string_view text) { return parse_list<double>(text, to_double); }

}  // namespace gwfo::cli
