#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gwfo/classes.hpp>
#include <gwfo/tree.hpp>

namespace gwfo::cli {

/// Bad arguments or unreadable input; the CLI exits with status 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);

/// Contents of `arg` when it names an existing file, otherwise `arg` itself.
std::string file_or_literal(const std::string& arg);

/// Writes to `path`, or stdout when `path` is empty.
void write_output(const std::string& text, const std::string& path);

/// One tree from a file or literal; a '*' mark, if present, is returned too.
struct LoadedTree {
  RootedTree tree = RootedTree::singleton();
  std::optional<NodeId> marked;
};
LoadedTree load_tree(const std::string& arg);

/// Class from a class file (with header) or from canonical text plus k/depth.
GammaClass load_class(const std::string& arg, std::optional<std::uint32_t> k, std::optional<std::uint32_t> depth);

/// Comma-separated numbers, e.g. "100,200,400".
std::vector<std::uint64_t> parse_u64_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

}  // namespace gwfo::cli
