#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gwfo/tree.hpp"

namespace gwfo {

/// A child count capped at k: 0..k-1, or omega meaning "at least k".
struct CapCount {
  std::uint32_t value = 0;
  bool omega = false;

  static CapCount exactly(std::uint32_t v) { return {v, false}; }
  static CapCount at_least_cap() { return {0, true}; }
  /// Caps a raw count: values >= k become omega.
  static CapCount capped(std::uint64_t count, std::uint32_t k);

  friend bool operator==(CapCount, CapCount) = default;
};

/// Digits, or "w" for omega.
std::string to_string(CapCount c);

/// Element of Gamma_i for cap k.
///
/// Depth 0 is the unit class. A class of depth i >= 1 maps classes of depth
/// i-1 to capped counts; only non-zero entries are stored. Entries are kept
/// sorted by the canonical string of their key, and two classes are equal iff
/// their canonical strings are equal.
class GammaClass {
 public:
  struct Entry;

  /// The depth-0 class.
  static GammaClass unit(std::uint32_t k);

  /// Validates keys (same k, depth - 1, no duplicates) and counts (non-zero,
  /// below k unless omega), then sorts.
  static GammaClass make(std::uint32_t k, std::uint32_t depth, std::vector<Entry> entries);

  std::uint32_t k() const noexcept;
  std::uint32_t depth() const noexcept;
  std::span<const Entry> entries() const noexcept;
  /// "*" at depth 0, otherwise "{count:class,...}".
  const std::string& canonical() const noexcept;

  friend bool operator==(const GammaClass& a, const GammaClass& b) { return a.canonical() == b.canonical(); }
  friend bool operator<(const GammaClass& a, const GammaClass& b) { return a.canonical() < b.canonical(); }

 private:
  struct Data;
  explicit GammaClass(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

struct GammaClass::Entry {
  GammaClass cls;
  CapCount count;
};

/// Class of truncate(t, depth): the root's children are classified at depth-1
/// and counted per class with counts capped at k.
GammaClass classify(const RootedTree& t, std::uint32_t k, std::uint32_t depth);

/// Default upper bound on |Gamma_i| for enumeration.
inline constexpr std::uint64_t kDefaultClassCap = 1'000'000;

class ClassCountError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |Gamma_depth| when it is at most `cap`; throws ClassCountError otherwise.
std::uint64_t class_count(std::uint32_t k, std::uint32_t depth, std::uint64_t cap = kDefaultClassCap);

/// All of Gamma_depth in canonical order. Throws ClassCountError naming
/// |Gamma_j| for the first level j that exceeds `cap`.
std::vector<GammaClass> enumerate_classes(std::uint32_t k, std::uint32_t depth, std::uint64_t cap = kDefaultClassCap);

/// Smallest tree in the class: counts realized exactly, omega by k copies.
RootedTree representative(const GammaClass& c);

/// Variant used to probe whether a property is insensitive to the choice of
/// representative: omega realized by `omega_copies` copies, and every node at
/// generation `depth` given `extra_leaves` children.
RootedTree representative(const GammaClass& c, std::uint32_t omega_copies, std::uint32_t extra_leaves);

/// A union of classes sharing (k, depth).
struct ClassEvent {
  std::uint32_t k = 1;
  std::uint32_t depth = 0;
  /// Sorted canonically, no duplicates.
  std::vector<GammaClass> classes;
};

/// Rejects an empty set and classes with mixed (k, depth).
ClassEvent class_event(std::span<const GammaClass> classes);
ClassEvent class_event(std::uint32_t k, std::uint32_t depth, std::span<const GammaClass> classes);

class ClassParseError : public std::runtime_error {
 public:
  ClassParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }
  /// Description without the offset.
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

/// Parses canonical class text for known (k, depth). Whitespace is ignored and
/// entries may come in any order.
GammaClass parse_class(std::string_view text, std::uint32_t k, std::uint32_t depth);

/// Class file: a header line "k=<k> depth=<i>" followed by the class text.
GammaClass parse_class_file(std::string_view text);
std::string serialize_class_file(const GammaClass& c);

}  // namespace gwfo
