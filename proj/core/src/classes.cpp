#include "gwfo/classes.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fmt/format.h>
#include <map>

namespace gwfo {

CapCount CapCount::capped(std::uint64_t count, std::uint32_t k) {
  if (count >= k) return at_least_cap();
  return exactly(static_cast<std::uint32_t>(count));
}

std::string to_string(CapCount c) { return c.omega ? std::string("w") : std::to_string(c.value); }

struct GammaClass::Data {
  std::uint32_t k = 1;
  std::uint32_t depth = 0;
  std::vector<Entry> entries;
  std::string canonical;
};

GammaClass GammaClass::unit(std::uint32_t k) {
  if (k == 0) throw std::invalid_argument("cap k must be at least 1");
  auto d = std::make_shared<Data>();
  d->k = k;
  d->canonical = "*";
  return GammaClass(std::move(d));
}

GammaClass GammaClass::make(std::uint32_t k, std::uint32_t depth, std::vector<Entry> entries) {
  if (k == 0) throw std::invalid_argument("cap k must be at least 1");
  if (depth == 0) {
    if (!entries.empty()) throw std::invalid_argument("depth-0 class has no entries");
    return unit(k);
  }
  for (const auto& e : entries) {
    if (e.cls.k() != k || e.cls.depth() != depth - 1)
      throw std::invalid_argument(fmt::format("entry {} does not belong to Gamma_{} with k={}", e.cls.canonical(),
                                              depth - 1, k));
    if (!e.count.omega && (e.count.value == 0 || e.count.value >= k))
      throw std::invalid_argument(fmt::format("count {} invalid for k={}", e.count.value, k));
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.cls < b.cls; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].cls == entries[i - 1].cls)
      throw std::invalid_argument(fmt::format("duplicate entry {}", entries[i].cls.canonical()));

  auto d = std::make_shared<Data>();
  d->k = k;
  d->depth = depth;
  d->canonical = "{";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) d->canonical += ',';
    d->canonical += to_string(entries[i].count);
    d->canonical += ':';
    d->canonical += entries[i].cls.canonical();
  }
  d->canonical += '}';
  d->entries = std::move(entries);
  return GammaClass(std::move(d));
}

std::uint32_t GammaClass::k() const noexcept { return d_->k; }
std::uint32_t GammaClass::depth() const noexcept { return d_->depth; }
std::span<const GammaClass::Entry> GammaClass::entries() const noexcept { return d_->entries; }
const std::string& GammaClass::canonical() const noexcept { return d_->canonical; }

GammaClass classify(const RootedTree& t, std::uint32_t k, std::uint32_t depth) {
  if (k == 0) throw std::invalid_argument("cap k must be at least 1");
  const auto order = t.bfs_order();
  std::vector<std::optional<GammaClass>> cls(t.size());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    const auto d = t.depth(v);
    if (d > depth) continue;
    if (d == depth) {
      cls[v.index] = GammaClass::unit(k);
      continue;
    }
    std::map<std::string, std::pair<GammaClass, std::uint64_t>> tally;
    for (NodeId c : t.children(v)) {
      const auto& child = *cls[c.index];
      auto [pos, fresh] = tally.try_emplace(child.canonical(), child, 0);
      ++pos->second.second;
    }
    std::vector<GammaClass::Entry> entries;
    for (auto& [_, item] : tally) entries.push_back({item.first, CapCount::capped(item.second, k)});
    cls[v.index] = GammaClass::make(k, depth - d, std::move(entries));
  }
  return *cls[t.root().index];
}

namespace {

// (k+1)^n, or nullopt once it passes `cap`.
std::optional<std::uint64_t> bounded_power(std::uint64_t base, std::uint64_t n, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (out > cap / base) return std::nullopt;
    out *= base;
  }
  return out <= cap ? std::optional(out) : std::nullopt;
}

}  // namespace

std::uint64_t class_count(std::uint32_t k, std::uint32_t depth, std::uint64_t cap) {
  if (k == 0) throw std::invalid_argument("cap k must be at least 1");
  std::uint64_t size = 1;
  for (std::uint32_t j = 1; j <= depth; ++j) {
    const auto next = bounded_power(std::uint64_t{k} + 1, size, cap);
    if (!next)
      throw ClassCountError(fmt::format("|Gamma_{}| = {}^{} exceeds the enumeration cap {}", j, k + 1, size, cap));
    size = *next;
  }
  return size;
}

std::vector<GammaClass> enumerate_classes(std::uint32_t k, std::uint32_t depth, std::uint64_t cap) {
  class_count(k, depth, cap);
  std::vector<GammaClass> level{GammaClass::unit(k)};
  for (std::uint32_t j = 1; j <= depth; ++j) {
    const std::size_t m = level.size();
    // Mixed-radix counter over the k+1 count values of each previous class;
    // digit k stands for omega.
    std::vector<std::uint32_t> digit(m, 0);
    std::vector<GammaClass> next;
    while (true) {
      std::vector<GammaClass::Entry> entries;
      for (std::size_t i = 0; i < m; ++i) {
        if (digit[i] == 0) continue;
        entries.push_back({level[i], digit[i] == k ? CapCount::at_least_cap() : CapCount::exactly(digit[i])});
      }
      next.push_back(GammaClass::make(k, j, std::move(entries)));
      std::size_t pos = 0;
      while (pos < m && digit[pos] == k) digit[pos++] = 0;
      if (pos == m) break;
      ++digit[pos];
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  return level;
}

namespace {

void build_representative(const GammaClass& c, NodeId at, TreeBuilder& b, std::uint32_t omega_copies,
                          std::uint32_t extra_leaves) {
  if (c.depth() == 0) {
    for (std::uint32_t i = 0; i < extra_leaves; ++i) b.add_child(at);
    return;
  }
  for (const auto& e : c.entries()) {
    const std::uint32_t copies = e.count.omega ? omega_copies : e.count.value;
    for (std::uint32_t i = 0; i < copies; ++i) build_representative(e.cls, b.add_child(at), b, omega_copies, extra_leaves);
  }
}

}  // namespace

RootedTree representative(const GammaClass& c) { return representative(c, c.k(), 0); }

RootedTree representative(const GammaClass& c, std::uint32_t omega_copies, std::uint32_t extra_leaves) {
  if (omega_copies < c.k()) throw std::invalid_argument("omega needs at least k copies");
  TreeBuilder b;
  build_representative(c, b.add_root(), b, omega_copies, extra_leaves);
  return b.build();
}

ClassEvent class_event(std::span<const GammaClass> classes) {
  if (classes.empty()) throw std::invalid_argument("cannot infer (k, depth) of an empty class set");
  return class_event(classes.front().k(), classes.front().depth(), classes);
}

ClassEvent class_event(std::uint32_t k, std::uint32_t depth, std::span<const GammaClass> classes) {
  ClassEvent ev{k, depth, {}};
  for (const auto& c : classes) {
    if (c.k() != k || c.depth() != depth)
      throw std::invalid_argument(fmt::format("class {} has (k={}, depth={}), event needs (k={}, depth={})",
                                              c.canonical(), c.k(), c.depth(), k, depth));
    ev.classes.push_back(c);
  }
  std::sort(ev.classes.begin(), ev.classes.end());
  ev.classes.erase(std::unique(ev.classes.begin(), ev.classes.end()), ev.classes.end());
  return ev;
}

ClassParseError::ClassParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(fmt::format("{} at byte {}", what, offset)), offset_(offset), message_(what) {}

namespace {

class ClassParser {
 public:
  ClassParser(std::string_view text, std::uint32_t k) : text_(text), k_(k) {}

  GammaClass parse(std::uint32_t depth) {
    GammaClass c = parse_class(depth);
    skip_ws();
    if (pos_ != text_.size()) throw ClassParseError("trailing input", pos_);
    return c;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char ch) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ch) throw ClassParseError(fmt::format("expected '{}'", ch), pos_);
    ++pos_;
  }

  bool accept(char ch) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  CapCount count() {
    skip_ws();
    const auto at = pos_;
    if (accept('w')) return CapCount::at_least_cap();
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_++] - '0');
      if (v > 1'000'000'000) throw ClassParseError("count too large", at);
    }
    if (pos_ == at) throw ClassParseError("expected a count or 'w'", at);
    if (v == 0 || v >= k_) throw ClassParseError(fmt::format("count {} must lie in 1..{} (use w for >= k)", v, k_ - 1), at);
    return CapCount::exactly(static_cast<std::uint32_t>(v));
  }

  GammaClass parse_class(std::uint32_t depth) {
    skip_ws();
    const auto at = pos_;
    if (depth == 0) {
      expect('*');
      return GammaClass::unit(k_);
    }
    expect('{');
    std::vector<GammaClass::Entry> entries;
    if (!accept('}')) {
      do {
        const CapCount c = count();
        expect(':');
        entries.push_back({parse_class(depth - 1), c});
      } while (accept(','));
      expect('}');
    }
    try {
      return GammaClass::make(k_, depth, std::move(entries));
    } catch (const std::invalid_argument& e) {
      throw ClassParseError(e.what(), at);
    }
  }

  std::string_view text_;
  std::uint32_t k_;
  std::size_t pos_ = 0;
};

}  // namespace

GammaClass parse_class(std::string_view text, std::uint32_t k, std::uint32_t depth) {
  if (k == 0) throw std::invalid_argument("cap k must be at least 1");
  return ClassParser(text, k).parse(depth);
}

GammaClass parse_class_file(std::string_view text) {
  const auto eol = text.find('\n');
  const std::string header(text.substr(0, eol));
  unsigned k = 0, depth = 0;
  char tail = 0;
  if (std::sscanf(header.c_str(), " k=%u depth=%u %c", &k, &depth, &tail) != 2)
    throw ClassParseError("expected header 'k=<k> depth=<i>'", 0);
  const auto body_at = eol == std::string_view::npos ? text.size() : eol + 1;
  try {
    return parse_class(text.substr(body_at), k, depth);
  } catch (const ClassParseError& e) {
    throw ClassParseError(e.message(), body_at + e.offset());
  }
}

std::string serialize_class_file(const GammaClass& c) {
  return fmt::format("k={} depth={}\n{}\n", c.k(), c.depth(), c.canonical());
}

}  // namespace gwfo
