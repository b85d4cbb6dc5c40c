#include "gwfo/logic.hpp"

#include <algorithm>
#include <cctype>
#include <fmt/format.h>

namespace gwfo {

FormulaError::FormulaError(Code code, std::size_t position, const std::string& message)
    : std::runtime_error(fmt::format("{} (at byte {})", message, position)), code_(code), position_(position) {}

Formula Formula::eq(Term a, Term b) {
  Formula f;
  f.kind_ = Kind::Eq;
  f.lhs_ = std::move(a);
  f.rhs_ = std::move(b);
  return f;
}

Formula Formula::parent(Term a, Term b) {
  Formula f = eq(std::move(a), std::move(b));
  f.kind_ = Kind::Parent;
  return f;
}

Formula Formula::dist(Term a, Term b, std::uint32_t s) {
  Formula f = eq(std::move(a), std::move(b));
  f.kind_ = Kind::Dist;
  f.distance_ = s;
  return f;
}

Formula Formula::negate(Formula g) {
  Formula f;
  f.kind_ = Kind::Not;
  f.operands_.push_back(std::move(g));
  return f;
}

namespace {
Formula nary(Formula::Kind kind, std::vector<Formula> fs);
}

Formula Formula::conj(std::vector<Formula> fs) {
  if (fs.empty()) throw std::invalid_argument("empty conjunction");
  if (fs.size() == 1) return std::move(fs.front());
  Formula f;
  f.kind_ = Kind::And;
  f.operands_ = std::move(fs);
  return f;
}

Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.empty()) throw std::invalid_argument("empty disjunction");
  if (fs.size() == 1) return std::move(fs.front());
  Formula f;
  f.kind_ = Kind::Or;
  f.operands_ = std::move(fs);
  return f;
}

Formula Formula::implies(Formula a, Formula b) {
  Formula f;
  f.kind_ = Kind::Implies;
  f.operands_.push_back(std::move(a));
  f.operands_.push_back(std::move(b));
  return f;
}

Formula Formula::exists(std::string var, Formula body) {
  Formula f;
  f.kind_ = Kind::Exists;
  f.variable_ = std::move(var);
  f.operands_.push_back(std::move(body));
  return f;
}

Formula Formula::forall(std::string var, Formula body) {
  Formula f = exists(std::move(var), std::move(body));
  f.kind_ = Kind::Forall;
  return f;
}

namespace {

Formula nary(Formula::Kind kind, std::vector<Formula> fs) {
  return kind == Formula::Kind::And ? Formula::conj(std::move(fs)) : Formula::disj(std::move(fs));
}

bool is_atom(const Formula& f) {
  return f.kind() == Formula::Kind::Eq || f.kind() == Formula::Kind::Parent || f.kind() == Formula::Kind::Dist;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, Dialect dialect) : text_(text), dialect_(dialect) {}

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what, FormulaError::Code code = FormulaError::Code::Syntax) const {
    throw FormulaError(code, pos_, what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail(fmt::format("expected '{}'", tok));
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  // Identifier at the cursor without consuming it.
  std::string_view peek_ident() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) return {};
    std::size_t end = pos_ + 1;
    while (end < text_.size() && ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  bool accept_keyword(std::string_view kw) {
    if (peek_ident() != kw) return false;
    pos_ += kw.size();
    return true;
  }

  static bool reserved(std::string_view id) {
    return id == "exists" || id == "forall" || id == "parent" || id == "R";
  }

  std::string identifier() {
    const auto id = peek_ident();
    if (id.empty()) fail("expected an identifier");
    if (reserved(id)) fail(fmt::format("'{}' is reserved", id));
    pos_ += id.size();
    return std::string(id);
  }

  Formula formula() {
    skip_ws();
    if (auto q = quantifier()) return std::move(*q);
    const auto start = pos_;
    Formula lhs = disjunction();
    if (accept("->")) {
      Formula rhs = formula();
      return Formula::implies(std::move(lhs), std::move(rhs)).with_span({start, pos_});
    }
    return lhs;
  }

  std::optional<Formula> quantifier() {
    const auto start = pos_;
    const bool is_exists = accept_keyword("exists");
    if (!is_exists && !accept_keyword("forall")) return std::nullopt;
    std::string var = identifier();
    expect(".");
    scope_.push_back(var);
    Formula body = formula();
    scope_.pop_back();
    Formula q = is_exists ? Formula::exists(std::move(var), std::move(body))
                          : Formula::forall(std::move(var), std::move(body));
    return std::move(q).with_span({start, pos_});
  }

  Formula binary_chain(Formula::Kind kind, std::string_view op, Formula (Parser::*next)()) {
    skip_ws();
    const auto start = pos_;
    std::vector<Formula> parts;
    parts.push_back((this->*next)());
    while (true) {
      skip_ws();
      // '|' / '&' must not be mistaken for the start of another token.
      if (!accept(op)) break;
      parts.push_back((this->*next)());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return nary(kind, std::move(parts)).with_span({start, pos_});
  }

  Formula disjunction() { return binary_chain(Formula::Kind::Or, "|", &Parser::conjunction); }
  Formula conjunction() { return binary_chain(Formula::Kind::And, "&", &Parser::unary); }

  Formula unary() {
    skip_ws();
    const auto start = pos_;
    if (peek("!=")) fail("'!=' needs a left operand");
    if (accept("!")) return Formula::negate(unary()).with_span({start, pos_});
    if (auto q = quantifier()) return std::move(*q);
    if (accept("(")) {
      Formula inner = formula();
      expect(")");
      return inner;
    }
    return atom();
  }

  Term term() {
    skip_ws();
    const auto at = pos_;
    const auto id = peek_ident();
    if (id == "R") {
      pos_ += 1;
      return Term::root();
    }
    std::string name = identifier();
    if (std::find(scope_.begin(), scope_.end(), name) == scope_.end())
      throw FormulaError(FormulaError::Code::UnboundVariable, at, fmt::format("variable '{}' is not bound", name));
    return Term::variable(std::move(name));
  }

  Formula atom() {
    skip_ws();
    const auto start = pos_;
    const auto id = peek_ident();
    const auto after = pos_ + id.size();
    const bool call = after < text_.size() && text_[after] == '(';
    if (id == "parent" && call) {
      pos_ = after + 1;
      Term a = term();
      expect(",");
      Term b = term();
      expect(")");
      return Formula::parent(std::move(a), std::move(b)).with_span({start, pos_});
    }
    if (id == "d" && call && std::find(scope_.begin(), scope_.end(), "d") == scope_.end()) {
      if (dialect_.kind != Dialect::Kind::Ball)
        fail("distance atoms need the ball dialect", FormulaError::Code::DialectMismatch);
      pos_ = after + 1;
      Term a = term();
      expect(",");
      Term b = term();
      expect(")");
      expect("=");
      skip_ws();
      const auto num_at = pos_;
      std::uint64_t s = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        s = s * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
        if (s > 1'000'000'000) fail("distance literal too large", FormulaError::Code::DistanceBound);
        ++pos_;
      }
      if (pos_ == num_at) fail("expected a distance literal");
      if (s < 1 || s > dialect_.max_distance)
        throw FormulaError(FormulaError::Code::DistanceBound, num_at,
                           fmt::format("distance {} outside 1..{}", s, dialect_.max_distance));
      return Formula::dist(std::move(a), std::move(b), static_cast<std::uint32_t>(s)).with_span({start, pos_});
    }
    Term a = term();
    if (accept("!=")) {
      Term b = term();
      return Formula::negate(Formula::eq(std::move(a), std::move(b))).with_span({start, pos_});
    }
    expect("=");
    Term b = term();
    return Formula::eq(std::move(a), std::move(b)).with_span({start, pos_});
  }

  std::string_view text_;
  Dialect dialect_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

void check_impl(const Formula& f, const Dialect& dialect, std::vector<std::string>& scope) {
  auto check_term = [&](const Term& t) {
    if (t.kind == Term::Kind::Variable && std::find(scope.begin(), scope.end(), t.name) == scope.end())
      throw FormulaError(FormulaError::Code::UnboundVariable, f.span().begin,
                         fmt::format("variable '{}' is not bound", t.name));
  };
  switch (f.kind()) {
    case Formula::Kind::Dist:
      if (dialect.kind != Dialect::Kind::Ball)
        throw FormulaError(FormulaError::Code::DialectMismatch, f.span().begin, "distance atom in standard dialect");
      if (f.distance() < 1 || f.distance() > dialect.max_distance)
        throw FormulaError(FormulaError::Code::DistanceBound, f.span().begin,
                           fmt::format("distance {} outside 1..{}", f.distance(), dialect.max_distance));
      [[fallthrough]];
    case Formula::Kind::Eq:
    case Formula::Kind::Parent:
      check_term(f.lhs());
      check_term(f.rhs());
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      scope.push_back(f.variable());
      check_impl(f.operands().front(), dialect, scope);
      scope.pop_back();
      return;
    default:
      for (const auto& g : f.operands()) check_impl(g, dialect, scope);
  }
}

// ---------------------------------------------------------------------------
// Printing

std::string term_text(const Term& t) { return t.kind == Term::Kind::Root ? "R" : t.name; }

std::string print(const Formula& f);

std::string wrapped(const Formula& f) {
  if (is_atom(f) || f.kind() == Formula::Kind::Not) return print(f);
  return "(" + print(f) + ")";
}

std::string print(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Eq:
      return term_text(f.lhs()) + " = " + term_text(f.rhs());
    case Formula::Kind::Parent:
      return "parent(" + term_text(f.lhs()) + ", " + term_text(f.rhs()) + ")";
    case Formula::Kind::Dist:
      return fmt::format("d({}, {}) = {}", term_text(f.lhs()), term_text(f.rhs()), f.distance());
    case Formula::Kind::Not:
      return "!" + wrapped(f.operands().front());
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string out;
      for (std::size_t i = 0; i < f.operands().size(); ++i) {
        if (i) out += f.kind() == Formula::Kind::And ? " & " : " | ";
        out += wrapped(f.operands()[i]);
      }
      return out;
    }
    case Formula::Kind::Implies:
      return wrapped(f.operands()[0]) + " -> " + wrapped(f.operands()[1]);
    case Formula::Kind::Exists:
      return "exists " + f.variable() + ". " + print(f.operands().front());
    case Formula::Kind::Forall:
      return "forall " + f.variable() + ". " + print(f.operands().front());
  }
  return {};
}

// ---------------------------------------------------------------------------
// Evaluation: formulas are compiled to a flat program with variables resolved
// to assignment slots.

struct Op {
  Formula::Kind kind = Formula::Kind::Eq;
  int lhs = -1;  // slot, or -1 for R
  int rhs = -1;
  std::uint32_t distance = 0;
  int slot = 0;
  std::vector<std::uint32_t> kids;
};

class Program {
 public:
  explicit Program(const Formula& f) { root_ = compile(f); }

  std::size_t slots() const { return max_slots_; }
  bool uses_distance() const { return uses_distance_; }
  std::uint32_t root() const { return root_; }
  const Op& op(std::uint32_t i) const { return ops_[i]; }

 private:
  std::uint32_t compile(const Formula& f) {
    Op op;
    op.kind = f.kind();
    auto slot_of = [&](const Term& t) -> int {
      if (t.kind == Term::Kind::Root) return -1;
      for (std::size_t i = scope_.size(); i-- > 0;)
        if (scope_[i] == t.name) return static_cast<int>(i);
      throw FormulaError(FormulaError::Code::UnboundVariable, f.span().begin,
                         fmt::format("variable '{}' is not bound", t.name));
    };
    switch (f.kind()) {
      case Formula::Kind::Dist:
        uses_distance_ = true;
        op.distance = f.distance();
        [[fallthrough]];
      case Formula::Kind::Eq:
      case Formula::Kind::Parent:
        op.lhs = slot_of(f.lhs());
        op.rhs = slot_of(f.rhs());
        break;
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        op.slot = static_cast<int>(scope_.size());
        scope_.push_back(f.variable());
        max_slots_ = std::max(max_slots_, scope_.size());
        op.kids.push_back(compile(f.operands().front()));
        scope_.pop_back();
        break;
      default:
        for (const auto& g : f.operands()) op.kids.push_back(compile(g));
    }
    ops_.push_back(std::move(op));
    return static_cast<std::uint32_t>(ops_.size() - 1);
  }

  std::vector<Op> ops_;
  std::vector<std::string> scope_;
  std::size_t max_slots_ = 0;
  bool uses_distance_ = false;
  std::uint32_t root_ = 0;
};

class Evaluator {
 public:
  Evaluator(const Program& p, const RootedTree& t, NodeId constant)
      : p_(p), t_(t), constant_(constant), assignment_(p.slots(), NodeId{}) {
    if (p.uses_distance()) dist_ = distance_matrix(t);
  }

  bool run() { return eval(p_.root()); }

 private:
  NodeId value(int slot) const { return slot < 0 ? constant_ : assignment_[static_cast<std::size_t>(slot)]; }

  bool eval(std::uint32_t i) {
    const Op& op = p_.op(i);
    switch (op.kind) {
      case Formula::Kind::Eq:
        return value(op.lhs) == value(op.rhs);
      case Formula::Kind::Parent:
        return t_.is_parent(value(op.lhs), value(op.rhs));
      case Formula::Kind::Dist:
        return dist_[value(op.lhs).index * t_.size() + value(op.rhs).index] == op.distance;
      case Formula::Kind::Not:
        return !eval(op.kids[0]);
      case Formula::Kind::And:
        return std::all_of(op.kids.begin(), op.kids.end(), [&](auto k) { return eval(k); });
      case Formula::Kind::Or:
        return std::any_of(op.kids.begin(), op.kids.end(), [&](auto k) { return eval(k); });
      case Formula::Kind::Implies:
        return !eval(op.kids[0]) || eval(op.kids[1]);
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        const bool want = op.kind == Formula::Kind::Exists;
        for (std::uint32_t v = 0; v < t_.size(); ++v) {
          assignment_[static_cast<std::size_t>(op.slot)] = NodeId{v};
          if (eval(op.kids[0]) == want) return want;
        }
        return !want;
      }
    }
    return false;
  }

  const Program& p_;
  const RootedTree& t_;
  NodeId constant_;
  std::vector<NodeId> assignment_;
  std::vector<std::uint32_t> dist_;
};

}  // namespace

Formula parse_formula(std::string_view text, Dialect dialect) { return Parser(text, dialect).parse(); }

std::uint32_t quantifier_depth(const Formula& f) {
  std::uint32_t inner = 0;
  for (const auto& g : f.operands()) inner = std::max(inner, quantifier_depth(g));
  const bool quant = f.kind() == Formula::Kind::Exists || f.kind() == Formula::Kind::Forall;
  return inner + (quant ? 1 : 0);
}

void check_sentence(const Formula& f, Dialect dialect) {
  std::vector<std::string> scope;
  check_impl(f, dialect, scope);
}

bool same_formula(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind() || a.lhs() != b.lhs() || a.rhs() != b.rhs() || a.distance() != b.distance() ||
      a.variable() != b.variable() || a.operands().size() != b.operands().size())
    return false;
  for (std::size_t i = 0; i < a.operands().size(); ++i)
    if (!same_formula(a.operands()[i], b.operands()[i])) return false;
  return true;
}

std::string to_string(const Formula& f) { return print(f); }

bool evaluate(const Formula& f, const RootedTree& t, std::optional<NodeId> designated) {
  if (designated && !t.valid(*designated)) throw std::invalid_argument("designated node out of range");
  const Program program(f);
  return Evaluator(program, t, designated.value_or(t.root())).run();
}

Formula containment_sentence(const RootedTree& pattern) {
  const auto order = pattern.bfs_order();
  std::vector<std::size_t> position(pattern.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i].index] = i;
  auto var = [](std::size_t i) { return Term::variable(fmt::format("v{}", i + 1)); };
  const Term w = Term::variable("w");

  std::vector<Formula> exact_children;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto kids = pattern.children(order[i]);
    if (kids.empty()) {
      exact_children.push_back(Formula::negate(Formula::parent(var(i), w)));
      continue;
    }
    std::vector<Formula> options;
    for (NodeId c : kids) options.push_back(Formula::eq(w, var(position[c.index])));
    exact_children.push_back(Formula::implies(Formula::parent(var(i), w), Formula::disj(std::move(options))));
  }
  Formula body = Formula::forall("w", Formula::conj(std::move(exact_children)));

  // Each clause sits right under the quantifier of its last variable, so
  // evaluation prunes as soon as a partial assignment fails.
  for (std::size_t i = order.size(); i-- > 0;) {
    std::vector<Formula> clauses;
    if (const auto p = pattern.parent(order[i])) clauses.push_back(Formula::parent(var(position[p->index]), var(i)));
    for (std::size_t j = 0; j < i; ++j) clauses.push_back(Formula::negate(Formula::eq(var(j), var(i))));
    clauses.push_back(std::move(body));
    body = Formula::exists(fmt::format("v{}", i + 1), Formula::conj(std::move(clauses)));
  }
  return body;
}

}  // namespace gwfo
