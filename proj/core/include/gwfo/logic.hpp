#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gwfo/tree.hpp"

namespace gwfo {

/// Which first-order vocabulary a formula may use.
///
/// Standard: =, parent(x,y) and the root constant R.
/// Ball: additionally the distance atoms d(x,y)=s with 1 <= s <= max_distance.
/// In the ball dialect R denotes the designated center when one is supplied
/// to evaluate(), matching the round-zero pick of the distance-preserving game.
struct Dialect {
  enum class Kind { Standard, Ball };
  Kind kind = Kind::Standard;
  std::uint32_t max_distance = 0;

  static Dialect standard() { return {}; }
  static Dialect ball(std::uint32_t max_distance) { return {Kind::Ball, max_distance}; }
};

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Term {
  enum class Kind { Variable, Root };
  Kind kind = Kind::Root;
  std::string name;

  static Term root() { return {}; }
  static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }

  friend bool operator==(const Term&, const Term&) = default;
};

/// Immutable formula tree. Variables are referenced by name and resolved to
/// the innermost enclosing quantifier.
class Formula {
 public:
  enum class Kind { Eq, Parent, Dist, Not, And, Or, Implies, Exists, Forall };

  Kind kind() const noexcept { return kind_; }
  const Term& lhs() const noexcept { return lhs_; }
  const Term& rhs() const noexcept { return rhs_; }
  std::uint32_t distance() const noexcept { return distance_; }
  /// Bound variable of a quantifier.
  const std::string& variable() const noexcept { return variable_; }
  const std::vector<Formula>& operands() const noexcept { return operands_; }
  SourceSpan span() const noexcept { return span_; }

  static Formula eq(Term a, Term b);
  static Formula parent(Term a, Term b);
  static Formula dist(Term a, Term b, std::uint32_t s);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula implies(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  Formula with_span(SourceSpan s) && {
    span_ = s;
    return std::move(*this);
  }

 private:
  Kind kind_ = Kind::Eq;
  Term lhs_, rhs_;
  std::uint32_t distance_ = 0;
  std::string variable_;
  std::vector<Formula> operands_;
  SourceSpan span_;
};

class FormulaError : public std::runtime_error {
 public:
  enum class Code { Syntax, UnboundVariable, DistanceBound, DialectMismatch };
  FormulaError(Code code, std::size_t position, const std::string& message);
  Code code() const noexcept { return code_; }
  std::size_t position() const noexcept { return position_; }

 private:
  Code code_;
  std::size_t position_;
};

/// Concrete grammar, loosest binding last:
///   formula  := quant | implies
///   quant    := ("exists" | "forall") ident "." formula
///   implies  := or ("->" formula)?
///   or       := and ("|" and)*
///   and      := unary ("&" unary)*
///   unary    := "!" unary | quant | "(" formula ")" | atom
///   atom     := term "=" term | term "!=" term | "parent(" term "," term ")"
///             | "d(" term "," term ")" "=" number
///   term     := "R" | ident
/// A quantifier body extends as far right as possible. Identifiers may contain
/// letters, digits, '_' and primes (u').
Formula parse_formula(std::string_view text, Dialect dialect = Dialect::standard());

std::uint32_t quantifier_depth(const Formula& f);

/// Throws FormulaError(UnboundVariable) unless every variable is bound, and
/// FormulaError(DistanceBound / DialectMismatch) for distance atoms the dialect forbids.
void check_sentence(const Formula& f, Dialect dialect = Dialect::standard());

/// Structural equality (spans ignored).
bool same_formula(const Formula& a, const Formula& b);

/// Text that parse_formula reads back to an equal formula.
std::string to_string(const Formula& f);

/// Brute-force model check over all assignments (O(n^depth)). `designated`
/// re-targets R for ball-dialect formulas.
bool evaluate(const Formula& f, const RootedTree& t, std::optional<NodeId> designated = std::nullopt);

/// Sentence saying some node's full subtree is isomorphic to `pattern`:
/// distinct v_1..v_s with the pattern's parent relations, none of which has
/// extra children. Quantifier depth is s + 1.
Formula containment_sentence(const RootedTree& pattern);

}  // namespace gwfo
