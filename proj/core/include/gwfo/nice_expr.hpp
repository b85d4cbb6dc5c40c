#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <memory>
#include <span>
#include <string>

namespace gwfo {

/// Expression in one variable x built only from x, rational constants, +, -,
/// * and exp. Nodes are shared, so an expression is a DAG; copies are cheap.
///
/// The arithmetic operators fold constant subterms and drop neutral elements
/// (x*1, x+0, exp(0)); nothing else is simplified.
class NiceExpr {
 public:
  using Rational = boost::multiprecision::cpp_rational;
  enum class Kind { Identity, Constant, Sum, Difference, Product, Exp };

  static NiceExpr x();
  static NiceExpr constant(Rational value);
  static NiceExpr constant(long long value) { return constant(Rational(value)); }

  friend NiceExpr operator+(const NiceExpr& a, const NiceExpr& b);
  friend NiceExpr operator-(const NiceExpr& a, const NiceExpr& b);
  friend NiceExpr operator*(const NiceExpr& a, const NiceExpr& b);
  friend NiceExpr exp(const NiceExpr& a);

  Kind kind() const noexcept;
  /// Value of a Constant node.
  const Rational& value() const;
  /// Children: two for Sum/Difference/Product, one for Exp, none otherwise.
  std::span<const NiceExpr> operands() const noexcept;

  bool is_constant(long long v) const;

  /// Evaluates in double precision; shared subterms are computed once.
  double evaluate(double at) const;

  /// Number of distinct nodes in the DAG.
  std::size_t node_count() const;

  /// Fully parenthesized text, e.g. "exp(-1*x*exp(-1*x))". Shared subterms
  /// are written out each time they occur.
  std::string to_string() const;

 private:
  struct Node;
  explicit NiceExpr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static NiceExpr node(Kind kind, std::initializer_list<NiceExpr> operands);
  std::shared_ptr<const Node> n_;
};

}  // namespace gwfo
