#include "gwfo/nice_expr.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace gwfo {

struct NiceExpr::Node {
  Kind kind = Kind::Identity;
  Rational value;
  std::vector<NiceExpr> operands;
};

NiceExpr NiceExpr::node(Kind kind, std::initializer_list<NiceExpr> operands) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->operands.assign(operands.begin(), operands.end());
  return NiceExpr(std::move(n));
}

NiceExpr NiceExpr::x() {
  static const NiceExpr identity = node(Kind::Identity, {});
  return identity;
}

NiceExpr NiceExpr::constant(Rational value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = std::move(value);
  return NiceExpr(std::move(n));
}

NiceExpr::Kind NiceExpr::kind() const noexcept { return n_->kind; }

const NiceExpr::Rational& NiceExpr::value() const {
  if (n_->kind != Kind::Constant) throw std::logic_error("not a constant");
  return n_->value;
}

std::span<const NiceExpr> NiceExpr::operands() const noexcept { return n_->operands; }

bool NiceExpr::is_constant(long long v) const { return n_->kind == Kind::Constant && n_->value == v; }

NiceExpr operator+(const NiceExpr& a, const NiceExpr& b) {
  using K = NiceExpr::Kind;
  if (a.kind() == K::Constant && b.kind() == K::Constant) return NiceExpr::constant(a.value() + b.value());
  if (a.is_constant(0)) return b;
  if (b.is_constant(0)) return a;
  return NiceExpr::node(K::Sum, {a, b});
}

NiceExpr operator-(const NiceExpr& a, const NiceExpr& b) {
  using K = NiceExpr::Kind;
  if (a.kind() == K::Constant && b.kind() == K::Constant) return NiceExpr::constant(a.value() - b.value());
  if (b.is_constant(0)) return a;
  return NiceExpr::node(K::Difference, {a, b});
}

NiceExpr operator*(const NiceExpr& a, const NiceExpr& b) {
  using K = NiceExpr::Kind;
  if (a.kind() == K::Constant && b.kind() == K::Constant) return NiceExpr::constant(a.value() * b.value());
  if (a.is_constant(0) || b.is_constant(0)) return NiceExpr::constant(0);
  if (a.is_constant(1)) return b;
  if (b.is_constant(1)) return a;
  return NiceExpr::node(K::Product, {a, b});
}

NiceExpr exp(const NiceExpr& a) {
  if (a.is_constant(0)) return NiceExpr::constant(1);
  return NiceExpr::node(NiceExpr::Kind::Exp, {a});
}

double NiceExpr::evaluate(double at) const {
  std::unordered_map<const Node*, double> cache;
  auto eval = [&](auto&& self, const NiceExpr& e) -> double {
    if (const auto it = cache.find(e.n_.get()); it != cache.end()) return it->second;
    const auto& ops = e.n_->operands;
    double v = 0.0;
    switch (e.n_->kind) {
      case Kind::Identity: v = at; break;
      case Kind::Constant: v = e.n_->value.convert_to<double>(); break;
      case Kind::Sum: v = self(self, ops[0]) + self(self, ops[1]); break;
      case Kind::Difference: v = self(self, ops[0]) - self(self, ops[1]); break;
      case Kind::Product: v = self(self, ops[0]) * self(self, ops[1]); break;
      case Kind::Exp: v = std::exp(self(self, ops[0])); break;
    }
    cache.emplace(e.n_.get(), v);
    return v;
  };
  return eval(eval, *this);
}

std::size_t NiceExpr::node_count() const {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{n_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    for (const auto& op : n->operands) stack.push_back(op.n_.get());
  }
  return seen.size();
}

std::string NiceExpr::to_string() const {
  const auto& ops = n_->operands;
  switch (n_->kind) {
    case Kind::Identity:
      return "x";
    case Kind::Constant:
      return n_->value.str();
    case Kind::Sum:
      return "(" + ops[0].to_string() + " + " + ops[1].to_string() + ")";
    case Kind::Difference:
      return "(" + ops[0].to_string() + " - " + ops[1].to_string() + ")";
    case Kind::Product:
      return ops[0].to_string() + "*" + ops[1].to_string();
    case Kind::Exp:
      return "exp(" + ops[0].to_string() + ")";
  }
  return {};
}

}  // namespace gwfo
