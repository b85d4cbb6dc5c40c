#include "gwfo/calculus.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>
#include <unordered_map>

namespace gwfo {

double poisson_pmf_capped(CapCount u, std::uint32_t k, double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("Poisson mean must be non-negative");
  if (k == 0) throw std::invalid_argument("cap k must be at least 1");
  if (u.omega) return x == 0.0 ? 0.0 : boost::math::gamma_p(static_cast<double>(k), x);
  if (x == 0.0) return u.value == 0 ? 1.0 : 0.0;
  const double i = u.value;
  return std::exp(i * std::log(x) - x - std::lgamma(i + 1.0));
}

NiceExpr poisson_pmf_capped_expr(CapCount u, std::uint32_t k, const NiceExpr& y) {
  if (k == 0) throw std::invalid_argument("cap k must be at least 1");
  auto exact = [&](std::uint32_t i) {
    NiceExpr power = NiceExpr::constant(1);
    NiceExpr::Rational factorial = 1;
    for (std::uint32_t j = 1; j <= i; ++j) {
      power = power * y;
      factorial *= j;
    }
    return NiceExpr::constant(NiceExpr::Rational(1) / factorial) * power * exp(NiceExpr::constant(-1) * y);
  };
  if (!u.omega) return exact(u.value);
  NiceExpr below = NiceExpr::constant(0);
  for (std::uint32_t i = 0; i < k; ++i) below = below + exact(i);
  return NiceExpr::constant(1) - below;
}

namespace {

class ExprBuilder {
 public:
  NiceExpr build(const GammaClass& c) {
    if (c.depth() == 0) return NiceExpr::constant(1);
    if (const auto it = cache_.find(c.canonical()); it != cache_.end()) return it->second;
    const NiceExpr x = NiceExpr::x();
    NiceExpr support = NiceExpr::constant(0);
    NiceExpr product = NiceExpr::constant(1);
    for (const auto& e : c.entries()) {
      const NiceExpr p_tau = build(e.cls);
      support = support + p_tau;
      product = product * poisson_pmf_capped_expr(e.count, c.k(), x * p_tau);
    }
    NiceExpr out = exp(NiceExpr::constant(-1) * x * (NiceExpr::constant(1) - support)) * product;
    cache_.emplace(c.canonical(), out);
    return out;
  }

 private:
  std::unordered_map<std::string, NiceExpr> cache_;
};

class Evaluator {
 public:
  explicit Evaluator(double x) : x_(x) {
    if (!(x >= 0.0)) throw std::invalid_argument("class probability needs x >= 0");
  }

  double operator()(const GammaClass& c) {
    if (c.depth() == 0) return 1.0;
    if (const auto it = cache_.find(c.canonical()); it != cache_.end()) return it->second;
    double support = 0.0;
    double product = 1.0;
    for (const auto& e : c.entries()) {
      const double p_tau = (*this)(e.cls);
      support += p_tau;
      product *= poisson_pmf_capped(e.count, c.k(), x_ * p_tau);
    }
    const double out = std::exp(-x_ * (1.0 - support)) * product;
    cache_.emplace(c.canonical(), out);
    return out;
  }

 private:
  double x_;
  std::unordered_map<std::string, double> cache_;
};

void require_supercritical(double lambda) {
  if (!(lambda > 1.0)) throw std::domain_error("conditioning event has probability zero: lambda must exceed 1");
}

double clamp_roundoff(double v) { return (v < 0.0 && v >= -1e-10) ? 0.0 : v; }

}  // namespace

NiceExpr class_probability_expr(const GammaClass& c) { return ExprBuilder().build(c); }

NiceExpr class_probability_expr(const ClassEvent& e) {
  ExprBuilder builder;
  NiceExpr sum = NiceExpr::constant(0);
  for (const auto& c : e.classes) sum = sum + builder.build(c);
  return sum;
}

double class_probability(const GammaClass& c, double x) { return Evaluator(x)(c); }

double class_probability(const ClassEvent& e, double x) {
  Evaluator eval(x);
  double sum = 0.0;
  for (const auto& c : e.classes) sum += eval(c);
  return sum;
}

SurvivalSolution solve_survival(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be a positive real");
  if (lambda <= 1.0) return {lambda, 0.0, 1.0};
  // g(p) = 1 - exp(-lambda p) - p is positive just above 0 and negative at 1.
  auto g = [lambda](double p) { return -std::expm1(-lambda * p) - p; };
  double lo = 1e-12, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  double p = 0.5 * (lo + hi);
  for (int i = 0; i < 5; ++i) {
    const double slope = lambda * std::exp(-lambda * p) - 1.0;
    if (slope == 0.0) break;
    const double next = p - g(p) / slope;
    if (!(next > 0.0 && next <= 1.0)) break;
    p = next;
  }
  return {lambda, p, 1.0 - p};
}

double survival_by_iteration(double lambda, std::size_t iterations) {
  double p = 1.0;
  for (std::size_t i = 0; i < iterations; ++i) p = -std::expm1(-lambda * p);
  return p;
}

double finite_conditioned_probability(const GammaClass& c, double lambda, bool allow_subcritical) {
  if (lambda <= 1.0) {
    if (!allow_subcritical)
      throw std::domain_error("lambda <= 1: the tree is finite almost surely; pass the subcritical flag");
    return class_probability(c, lambda);
  }
  const auto s = solve_survival(lambda);
  return class_probability(c, s.q * lambda);
}

double finite_conditioned_probability(const ClassEvent& e, double lambda, bool allow_subcritical) {
  if (lambda <= 1.0) {
    if (!allow_subcritical)
      throw std::domain_error("lambda <= 1: the tree is finite almost surely; pass the subcritical flag");
    return class_probability(e, lambda);
  }
  const auto s = solve_survival(lambda);
  return class_probability(e, s.q * lambda);
}

double infinite_conditioned_probability(const GammaClass& c, double lambda) {
  require_supercritical(lambda);
  const auto s = solve_survival(lambda);
  return clamp_roundoff((class_probability(c, lambda) - s.q * class_probability(c, s.q * lambda)) / s.p);
}

double infinite_conditioned_probability(const ClassEvent& e, double lambda) {
  require_supercritical(lambda);
  const auto s = solve_survival(lambda);
  return clamp_roundoff((class_probability(e, lambda) - s.q * class_probability(e, s.q * lambda)) / s.p);
}

SentenceProbability sentence_probability(const Formula& a, double lambda, std::uint32_t depth,
                                         Conditioning conditioning, SentenceOptions options) {
  check_sentence(a, Dialect::standard());
  const std::uint32_t k = options.k.value_or(std::max<std::uint32_t>(1, quantifier_depth(a)));
  const auto classes = enumerate_classes(k, depth, options.cap);

  SentenceProbability out;
  out.classes_total = classes.size();
  std::vector<GammaClass> satisfied;
  for (const auto& c : classes) {
    const bool holds = evaluate(a, representative(c));
    if (holds) satisfied.push_back(c);
    if (!options.probe_representatives) continue;
    if (evaluate(a, representative(c, k + 1, 0)) != holds)
      out.warnings.push_back(fmt::format("class {}: truth changes when omega is realized by {} copies", c.canonical(), k + 1));
    if (evaluate(a, representative(c, k, 1)) != holds)
      out.warnings.push_back(fmt::format("class {}: truth changes when generation {} gets children", c.canonical(), depth));
  }
  out.classes = class_event(k, depth, satisfied);

  switch (conditioning) {
    case Conditioning::None:
      out.value = class_probability(out.classes, lambda);
      break;
    case Conditioning::Finite:
      out.value = finite_conditioned_probability(out.classes, lambda);
      break;
    case Conditioning::Infinite:
      out.value = infinite_conditioned_probability(out.classes, lambda);
      break;
  }
  return out;
}

}  // namespace gwfo
