#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwfo/classes.hpp"
#include "gwfo/logic.hpp"
#include "gwfo/nice_expr.hpp"

namespace gwfo {

/// P_u(x) = Pr[Po(x) = u] for a numeric count, Pr[Po(x) >= k] for omega.
double poisson_pmf_capped(CapCount u, std::uint32_t k, double x);

/// The same as a nice function of the argument expression `y`.
NiceExpr poisson_pmf_capped_expr(CapCount u, std::uint32_t k, const NiceExpr& y);

/// P_sigma(x), built by the recursion P_sigma(x) = prod_tau P_{g(tau)}(x P_tau(x)).
/// Classes absent from the support contribute their combined factor
/// exp(-x (1 - sum_{tau in support} P_tau(x))).
NiceExpr class_probability_expr(const GammaClass& c);
/// Sum of the class expressions.
NiceExpr class_probability_expr(const ClassEvent& e);

/// Numeric P_sigma(x) by the same recursion, without building expressions.
double class_probability(const GammaClass& c, double x);
double class_probability(const ClassEvent& e, double x);

struct SurvivalSolution {
  double lambda = 0.0;
  /// Pr[tree is infinite]; 0 for lambda <= 1.
  double p = 0.0;
  double q = 1.0;
};

/// Root of 1 - p = exp(-lambda p) in (0, 1] for lambda > 1 (bisection, then
/// Newton); p = 0 for lambda <= 1. Throws std::invalid_argument for lambda <= 0.
SurvivalSolution solve_survival(double lambda);

/// p <- 1 - exp(-lambda p) from p = 1; only used to cross-check solve_survival.
double survival_by_iteration(double lambda, std::size_t iterations);

/// Pr[sigma | tree finite] = P_sigma(q lambda). For lambda <= 1 finiteness is
/// almost sure; that case is rejected unless `allow_subcritical` is set, in
/// which case P_sigma(lambda) is returned.
double finite_conditioned_probability(const GammaClass& c, double lambda, bool allow_subcritical = false);
double finite_conditioned_probability(const ClassEvent& e, double lambda, bool allow_subcritical = false);

/// Pr[sigma | tree infinite] = (f(lambda) - q f(q lambda)) / p with f the class
/// (or summed event) probability. Round-off in [-1e-10, 0) is clamped to 0.
/// Throws std::domain_error for lambda <= 1.
double infinite_conditioned_probability(const GammaClass& c, double lambda);
double infinite_conditioned_probability(const ClassEvent& e, double lambda);

enum class Conditioning { None, Infinite, Finite };

struct SentenceOptions {
  /// Count cap of the class enumeration; defaults to the sentence's quantifier depth.
  std::optional<std::uint32_t> k;
  std::uint64_t cap = kDefaultClassCap;
  /// Re-evaluate each class on two larger representatives and warn when the
  /// sentence's truth value changes.
  bool probe_representatives = true;
};

struct SentenceProbability {
  double value = 0.0;
  /// K_A: the classes whose representative satisfies the sentence.
  ClassEvent classes;
  std::uint64_t classes_total = 0;
  std::vector<std::string> warnings;
};

/// Probability of a standard-dialect sentence, assuming its truth on a tree is
/// fixed by the first `depth` generations with child counts capped at k.
/// That assumption is the caller's; the representative probe only reports
/// evidence against it.
SentenceProbability sentence_probability(const Formula& a, double lambda, std::uint32_t depth,
                                         Conditioning conditioning, SentenceOptions options = {});

}  // namespace gwfo
