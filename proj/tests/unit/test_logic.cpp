#include <gtest/gtest.h>

#include <gwfo/logic.hpp>

#include "oracles.hpp"

using namespace gwfo;
using gwfo::oracle::all_trees;
using gwfo::oracle::all_trees_up_to;

namespace {

const char* kTwoChildren =
    "exists u. exists v1. exists v2. parent(u,v1) & parent(u,v2) & (forall v. parent(u,v) -> (v = v1 | v = v2))";
const char* kOneChildOneGrandchild =
    "exists u. exists v. parent(R,u) & parent(u,v) & (forall u2. parent(R,u2) -> u2 = u) & "
    "(forall v2. parent(u,v2) -> v2 = v)";

FormulaError::Code error_code(const std::string& text, Dialect d = Dialect::standard()) {
  try {
    parse_formula(text, d);
  } catch (const FormulaError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << text;
  return FormulaError::Code::Syntax;
}

}  // namespace

TEST(Parse, PaperExamplesHaveStatedDepth) {
  EXPECT_EQ(quantifier_depth(parse_formula(kTwoChildren)), 4u);
  EXPECT_EQ(quantifier_depth(parse_formula(kOneChildOneGrandchild)), 3u);
  EXPECT_EQ(quantifier_depth(parse_formula("exists u. parent(R,u)")), 1u);
}

TEST(Parse, DepthIsNestingNotCount) {
  EXPECT_EQ(quantifier_depth(parse_formula("(exists a. a = R) & (exists b. b = R) & (forall c. c = c)")), 1u);
  EXPECT_EQ(quantifier_depth(parse_formula("R = R")), 0u);
  EXPECT_EQ(quantifier_depth(parse_formula("exists a. (R = a | forall b. exists c. parent(b,c))")), 3u);
}

TEST(Parse, Precedence) {
  const auto f = parse_formula("!R = R & R = R | R = R -> R = R -> R = R");
  ASSERT_EQ(f.kind(), Formula::Kind::Implies);
  EXPECT_EQ(f.operands()[0].kind(), Formula::Kind::Or);
  EXPECT_EQ(f.operands()[0].operands()[0].kind(), Formula::Kind::And);
  EXPECT_EQ(f.operands()[0].operands()[0].operands()[0].kind(), Formula::Kind::Not);
  EXPECT_EQ(f.operands()[1].kind(), Formula::Kind::Implies);
}

TEST(Parse, QuantifierBodyExtendsRight) {
  const auto f = parse_formula("exists a. a = R & parent(a, R)");
  ASSERT_EQ(f.kind(), Formula::Kind::Exists);
  EXPECT_EQ(f.operands()[0].kind(), Formula::Kind::And);
}

TEST(Parse, Errors) {
  EXPECT_EQ(error_code("exists u parent(R,u)"), FormulaError::Code::Syntax);
  EXPECT_EQ(error_code("parent(R,u)"), FormulaError::Code::UnboundVariable);
  EXPECT_EQ(error_code("(exists u. u = u) & u = R"), FormulaError::Code::UnboundVariable);
  EXPECT_EQ(error_code("exists u. d(R,u)=1"), FormulaError::Code::DialectMismatch);
  EXPECT_EQ(error_code("exists u. d(R,u)=3", Dialect::ball(2)), FormulaError::Code::DistanceBound);
  EXPECT_EQ(error_code("exists u. d(R,u)=0", Dialect::ball(2)), FormulaError::Code::DistanceBound);
  EXPECT_EQ(error_code("R = R &"), FormulaError::Code::Syntax);
  EXPECT_EQ(error_code(""), FormulaError::Code::Syntax);
}

TEST(Parse, ErrorPositionPointsIntoText) {
  try {
    parse_formula("exists u. parent(R, w)");
    FAIL();
  } catch (const FormulaError& e) {
    EXPECT_EQ(e.position(), 20u);
  }
}

TEST(Print, RoundTripsRandomSentences) {
  Rng rng(Seed{5});
  for (int i = 0; i < 500; ++i) {
    const auto f = oracle::random_sentence(rng, 3);
    const auto back = parse_formula(to_string(f));
    ASSERT_TRUE(same_formula(f, back)) << to_string(f);
    EXPECT_EQ(quantifier_depth(back), quantifier_depth(f));
  }
}

TEST(Print, RoundTripsExamples) {
  for (const char* text : {kTwoChildren, kOneChildOneGrandchild}) {
    const auto f = parse_formula(text);
    EXPECT_TRUE(same_formula(f, parse_formula(to_string(f))));
  }
}

TEST(Evaluate, NoChildOnSingleNode) {
  EXPECT_FALSE(evaluate(parse_formula("exists u. parent(R,u)"), RootedTree::singleton()));
  EXPECT_TRUE(evaluate(parse_formula("exists u. parent(R,u)"), make_path(2)));
}

TEST(Evaluate, OneChildOneGrandchild) {
  const auto f = parse_formula(kOneChildOneGrandchild);
  EXPECT_TRUE(evaluate(f, make_path(3)));
  EXPECT_FALSE(evaluate(f, make_star(2)));
  for (const auto& t : all_trees_up_to(6)) {
    const NodeId r = t.root();
    const bool expected = t.child_count(r) == 1 && t.child_count(t.children(r)[0]) == 1;
    EXPECT_EQ(evaluate(f, t), expected) << serialize_tree(t);
  }
}

TEST(Evaluate, TwoChildrenAsWritten) {
  // As transcribed the sentence lets v1 = v2, so it also holds for one child.
  const auto f = parse_formula(kTwoChildren);
  for (const auto& t : all_trees_up_to(6)) {
    bool expected = false;
    for (std::uint32_t v = 0; v < t.size(); ++v) {
      const auto c = t.child_count(NodeId{v});
      expected = expected || c == 1 || c == 2;
    }
    EXPECT_EQ(evaluate(f, t), expected) << serialize_tree(t);
  }
}

TEST(Evaluate, ParentIsDirected) {
  const auto t = make_path(2);
  EXPECT_TRUE(evaluate(parse_formula("exists c. parent(R,c)"), t));
  EXPECT_FALSE(evaluate(parse_formula("exists c. parent(c,R)"), t));
}

TEST(Evaluate, DistanceAtomsAndCenter) {
  const auto t = parse_tree("((())(()))");
  const auto f = parse_formula("exists x. d(R,x)=4", Dialect::ball(4));
  EXPECT_TRUE(evaluate(f, t, NodeId{2}));
  EXPECT_FALSE(evaluate(f, t, NodeId{0}));
  const auto g = parse_formula("forall x. d(R,x)=1 | d(R,x)=2 | R = x", Dialect::ball(2));
  EXPECT_TRUE(evaluate(g, t, NodeId{0}));
  EXPECT_FALSE(evaluate(g, t, NodeId{1}));
}

TEST(Evaluate, ShadowingUsesInnermostBinding) {
  const auto f = parse_formula("exists x. parent(R,x) & exists x. parent(x,R)");
  EXPECT_FALSE(evaluate(f, make_path(2)));
}

TEST(Containment, SingleNodePatternMeansSomeLeaf) {
  const auto f = containment_sentence(RootedTree::singleton());
  EXPECT_EQ(quantifier_depth(f), 2u);
  for (const auto& t : all_trees_up_to(5)) EXPECT_TRUE(evaluate(f, t));
}

TEST(Containment, DepthIsSizePlusOne) {
  for (const auto& p : all_trees_up_to(4)) EXPECT_EQ(quantifier_depth(containment_sentence(p)), p.size() + 1);
}

TEST(Containment, PathOfTwo) {
  const auto f = containment_sentence(make_path(2));
  EXPECT_TRUE(evaluate(f, make_path(3)));
  EXPECT_FALSE(evaluate(f, make_star(2)));
}

TEST(Containment, MatchesSubtreeContainsExhaustively) {
  const auto patterns = all_trees_up_to(4);
  for (const auto& t : all_trees_up_to(7))
    for (const auto& p : patterns)
      ASSERT_EQ(evaluate(containment_sentence(p), t), subtree_contains(t, p).has_value())
          << serialize_tree(t) << " " << serialize_tree(p);
}

TEST(Containment, MatchesSubtreeContainsOnSampledTrees) {
  const auto patterns = all_trees_up_to(4);
  std::vector<Formula> sentences;
  for (const auto& p : patterns) sentences.push_back(containment_sentence(p));
  for (const auto& t : oracle::sampled_trees(2.0, 50, 200, Seed{0xC0FFEE}))
    for (std::size_t i = 0; i < patterns.size(); ++i)
      ASSERT_EQ(evaluate(sentences[i], t), subtree_contains(t, patterns[i]).has_value()) << serialize_tree(t);
}
