#include "rfabe/policy.h"

#include <gtest/gtest.h>

#include <random>

#include "rfabe/rng.h"
#include "testing/test_util.h"

namespace rfabe {
namespace {

using testing::random_formula;

Scalar s(std::int64_t v) { return Scalar::from_i64(v); }

// Checks that the coefficients use only rows in `attrs` and reconstruct e1.
void expect_reconstructs(const MspPolicy& m, const AttributeSet& attrs,
                         const CoefficientSolution& sol) {
  std::vector<Scalar> acc(m.cols());
  for (const auto& [row, value] : sol) {
    ASSERT_LT(row, m.rows());
    EXPECT_TRUE(attrs.contains(m.attribute(row)));
    EXPECT_FALSE(value.is_zero());
    for (std::size_t j = 0; j < m.cols(); ++j) acc[j] = acc[j] + value * m.at(row, j);
  }
  EXPECT_TRUE(acc[0].is_one());
  for (std::size_t j = 1; j < m.cols(); ++j) EXPECT_TRUE(acc[j].is_zero()) << j;
}

std::vector<AttributeSet> all_subsets(const std::vector<std::string>& pool) {
  std::vector<AttributeSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pool.size()); ++mask) {
    AttributeSet set;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask & (std::size_t{1} << i)) set.insert(pool[i]);
    }
    out.push_back(std::move(set));
  }
  return out;
}

TEST(ParserTest, Precedence) {
  EXPECT_EQ(parse_policy("A OR B AND C").to_string(), "(A OR (B AND C))");
  EXPECT_EQ(parse_policy("A AND B OR C").to_string(), "((A AND B) OR C)");
  EXPECT_EQ(parse_policy("A AND B AND C").to_string(), "((A AND B) AND C)");
  EXPECT_EQ(parse_policy("(A OR B) AND C").to_string(), "((A OR B) AND C)");
  EXPECT_EQ(parse_policy("  dept:icu.v2-x_1  ").to_string(), "dept:icu.v2-x_1");
}

TEST(ParserTest, KeywordsAreCaseSensitive) {
  // Lowercase "and" is an attribute, so two attributes in a row is an error.
  EXPECT_THROW(parse_policy("A and B"), ParseError);
  EXPECT_EQ(parse_policy("and").to_string(), "and");
}

TEST(ParserTest, ErrorsCarryPosition) {
  struct Case {
    const char* text;
    std::size_t pos;
  };
  for (const Case& c : {Case{"", 0}, Case{"   ", 3}, Case{"A AND", 5},
                        Case{"A $ B", 2}, Case{"(A OR B", 7}, Case{"A B", 2},
                        Case{"AND A", 0}, Case{"A OR )", 5}, Case{"()", 1}}) {
    try {
      parse_policy(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.position(), c.pos) << c.text << ": " << e.what();
    }
  }
}

TEST(ParserTest, RoundTripsRandomFormulas) {
  std::mt19937_64 gen(1);
  const std::vector<std::string> pool{"a", "b", "c:d", "e.f", "g-h"};
  for (int i = 0; i < 300; ++i) {
    const PolicyAst ast = random_formula(gen, 1 + static_cast<int>(gen() % 10), pool);
    EXPECT_EQ(parse_policy(ast.to_string()), ast);
  }
}

TEST(CompileTest, AndOfTwo) {
  const MspPolicy m = compile_policy("A AND B");
  EXPECT_EQ(m, MspPolicy(2, 2, {s(1), s(1), s(0), s(-1)}, {"A", "B"}));
}

TEST(CompileTest, OrSharesVector) {
  const MspPolicy m = compile_policy("A OR B");
  EXPECT_EQ(m, MspPolicy(2, 1, {s(1), s(1)}, {"A", "B"}));
}

TEST(CompileTest, ReusedAttributeOccurrences) {
  const MspPolicy m = compile_policy("A AND (B OR A)");
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.cols(), 2u);
  EXPECT_EQ(m.max_reuse(), 2u);
  EXPECT_EQ(m.labels(), (std::vector<std::string>{"A", "B", "A"}));
  EXPECT_EQ(m.occurrence(0), 1u);
  EXPECT_EQ(m.occurrence(1), 1u);
  EXPECT_EQ(m.occurrence(2), 2u);
  EXPECT_EQ(m, MspPolicy(3, 2, {s(1), s(1), s(0), s(-1), s(0), s(-1)},
                         {"A", "B", "A"}));
}

TEST(CompileTest, DimensionsTrackGates) {
  // One row per leaf; one column per AND gate plus one.
  std::mt19937_64 gen(2);
  const std::vector<std::string> pool{"a", "b", "c", "d"};
  for (int i = 0; i < 200; ++i) {
    const PolicyAst ast = random_formula(gen, 1 + static_cast<int>(gen() % 12), pool);
    const std::string text = ast.to_string();
    std::size_t ands = 0;
    for (std::size_t p = text.find(" AND "); p != std::string::npos;
         p = text.find(" AND ", p + 1)) {
      ++ands;
    }
    const MspPolicy m = compile_msp(ast);
    EXPECT_EQ(m.rows(), ast.leaves().size());
    EXPECT_EQ(m.cols(), ands + 1);
  }
}

TEST(SolverTest, AndOfTwoUsesUnitCoefficients) {
  const MspPolicy m = compile_policy("A AND B");
  auto sol = solve_coefficients(m, {"A", "B"});
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(*sol, (CoefficientSolution{{0, s(1)}, {1, s(1)}}));
  EXPECT_FALSE(solve_coefficients(m, {"A"}).has_value());
  EXPECT_FALSE(solve_coefficients(m, {}).has_value());
}

TEST(SolverTest, OrPicksLowestRow) {
  const MspPolicy m = compile_policy("A OR B OR C");
  auto sol = solve_coefficients(m, {"A", "B", "C"});
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(*sol, (CoefficientSolution{{0, s(1)}}));
  sol = solve_coefficients(m, {"C"});
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(*sol, (CoefficientSolution{{2, s(1)}}));
}

TEST(SolverTest, LongAndChainHasAllOnes) {
  std::string text = "x0";
  AttributeSet all{"x0"};
  for (int i = 1; i < 100; ++i) {
    text += " AND x" + std::to_string(i);
    all.insert("x" + std::to_string(i));
  }
  const MspPolicy m = compile_policy(text);
  auto sol = solve_coefficients(m, all);
  ASSERT_TRUE(sol.has_value());
  ASSERT_EQ(sol->size(), 100u);
  for (const auto& c : *sol) EXPECT_TRUE(c.value.is_one());
  expect_reconstructs(m, all, *sol);
}

// Brute-force oracle: formula evaluation decides satisfaction and the
// returned coefficients must reconstruct e1.
TEST(SolverTest, AgreesWithFormulaOnAllSubsets) {
  std::mt19937_64 gen(3);
  const std::vector<std::string> pool{"a", "b", "c", "d", "e"};
  const auto subsets = all_subsets(pool);
  for (int i = 0; i < 150; ++i) {
    const PolicyAst ast = random_formula(gen, 1 + static_cast<int>(gen() % 9), pool);
    const MspPolicy m = compile_msp(ast);
    for (const auto& set : subsets) {
      auto sol = solve_coefficients(m, set);
      ASSERT_EQ(sol.has_value(), ast.evaluate(set)) << ast.to_string();
      if (sol) expect_reconstructs(m, set, *sol);
    }
  }
}

TEST(SolverTest, HandlesGeneralMatrices) {
  // Non-unit entries force pivot normalisation.
  DeterministicRandom rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Scalar> entries;
    for (int k = 0; k < 4 * 3; ++k) entries.push_back(Scalar::random(rng));
    const MspPolicy m(4, 3, entries, {"p", "q", "r", "t"});
    auto sol = solve_coefficients(m, {"p", "q", "r"});
    ASSERT_TRUE(sol.has_value());
    expect_reconstructs(m, {"p", "q", "r"}, *sol);
    EXPECT_FALSE(solve_coefficients(m, {"p", "q"}).has_value());
  }
}

TEST(ComposeTest, SmallExample) {
  const MspPolicy c = and_compose(compile_policy("A"), compile_policy("B"));
  EXPECT_EQ(c, MspPolicy(2, 2, {s(1), s(-1), s(0), s(1)}, {"A", "B"}));
}

TEST(ComposeTest, RejectsOverlap) {
  EXPECT_THROW(and_compose(compile_policy("A OR B"), compile_policy("B")),
               std::invalid_argument);
}

TEST(ComposeTest, MatchesConjunctionOnAllSubsets) {
  std::mt19937_64 gen(5);
  const std::vector<std::string> left_pool{"a", "b", "c"};
  const std::vector<std::string> right_pool{"x", "y", "z"};
  std::vector<std::string> pool = left_pool;
  pool.insert(pool.end(), right_pool.begin(), right_pool.end());
  const auto subsets = all_subsets(pool);
  for (int i = 0; i < 60; ++i) {
    const PolicyAst l = random_formula(gen, 1 + static_cast<int>(gen() % 6), left_pool);
    const PolicyAst r = random_formula(gen, 1 + static_cast<int>(gen() % 6), right_pool);
    const MspPolicy ml = compile_msp(l), mr = compile_msp(r);
    const MspPolicy mc = and_compose(ml, mr);
    EXPECT_EQ(mc.rows(), ml.rows() + mr.rows());
    EXPECT_EQ(mc.cols(), ml.cols() + mr.cols());
    for (const auto& set : subsets) {
      ASSERT_TRUE(check_and_composition(ml, mr, set));
      auto sol = solve_coefficients(mc, set);
      ASSERT_EQ(sol.has_value(), l.evaluate(set) && r.evaluate(set));
      if (sol) expect_reconstructs(mc, set, *sol);
    }
  }
}

TEST(SolverTest, DeterministicAndMonotone) {
  std::mt19937_64 gen(6);
  const std::vector<std::string> pool{"a", "b", "c", "d", "e"};
  const auto subsets = all_subsets(pool);
  for (int i = 0; i < 60; ++i) {
    const MspPolicy m =
        compile_msp(random_formula(gen, 1 + static_cast<int>(gen() % 8), pool));
    for (const auto& set : subsets) {
      const auto first = solve_coefficients(m, set);
      EXPECT_EQ(first, solve_coefficients(m, set));
      if (!first) continue;
      AttributeSet bigger = set;
      bigger.insert(pool[gen() % pool.size()]);
      EXPECT_TRUE(satisfies(m, bigger));
    }
  }
}

TEST(ComposeTest, RandomDepthThreeTriples) {
  std::mt19937_64 gen(7);
  const auto left_pool = testing::attribute_pool("l", 5);
  const auto right_pool = testing::attribute_pool("r", 5);
  std::vector<std::string> pool = left_pool;
  pool.insert(pool.end(), right_pool.begin(), right_pool.end());
  for (int i = 0; i < 500; ++i) {
    const MspPolicy l =
        compile_msp(testing::random_formula_bounded(gen, 3, 8, left_pool));
    const MspPolicy r =
        compile_msp(testing::random_formula_bounded(gen, 3, 8, right_pool));
    AttributeSet set;
    for (const auto& a : pool) {
      if (gen() % 3 != 0) set.insert(a);
    }
    ASSERT_TRUE(check_and_composition(l, r, set));
    const MspPolicy c = and_compose(l, r);
    for (std::size_t row = 0; row < c.rows(); ++row) {
      const std::uint32_t expected =
          row < l.rows() ? l.occurrence(row) : r.occurrence(row - l.rows());
      ASSERT_EQ(c.occurrence(row), expected);
    }
    ASSERT_EQ(c.max_reuse(), std::max(l.max_reuse(), r.max_reuse()));
  }
}

TEST(MspPolicyTest, RejectsBadShapes) {
  EXPECT_THROW(MspPolicy(0, 1, {}, {}), std::invalid_argument);
  EXPECT_THROW(MspPolicy(1, 2, {s(1)}, {"a"}), std::invalid_argument);
  EXPECT_THROW(MspPolicy(1, 1, {s(1)}, {"bad attr"}), std::invalid_argument);
}

}  // namespace
}  // namespace rfabe
