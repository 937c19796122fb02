#include <gtest/gtest.h>

#include "timewarp/parser.hpp"
#include "timewarp/term.hpp"

using namespace timewarp;

namespace {
Term v(const char* n) { return Term::var(n); }
}  // namespace

TEST(Parser, Examples) {
  Query q = parse_query("id <= x \\ x");
  EXPECT_EQ(q.kind, Query::Kind::Inequation);
  EXPECT_EQ(q.lhs, Term::id());
  EXPECT_EQ(q.rhs, Term::lres(v("x"), v("x")));

  EXPECT_EQ(parse_term("x (y | z)"), Term::comp(v("x"), Term::join(v("y"), v("z"))));
  EXPECT_EQ(parse_term("x^l"), Term::rres(Term::id(), v("x")));
  EXPECT_EQ(parse_term("x^r"), Term::lres(v("x"), Term::id()));
  EXPECT_EQ(parse_term("x^o"), Term::lres(Term::top(), v("x")));
}

TEST(Parser, Precedence) {
  // composition binds tighter than meet, meet tighter than join
  EXPECT_EQ(parse_term("x y & z | w"),
            Term::join(Term::meet(Term::comp(v("x"), v("y")), v("z")), v("w")));
  EXPECT_EQ(parse_term("x y z"), Term::comp(Term::comp(v("x"), v("y")), v("z")));
}

TEST(Parser, QueryForms) {
  EXPECT_EQ(parse_query("x == y").kind, Query::Kind::Equation);
  Query bare = parse_query("x");
  EXPECT_EQ(bare.kind, Query::Kind::Inequation);
  EXPECT_EQ(bare.lhs, Term::id());
  EXPECT_EQ(bare.rhs, v("x"));
  std::vector<Query> qs = parse_queries("# comment\nx <= y\n\n  id <= x\\x  # trailing\n");
  EXPECT_EQ(qs.size(), 2u);
}

TEST(Parser, Errors) {
  try {
    parse_query("x <= (y");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parse_query("x <= y <= z"), ParseError);
  EXPECT_THROW(parse_query("x ^q"), ParseError);
  EXPECT_THROW(parse_query(""), ParseError);
}

TEST(Term, PrintAndVars) {
  EXPECT_EQ(print(Term::comp(v("x"), v("y"))), "x y");
  EXPECT_EQ(free_vars(Term::join(Term::lres(v("x"), v("y")), v("x"))), (std::vector<std::string>{"x", "y"}));
  for (const char* text : {"x y x^l | y^l", "(x & y)^r", "x (y | z) w", "top \\ x", "id <= x \\ x", "x == y x"}) {
    Query q = parse_query(text);
    Query again = parse_query(print(q));
    EXPECT_EQ(again.lhs, q.lhs) << text;
    EXPECT_EQ(again.rhs, q.rhs) << text;
  }
}

TEST(Term, Complexity) {
  BasicTerm x = BasicTerm::var("x"), y = BasicTerm::var("y");
  BasicTerm t = BasicTerm::comp(x, BasicTerm::comp(y, BasicTerm::l(x)));
  // chain node + x + y + (^l + x)
  EXPECT_EQ(t.complexity(), 5u);
  EXPECT_EQ(complexity(parse_term("x y x^l")), 5u);
  EXPECT_EQ(x.complexity(), 1u);
}

TEST(Term, ChainsStayRightNested) {
  BasicTerm x = BasicTerm::var("x"), y = BasicTerm::var("y"), z = BasicTerm::var("z");
  BasicTerm a = BasicTerm::comp(BasicTerm::comp(x, y), z);
  BasicTerm b = BasicTerm::comp(x, BasicTerm::comp(y, z));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.head().kind(), BasicTerm::Kind::Comp);
}

TEST(Term, Residuate) {
  Query q = residuate(parse_query("x <= y"));
  EXPECT_EQ(q.lhs, Term::id());
  EXPECT_EQ(q.rhs, Term::rres(v("y"), v("x")));
  Query unit = residuate(parse_query("id <= x"));
  EXPECT_EQ(unit.rhs, v("x"));
  auto [a, b] = split_equation(parse_query("x == y"));
  EXPECT_EQ(a.lhs, v("x"));
  EXPECT_EQ(a.rhs, v("y"));
  EXPECT_EQ(b.lhs, v("y"));
  EXPECT_EQ(b.rhs, v("x"));
}

TEST(Term, Interpret) {
  Valuation theta{{"x", Warp::top()}, {"y", Warp::unit_step()}};
  EXPECT_EQ(interpret(parse_term("x y"), theta)(1), kOmega);
  EXPECT_EQ(interpret(parse_term("y x"), theta)(1), ExtNat(1));
  EXPECT_EQ(interpret(parse_term("top"), {}), Warp::top());
  EXPECT_THROW(interpret(parse_term("z"), theta), std::out_of_range);
  BasicTerm b = BasicTerm::id();
  ASSERT_TRUE(as_basic(parse_term("x y^l"), b));
  EXPECT_EQ(interpret(b, theta), interpret(parse_term("x y^l"), theta));
  EXPECT_FALSE(as_basic(parse_term("x & y"), b));
}
