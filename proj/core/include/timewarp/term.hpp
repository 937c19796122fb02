#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "timewarp/warp.hpp"

namespace timewarp {

/// Full term language. UnaryO/UnaryL/UnaryR are never produced by the parser
/// (it desugars `^o ^l ^r` into residuals); the normalizer introduces them.
enum class Op { Var, Id, Bot, Top, Meet, Join, Comp, LRes, RRes, UnaryO, UnaryL, UnaryR };

class Term {
 public:
  static Term var(std::string name);
  static Term id();
  static Term bot();
  static Term top();
  static Term meet(Term l, Term r);
  static Term join(Term l, Term r);
  static Term comp(Term l, Term r);
  static Term lres(Term l, Term r);  // l \ r
  static Term rres(Term l, Term r);  // l / r
  static Term unary_o(Term t);
  static Term unary_l(Term t);
  static Term unary_r(Term t);

  Op op() const noexcept { return node_->op; }
  const std::string& name() const noexcept { return node_->name; }
  /// Left operand, or the operand of a unary node.
  const Term& lhs() const noexcept { return node_->kids[0]; }
  const Term& rhs() const noexcept { return node_->kids[1]; }
  bool is_binary() const noexcept;
  bool is_unary() const noexcept;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    Op op;
    std::string name;
    std::vector<Term> kids;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(Op op, std::string name, std::vector<Term> kids);

  std::shared_ptr<const Node> node_;
};

/// Residual-free fragment: variables, composition, id, ⊥ and the unary
/// operations. Compositions are kept right-nested (`a (b c)`), so the first
/// factor of a Comp is never itself a Comp. Hash is cached; ordering is a
/// total structural order.
class BasicTerm {
 public:
  enum class Kind : std::uint8_t { Var, Id, Bot, Comp, O, L, R };

  static BasicTerm var(std::string name);
  static BasicTerm id();
  static BasicTerm bot();
  static BasicTerm comp(const BasicTerm& l, const BasicTerm& r);
  static BasicTerm o(const BasicTerm& t);
  static BasicTerm l(const BasicTerm& t);
  static BasicTerm r(const BasicTerm& t);

  Kind kind() const noexcept { return node_->kind; }
  const std::string& name() const noexcept { return node_->name; }
  /// First factor of a Comp, or the operand of a unary node.
  const BasicTerm& head() const noexcept { return node_->kids[0]; }
  /// Remaining factors of a Comp.
  const BasicTerm& rest() const noexcept { return node_->kids[1]; }
  std::size_t hash() const noexcept { return node_->hash; }
  /// Node count with composition chains counted as a single node.
  std::size_t complexity() const noexcept { return node_->complexity; }

  friend bool operator==(const BasicTerm& a, const BasicTerm& b) noexcept;
  friend std::strong_ordering operator<=>(const BasicTerm& a, const BasicTerm& b) noexcept;

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<BasicTerm> kids;
    std::size_t hash;
    std::size_t complexity;
  };
  explicit BasicTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static BasicTerm make(Kind k, std::string name, std::vector<BasicTerm> kids);

  std::shared_ptr<const Node> node_;
};

/// A decision problem: s ≈ t, s ≤ t, or id ≤ t₁ ∨ … ∨ tₙ over basic terms.
struct Query {
  enum class Kind { Equation, Inequation, UnitGoal };

  Kind kind = Kind::Inequation;
  Term lhs = Term::id();
  Term rhs = Term::id();
  std::vector<BasicTerm> goals;

  static Query equation(Term s, Term t);
  static Query inequation(Term s, Term t);
  static Query unit_goal(std::vector<BasicTerm> goals);
};

using Valuation = std::map<std::string, Warp>;

std::string print(const Term& t);
std::string print(const BasicTerm& t);
std::string print(const Query& q);
std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const BasicTerm& t);

/// Variables in order of first occurrence (left to right).
std::vector<std::string> free_vars(const Term& t);
std::vector<std::string> free_vars(const BasicTerm& t);
std::vector<std::string> free_vars(const Query& q);

/// Tree size, counting a composition chain as one node and each of the
/// unary sugars (id/t, t\id, ⊤\t) as one node.
std::size_t complexity(const Term& t);
std::size_t complexity(const BasicTerm& t);

/// s ≤ t  ↦  id ≤ t/s; left alone when s is already id.
Query residuate(const Query& inequation);
/// s ≈ t  ↦  {s ≤ t, t ≤ s}.
std::pair<Query, Query> split_equation(const Query& equation);

/// Converts a term that only uses the basic constructors (plus the desugared
/// unary patterns) into a BasicTerm; returns false if it contains anything
/// else.
bool as_basic(const Term& t, BasicTerm& out);
Term to_term(const BasicTerm& t);

/// Semantics. Throws std::out_of_range if a variable is missing from θ.
Warp interpret(const Term& t, const Valuation& theta);
Warp interpret(const BasicTerm& t, const Valuation& theta);

/// The unary patterns as they appear after desugaring: id/t, t\id, ⊤\t.
bool match_unary_l(const Term& t, const Term*& arg);
bool match_unary_r(const Term& t, const Term*& arg);
bool match_unary_o(const Term& t, const Term*& arg);

}  // namespace timewarp

template <>
struct std::hash<timewarp::BasicTerm> {
  std::size_t operator()(const timewarp::BasicTerm& t) const noexcept { return t.hash(); }
};
