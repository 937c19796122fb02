#include "timewarp/term.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace timewarp {

// ---- Term -------------------------------------------------------------------

Term Term::make(Op op, std::string name, std::vector<Term> kids) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  n->kids = std::move(kids);
  return Term(std::move(n));
}

Term Term::var(std::string name) { return make(Op::Var, std::move(name), {}); }
Term Term::id() { return make(Op::Id, {}, {}); }
Term Term::bot() { return make(Op::Bot, {}, {}); }
Term Term::top() { return make(Op::Top, {}, {}); }
Term Term::meet(Term l, Term r) { return make(Op::Meet, {}, {std::move(l), std::move(r)}); }
Term Term::join(Term l, Term r) { return make(Op::Join, {}, {std::move(l), std::move(r)}); }
Term Term::comp(Term l, Term r) { return make(Op::Comp, {}, {std::move(l), std::move(r)}); }
Term Term::lres(Term l, Term r) { return make(Op::LRes, {}, {std::move(l), std::move(r)}); }
Term Term::rres(Term l, Term r) { return make(Op::RRes, {}, {std::move(l), std::move(r)}); }
Term Term::unary_o(Term t) { return make(Op::UnaryO, {}, {std::move(t)}); }
Term Term::unary_l(Term t) { return make(Op::UnaryL, {}, {std::move(t)}); }
Term Term::unary_r(Term t) { return make(Op::UnaryR, {}, {std::move(t)}); }

bool Term::is_binary() const noexcept { return node_->kids.size() == 2; }
bool Term::is_unary() const noexcept { return node_->kids.size() == 1; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.name() != b.name()) return false;
  return a.node_->kids == b.node_->kids;
}

bool match_unary_l(const Term& t, const Term*& arg) {
  if (t.op() == Op::UnaryL) {
    arg = &t.lhs();
    return true;
  }
  if (t.op() == Op::RRes && t.lhs().op() == Op::Id) {
    arg = &t.rhs();
    return true;
  }
  return false;
}

bool match_unary_r(const Term& t, const Term*& arg) {
  if (t.op() == Op::UnaryR) {
    arg = &t.lhs();
    return true;
  }
  if (t.op() == Op::LRes && t.rhs().op() == Op::Id) {
    arg = &t.lhs();
    return true;
  }
  return false;
}

bool match_unary_o(const Term& t, const Term*& arg) {
  if (t.op() == Op::UnaryO) {
    arg = &t.lhs();
    return true;
  }
  if (t.op() == Op::LRes && t.lhs().op() == Op::Top) {
    arg = &t.rhs();
    return true;
  }
  return false;
}

// ---- BasicTerm --------------------------------------------------------------

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

BasicTerm BasicTerm::make(Kind k, std::string name, std::vector<BasicTerm> kids) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  std::size_t h = mix(0, static_cast<std::size_t>(k));
  h = mix(h, std::hash<std::string>{}(name));
  std::size_t c = 1;
  for (const BasicTerm& kid : kids) {
    h = mix(h, kid.hash());
    c += kid.complexity();
  }
  // A chain a (b c) is one composition node with factors a, b, c.
  if (k == Kind::Comp && kids[1].kind() == Kind::Comp) c -= 1;
  n->name = std::move(name);
  n->kids = std::move(kids);
  n->hash = h;
  n->complexity = c;
  return BasicTerm(std::move(n));
}

BasicTerm BasicTerm::var(std::string name) { return make(Kind::Var, std::move(name), {}); }
BasicTerm BasicTerm::id() { return make(Kind::Id, {}, {}); }
BasicTerm BasicTerm::bot() { return make(Kind::Bot, {}, {}); }

BasicTerm BasicTerm::comp(const BasicTerm& l, const BasicTerm& r) {
  if (l.kind() == Kind::Comp) return comp(l.head(), comp(l.rest(), r));
  return make(Kind::Comp, {}, {l, r});
}

BasicTerm BasicTerm::o(const BasicTerm& t) { return make(Kind::O, {}, {t}); }
BasicTerm BasicTerm::l(const BasicTerm& t) { return make(Kind::L, {}, {t}); }
BasicTerm BasicTerm::r(const BasicTerm& t) { return make(Kind::R, {}, {t}); }

bool operator==(const BasicTerm& a, const BasicTerm& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name()) return false;
  return a.node_->kids == b.node_->kids;
}

std::strong_ordering operator<=>(const BasicTerm& a, const BasicTerm& b) noexcept {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  const auto& ak = a.node_->kids;
  const auto& bk = b.node_->kids;
  for (std::size_t i = 0; i < ak.size() && i < bk.size(); ++i)
    if (auto c = ak[i] <=> bk[i]; c != 0) return c;
  return ak.size() <=> bk.size();
}

// ---- Queries ----------------------------------------------------------------

Query Query::equation(Term s, Term t) {
  Query q;
  q.kind = Kind::Equation;
  q.lhs = std::move(s);
  q.rhs = std::move(t);
  return q;
}

Query Query::inequation(Term s, Term t) {
  Query q;
  q.kind = Kind::Inequation;
  q.lhs = std::move(s);
  q.rhs = std::move(t);
  return q;
}

Query Query::unit_goal(std::vector<BasicTerm> goals) {
  if (goals.empty()) throw std::invalid_argument("unit goal needs at least one term");
  Query q;
  q.kind = Kind::UnitGoal;
  q.goals = std::move(goals);
  return q;
}

Query residuate(const Query& q) {
  if (q.kind != Query::Kind::Inequation) throw std::invalid_argument("residuate expects an inequation");
  if (q.lhs.op() == Op::Id) return q;
  return Query::inequation(Term::id(), Term::rres(q.rhs, q.lhs));
}

std::pair<Query, Query> split_equation(const Query& q) {
  if (q.kind != Query::Kind::Equation) throw std::invalid_argument("split_equation expects an equation");
  return {Query::inequation(q.lhs, q.rhs), Query::inequation(q.rhs, q.lhs)};
}

// ---- Printing ---------------------------------------------------------------

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Join: return 1;
    case Op::Meet: return 2;
    case Op::LRes:
    case Op::RRes: return 3;
    case Op::Comp: return 4;
    case Op::UnaryO:
    case Op::UnaryL:
    case Op::UnaryR: return 5;
    default: return 6;
  }
}

void print_term(std::string& out, const Term& t, int ctx) {
  bool paren = precedence(t.op()) < ctx;
  if (paren) out += '(';
  switch (t.op()) {
    case Op::Var: out += t.name(); break;
    case Op::Id: out += "id"; break;
    case Op::Bot: out += "bot"; break;
    case Op::Top: out += "top"; break;
    case Op::Join:
      print_term(out, t.lhs(), 1);
      out += " | ";
      print_term(out, t.rhs(), 2);
      break;
    case Op::Meet:
      print_term(out, t.lhs(), 2);
      out += " & ";
      print_term(out, t.rhs(), 3);
      break;
    case Op::LRes:
    case Op::RRes:
      print_term(out, t.lhs(), 4);
      out += t.op() == Op::LRes ? " \\ " : " / ";
      print_term(out, t.rhs(), 4);
      break;
    case Op::Comp:
      print_term(out, t.lhs(), 4);
      out += ' ';
      print_term(out, t.rhs(), 5);
      break;
    case Op::UnaryO:
    case Op::UnaryL:
    case Op::UnaryR:
      print_term(out, t.lhs(), 5);
      out += t.op() == Op::UnaryO ? "^o" : t.op() == Op::UnaryL ? "^l" : "^r";
      break;
  }
  if (paren) out += ')';
}

void print_basic(std::string& out, const BasicTerm& t) {
  using K = BasicTerm::Kind;
  switch (t.kind()) {
    case K::Var: out += t.name(); return;
    case K::Id: out += "id"; return;
    case K::Bot: out += "bot"; return;
    case K::Comp:
      print_basic(out, t.head());
      out += ' ';
      print_basic(out, t.rest());
      return;
    case K::O:
    case K::L:
    case K::R: {
      bool paren = t.head().kind() == K::Comp;
      if (paren) out += '(';
      print_basic(out, t.head());
      if (paren) out += ')';
      out += t.kind() == K::O ? "^o" : t.kind() == K::L ? "^l" : "^r";
      return;
    }
  }
}

}  // namespace

std::string print(const Term& t) {
  std::string out;
  print_term(out, t, 0);
  return out;
}

std::string print(const BasicTerm& t) {
  std::string out;
  print_basic(out, t);
  return out;
}

std::string print(const Query& q) {
  switch (q.kind) {
    case Query::Kind::Equation: return print(q.lhs) + " == " + print(q.rhs);
    case Query::Kind::Inequation: return print(q.lhs) + " <= " + print(q.rhs);
    case Query::Kind::UnitGoal: {
      std::string out = "id <=";
      for (std::size_t i = 0; i < q.goals.size(); ++i) {
        out += i == 0 ? " " : " | ";
        out += print(q.goals[i]);
      }
      return out;
    }
  }
  return {};
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << print(t); }
std::ostream& operator<<(std::ostream& os, const BasicTerm& t) { return os << print(t); }

// ---- Variables and size -----------------------------------------------------

namespace {

void add_var(std::vector<std::string>& out, const std::string& v) {
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

void collect(const Term& t, std::vector<std::string>& out) {
  if (t.op() == Op::Var) add_var(out, t.name());
  if (t.is_unary() || t.is_binary()) collect(t.lhs(), out);
  if (t.is_binary()) collect(t.rhs(), out);
}

void collect(const BasicTerm& t, std::vector<std::string>& out) {
  using K = BasicTerm::Kind;
  switch (t.kind()) {
    case K::Var: add_var(out, t.name()); return;
    case K::Id:
    case K::Bot: return;
    case K::Comp:
      collect(t.head(), out);
      collect(t.rest(), out);
      return;
    default: collect(t.head(), out);
  }
}

std::size_t chain_size(const Term& t);

std::size_t term_size(const Term& t) {
  const Term* arg = nullptr;
  if (match_unary_l(t, arg) || match_unary_r(t, arg) || match_unary_o(t, arg))
    return 1 + term_size(*arg);
  if (t.op() == Op::Comp) return 1 + chain_size(t);
  std::size_t n = 1;
  if (t.is_unary() || t.is_binary()) n += term_size(t.lhs());
  if (t.is_binary()) n += term_size(t.rhs());
  return n;
}

// Sum of factor sizes of a composition chain.
std::size_t chain_size(const Term& t) {
  if (t.op() != Op::Comp) return term_size(t);
  return chain_size(t.lhs()) + chain_size(t.rhs());
}

}  // namespace

std::vector<std::string> free_vars(const Term& t) {
  std::vector<std::string> out;
  collect(t, out);
  return out;
}

std::vector<std::string> free_vars(const BasicTerm& t) {
  std::vector<std::string> out;
  collect(t, out);
  return out;
}

std::vector<std::string> free_vars(const Query& q) {
  std::vector<std::string> out;
  if (q.kind == Query::Kind::UnitGoal) {
    for (const BasicTerm& g : q.goals) collect(g, out);
  } else {
    collect(q.lhs, out);
    collect(q.rhs, out);
  }
  return out;
}

std::size_t complexity(const Term& t) { return term_size(t); }
std::size_t complexity(const BasicTerm& t) { return t.complexity(); }

// ---- Conversions and semantics ----------------------------------------------

bool as_basic(const Term& t, BasicTerm& out) {
  switch (t.op()) {
    case Op::Var: out = BasicTerm::var(t.name()); return true;
    case Op::Id: out = BasicTerm::id(); return true;
    case Op::Bot: out = BasicTerm::bot(); return true;
    case Op::Comp: {
      BasicTerm l = BasicTerm::id(), r = BasicTerm::id();
      if (!as_basic(t.lhs(), l) || !as_basic(t.rhs(), r)) return false;
      out = BasicTerm::comp(l, r);
      return true;
    }
    default: break;
  }
  const Term* arg = nullptr;
  BasicTerm inner = BasicTerm::id();
  if (match_unary_l(t, arg) && as_basic(*arg, inner)) {
    out = BasicTerm::l(inner);
    return true;
  }
  if (match_unary_r(t, arg) && as_basic(*arg, inner)) {
    out = BasicTerm::r(inner);
    return true;
  }
  if (match_unary_o(t, arg) && as_basic(*arg, inner)) {
    out = BasicTerm::o(inner);
    return true;
  }
  return false;
}

Term to_term(const BasicTerm& t) {
  using K = BasicTerm::Kind;
  switch (t.kind()) {
    case K::Var: return Term::var(t.name());
    case K::Id: return Term::id();
    case K::Bot: return Term::bot();
    case K::Comp: return Term::comp(to_term(t.head()), to_term(t.rest()));
    case K::O: return Term::unary_o(to_term(t.head()));
    case K::L: return Term::unary_l(to_term(t.head()));
    case K::R: return Term::unary_r(to_term(t.head()));
  }
  return Term::id();
}

Warp interpret(const Term& t, const Valuation& theta) {
  switch (t.op()) {
    case Op::Var: return theta.at(t.name());
    case Op::Id: return Warp::identity();
    case Op::Bot: return Warp::bottom();
    case Op::Top: return Warp::top();
    case Op::Meet: return meet(interpret(t.lhs(), theta), interpret(t.rhs(), theta));
    case Op::Join: return join(interpret(t.lhs(), theta), interpret(t.rhs(), theta));
    case Op::Comp: return compose(interpret(t.lhs(), theta), interpret(t.rhs(), theta));
    case Op::LRes: return lres(interpret(t.lhs(), theta), interpret(t.rhs(), theta));
    case Op::RRes: return rres(interpret(t.lhs(), theta), interpret(t.rhs(), theta));
    case Op::UnaryO: return op_o(interpret(t.lhs(), theta));
    case Op::UnaryL: return op_l(interpret(t.lhs(), theta));
    case Op::UnaryR: return op_r(interpret(t.lhs(), theta));
  }
  return Warp::identity();
}

Warp interpret(const BasicTerm& t, const Valuation& theta) {
  using K = BasicTerm::Kind;
  switch (t.kind()) {
    case K::Var: return theta.at(t.name());
    case K::Id: return Warp::identity();
    case K::Bot: return Warp::bottom();
    case K::Comp: return compose(interpret(t.head(), theta), interpret(t.rest(), theta));
    case K::O: return op_o(interpret(t.head(), theta));
    case K::L: return op_l(interpret(t.head(), theta));
    case K::R: return op_r(interpret(t.head(), theta));
  }
  return Warp::identity();
}

}  // namespace timewarp
