#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace timewarp {

/// Quantifier-free boolean combination of atoms. Immutable; subformulas are
/// shared.
template <class AtomT>
class Formula {
 public:
  enum class Kind { True, False, Atom, Not, And, Or, Implies, Iff };

  static Formula truth() { return make(Kind::True, {}, {}); }
  static Formula falsity() { return make(Kind::False, {}, {}); }
  static Formula atom(AtomT a) { return make(Kind::Atom, std::move(a), {}); }
  static Formula negate(Formula f) { return make(Kind::Not, {}, {std::move(f)}); }
  static Formula conj(std::vector<Formula> fs) { return make(Kind::And, {}, std::move(fs)); }
  static Formula disj(std::vector<Formula> fs) { return make(Kind::Or, {}, std::move(fs)); }
  static Formula implies(Formula a, Formula b) {
    return make(Kind::Implies, {}, {std::move(a), std::move(b)});
  }
  static Formula iff(Formula a, Formula b) {
    return make(Kind::Iff, {}, {std::move(a), std::move(b)});
  }

  Kind kind() const noexcept { return node_->kind; }
  const AtomT& atom() const noexcept { return node_->atom; }
  const std::vector<Formula>& kids() const noexcept { return node_->kids; }

  template <class AtomEval>
  bool evaluate(AtomEval&& eval) const {
    switch (kind()) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Atom: return eval(atom());
      case Kind::Not: return !kids()[0].evaluate(eval);
      case Kind::And:
        for (const Formula& k : kids())
          if (!k.evaluate(eval)) return false;
        return true;
      case Kind::Or:
        for (const Formula& k : kids())
          if (k.evaluate(eval)) return true;
        return false;
      case Kind::Implies: return !kids()[0].evaluate(eval) || kids()[1].evaluate(eval);
      case Kind::Iff: return kids()[0].evaluate(eval) == kids()[1].evaluate(eval);
    }
    return false;
  }

  /// Replaces every atom by the formula `f(atom)`, keeping the connectives.
  template <class F>
  auto substitute(F&& f) const -> decltype(f(std::declval<const AtomT&>())) {
    using Out = decltype(f(std::declval<const AtomT&>()));
    switch (kind()) {
      case Kind::True: return Out::truth();
      case Kind::False: return Out::falsity();
      case Kind::Atom: return f(atom());
      default: break;
    }
    std::vector<Out> ks;
    ks.reserve(kids().size());
    for (const Formula& k : kids()) ks.push_back(k.substitute(f));
    switch (kind()) {
      case Kind::Not: return Out::negate(std::move(ks[0]));
      case Kind::And: return Out::conj(std::move(ks));
      case Kind::Or: return Out::disj(std::move(ks));
      case Kind::Implies: return Out::implies(std::move(ks[0]), std::move(ks[1]));
      default: return Out::iff(std::move(ks[0]), std::move(ks[1]));
    }
  }

  template <class Visit>
  void for_each_atom(Visit&& v) const {
    if (kind() == Kind::Atom) v(atom());
    for (const Formula& k : kids()) k.for_each_atom(v);
  }

  std::size_t atom_count() const {
    std::size_t n = 0;
    for_each_atom([&](const AtomT&) { ++n; });
    return n;
  }

 private:
  struct Node {
    Kind kind;
    AtomT atom;
    std::vector<Formula> kids;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind k, AtomT a, std::vector<Formula> kids) {
    return Formula(std::make_shared<const Node>(Node{k, std::move(a), std::move(kids)}));
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace timewarp
