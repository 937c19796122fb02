#include "timewarp/normalize.hpp"

#include <algorithm>

#include "timewarp/errors.hpp"

namespace timewarp {

Term elim_residuals(const Term& t) {
  const Term* arg = nullptr;
  if (match_unary_l(t, arg)) return Term::unary_l(elim_residuals(*arg));
  if (match_unary_o(t, arg)) return Term::unary_o(elim_residuals(*arg));
  if (match_unary_r(t, arg)) return Term::unary_r(elim_residuals(*arg));
  switch (t.op()) {
    case Op::Var:
    case Op::Id:
    case Op::Bot: return t;
    case Op::Top: return Term::unary_l(Term::bot());
    case Op::Meet: return Term::meet(elim_residuals(t.lhs()), elim_residuals(t.rhs()));
    case Op::Join: return Term::join(elim_residuals(t.lhs()), elim_residuals(t.rhs()));
    case Op::Comp: return Term::comp(elim_residuals(t.lhs()), elim_residuals(t.rhs()));
    case Op::LRes: {
      Term f = elim_residuals(t.lhs());
      Term g = elim_residuals(t.rhs());
      Term top = Term::unary_l(Term::bot());
      return Term::join(Term::join(Term::comp(Term::unary_r(f), g),
                                   Term::unary_r(Term::comp(top, f))),
                        Term::unary_o(g));
    }
    case Op::RRes: {
      Term g = elim_residuals(t.lhs());
      Term fl = Term::unary_l(elim_residuals(t.rhs()));
      return Term::join(Term::comp(g, fl), Term::unary_o(fl));
    }
    default: return t;  // unary nodes are matched above
  }
}

namespace {

using K = BasicTerm::Kind;

bool is_top(const BasicTerm& t) { return t.kind() == K::L && t.head().kind() == K::Bot; }

bool closed(const BasicTerm& t) {
  switch (t.kind()) {
    case K::Var: return false;
    case K::Id:
    case K::Bot: return true;
    case K::Comp: return closed(t.head()) && closed(t.rest());
    default: return closed(t.head());
  }
}

// Smallest closed term for each warp denoted by a closed term of complexity
// at most 4. Closed subterms are replaced by these representatives, which
// keeps constants such as ⊥^ℓ^ℓ^o^ℓ from multiplying samples downstream.
class ClosedTable {
 public:
  ClosedTable() {
    std::vector<std::vector<BasicTerm>> by_size(kMax + 1);
    by_size[1] = {BasicTerm::bot(), BasicTerm::id()};
    for (const BasicTerm& t : by_size[1]) add(t);
    for (std::size_t c = 2; c <= kMax; ++c) {
      for (const BasicTerm& t : by_size[c - 1])
        for (BasicTerm u : {BasicTerm::o(t), BasicTerm::l(t), BasicTerm::r(t)})
          if (add(u)) by_size[c].push_back(u);
      // chains a·b with a non-chain: complexity c(a) + c(b) + 1 (or c(a) + c(b)
      // when b is itself a chain)
      for (std::size_t ca = 1; ca < c; ++ca)
        for (std::size_t cb = 1; ca + cb <= c; ++cb)
          for (const BasicTerm& a : by_size[ca])
            for (const BasicTerm& b : by_size[cb]) {
              if (a.kind() == K::Comp) continue;
              BasicTerm u = BasicTerm::comp(a, b);
              if (u.complexity() == c && add(u)) by_size[c].push_back(u);
            }
    }
  }

  const BasicTerm* find(const Warp& w) const {
    for (const auto& [v, t] : reps_)
      if (v == w) return &t;
    return nullptr;
  }

 private:
  static constexpr std::size_t kMax = 4;

  bool add(const BasicTerm& t) {
    Warp w = interpret(t, Valuation{});
    if (find(w)) return false;
    reps_.emplace_back(w, t);
    return true;
  }

  std::vector<std::pair<Warp, BasicTerm>> reps_;
};

const ClosedTable& closed_table() {
  static const ClosedTable table;
  return table;
}

// The representative of a closed term, or nullptr when its value has none.
const BasicTerm* closed_rep(const BasicTerm& t) {
  if (!closed(t)) return nullptr;
  return closed_table().find(interpret(t, Valuation{}));
}

BasicTerm fold(BasicTerm t) {
  const BasicTerm* rep = closed_rep(t);
  return rep ? *rep : t;
}

// The unary operations with ^o made idempotent and closed results folded.
BasicTerm unary(K k, const BasicTerm& t) {
  switch (k) {
    case K::O:
      if (t.kind() == K::O) return t;
      return fold(BasicTerm::o(t));
    case K::L: return fold(BasicTerm::l(t));
    default: return fold(BasicTerm::r(t));
  }
}

}  // namespace

BasicTerm compose_basic(const BasicTerm& a, const BasicTerm& b) {
  if (a.kind() == K::Comp) return compose_basic(a.head(), compose_basic(a.rest(), b));
  if (a.kind() == K::Id) return b;
  if (b.kind() == K::Id) return a;
  // every warp fixes 0, so ⊥ absorbs on both sides
  if (a.kind() == K::Bot || b.kind() == K::Bot) return BasicTerm::bot();
  if (closed(a)) {
    // fold a with the closed prefix of b when that gives a representative
    const BasicTerm& first = b.kind() == K::Comp ? b.head() : b;
    if (closed(first)) {
      const BasicTerm* rep = closed_rep(BasicTerm::comp(a, first));
      if (rep && rep->kind() != K::Comp)
        return b.kind() == K::Comp ? compose_basic(*rep, b.rest()) : *rep;
    }
  }
  return BasicTerm::comp(a, b);
}

namespace {

class Distributor {
 public:
  explicit Distributor(const NormalizeOptions& opts) : opts_(opts) {}

  NormalForm run(const Term& t) {
    switch (t.op()) {
      case Op::Var: return {{BasicTerm::var(t.name())}};
      case Op::Id: return {{BasicTerm::id()}};
      case Op::Bot: return {{BasicTerm::bot()}};
      case Op::Meet: {
        NormalForm a = run(t.lhs());
        NormalForm b = run(t.rhs());
        a.insert(a.end(), b.begin(), b.end());
        return tidy(std::move(a));
      }
      case Op::Join: {
        NormalForm a = run(t.lhs());
        NormalForm b = run(t.rhs());
        guard(a.size() * b.size());
        NormalForm out;
        for (const Clause& x : a)
          for (const Clause& y : b) {
            Clause c = x;
            c.insert(c.end(), y.begin(), y.end());
            out.push_back(std::move(c));
          }
        return tidy(std::move(out));
      }
      case Op::Comp: {
        NormalForm a = run(t.lhs());
        NormalForm b = run(t.rhs());
        guard(a.size() * b.size());
        NormalForm out;
        for (const Clause& x : a)
          for (const Clause& y : b) {
            guard(x.size() * y.size());
            Clause c;
            for (const BasicTerm& u : x)
              for (const BasicTerm& v : y) c.push_back(compose_basic(u, v));
            out.push_back(std::move(c));
          }
        return tidy(std::move(out));
      }
      case Op::UnaryO: {
        NormalForm a = run(t.lhs());
        for (Clause& c : a)
          for (BasicTerm& u : c) u = unary(K::O, u);
        return tidy(std::move(a));
      }
      case Op::UnaryL:
      case Op::UnaryR: return flip(run(t.lhs()), t.op() == Op::UnaryL);
      default:
        throw std::invalid_argument("distribute: residual or ⊤ left in term " + print(t));
    }
  }

  // ^ℓ and ^r swap meets and joins: (⋀ᵢ ⋁ₖ aᵢₖ)^r = ⋁ᵢ ⋀ₖ aᵢₖ^r, which is
  // turned back into a meet of joins by choosing one aᵢₖ from each clause.
  NormalForm flip(const NormalForm& a, bool left) {
    std::size_t combos = 1;
    for (const Clause& c : a) {
      combos *= c.size();
      guard(combos);
    }
    NormalForm out;
    std::vector<std::size_t> pick(a.size(), 0);
    while (true) {
      Clause c;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const BasicTerm& u = a[i][pick[i]];
        c.push_back(unary(left ? K::L : K::R, u));
      }
      out.push_back(std::move(c));
      std::size_t i = a.size();
      while (i > 0) {
        --i;
        if (++pick[i] < a[i].size()) break;
        pick[i] = 0;
        if (i == 0) return tidy(std::move(out));
      }
      if (a.empty()) return tidy(std::move(out));
    }
  }

  NormalForm tidy(NormalForm nf) {
    std::size_t size = 0;
    for (Clause& c : nf) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      for (const BasicTerm& u : c) size += u.complexity();
    }
    guard(size);
    std::sort(nf.begin(), nf.end(), [](const Clause& x, const Clause& y) {
      if (x.size() != y.size()) return x.size() < y.size();
      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    });
    nf.erase(std::unique(nf.begin(), nf.end()), nf.end());
    // A clause that contains another clause is implied by it in the meet.
    NormalForm out;
    for (Clause& c : nf) {
      bool subsumed = std::any_of(out.begin(), out.end(), [&](const Clause& k) {
        return std::includes(c.begin(), c.end(), k.begin(), k.end());
      });
      if (!subsumed) out.push_back(std::move(c));
    }
    return out;
  }

 private:
  void guard(std::size_t n) const {
    if (n > opts_.node_budget)
      throw BudgetExceeded("normal form exceeds the node budget of " +
                           std::to_string(opts_.node_budget));
  }

  const NormalizeOptions& opts_;
};

}  // namespace

NormalForm distribute(const Term& t, const NormalizeOptions& opts) {
  return Distributor(opts).run(t);
}

namespace {

bool has_residual(const Term& t) {
  const Term* arg = nullptr;
  if (match_unary_l(t, arg) || match_unary_o(t, arg) || match_unary_r(t, arg)) return has_residual(*arg);
  switch (t.op()) {
    case Op::Var:
    case Op::Id:
    case Op::Bot: return false;
    case Op::Top:
    case Op::LRes:
    case Op::RRes: return true;
    default: return has_residual(t.lhs()) || has_residual(t.rhs());
  }
}

// Normalizes the arguments of nested residuals first. An argument that
// collapses, to ⊤ say, then does so before the outer residual has copied
// its unreduced expansion into several places.
Term settle(const Term& t, const NormalizeOptions& opts) {
  const Term* arg = nullptr;
  if (match_unary_l(t, arg)) return Term::unary_l(settle(*arg, opts));
  if (match_unary_o(t, arg)) return Term::unary_o(settle(*arg, opts));
  if (match_unary_r(t, arg)) return Term::unary_r(settle(*arg, opts));
  auto arg_nf = [&](const Term& u) { return has_residual(u) ? to_term(normal_form(u, opts)) : u; };
  switch (t.op()) {
    case Op::Meet: return Term::meet(settle(t.lhs(), opts), settle(t.rhs(), opts));
    case Op::Join: return Term::join(settle(t.lhs(), opts), settle(t.rhs(), opts));
    case Op::Comp: return Term::comp(settle(t.lhs(), opts), settle(t.rhs(), opts));
    case Op::LRes: return Term::lres(arg_nf(t.lhs()), arg_nf(t.rhs()));
    case Op::RRes: return Term::rres(arg_nf(t.lhs()), arg_nf(t.rhs()));
    default: return t;
  }
}

}  // namespace

NormalForm normal_form(const Term& t, const NormalizeOptions& opts) {
  NormalForm nf = distribute(elim_residuals(settle(t, opts)), opts);
  // A join with ⊤ is ⊤ and drops out of the meet; ⊥ adds nothing to a join.
  NormalForm out;
  for (Clause& c : nf) {
    if (std::any_of(c.begin(), c.end(), is_top)) continue;
    if (c.size() > 1) std::erase_if(c, [](const BasicTerm& u) { return u.kind() == K::Bot; });
    if (c.empty()) c.push_back(BasicTerm::bot());
    out.push_back(std::move(c));
  }
  return Distributor(opts).tidy(std::move(out));
}

std::vector<Query> unit_goals(const Term& t, const NormalizeOptions& opts) {
  std::vector<Query> goals;
  for (Clause& c : normal_form(t, opts)) {
    // id ≤ c holds outright when some member is a constant above id
    bool trivial = std::any_of(c.begin(), c.end(), [](const BasicTerm& u) {
      return u.kind() == K::Id || (closed(u) && leq(Warp::identity(), interpret(u, Valuation{})));
    });
    if (!trivial) goals.push_back(Query::unit_goal(std::move(c)));
  }
  return goals;
}

Term to_term(const NormalForm& nf) {
  auto clause_term = [](const Clause& c) {
    if (c.empty()) return Term::bot();
    Term t = to_term(c.front());
    for (std::size_t i = 1; i < c.size(); ++i) t = Term::join(t, to_term(c[i]));
    return t;
  };
  if (nf.empty()) return Term::top();
  Term t = clause_term(nf.front());
  for (std::size_t i = 1; i < nf.size(); ++i) t = Term::meet(t, clause_term(nf[i]));
  return t;
}

std::string print(const NormalForm& nf) {
  if (nf.empty()) return "top";
  std::string out;
  for (std::size_t i = 0; i < nf.size(); ++i) {
    if (i > 0) out += " & ";
    bool paren = nf.size() > 1 && nf[i].size() > 1;
    if (paren) out += '(';
    for (std::size_t j = 0; j < nf[i].size(); ++j) {
      if (j > 0) out += " | ";
      out += print(nf[i][j]);
    }
    if (paren) out += ')';
  }
  return out;
}

}  // namespace timewarp
